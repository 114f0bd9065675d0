#include "ehe/ehe.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "ehe/circuits.hpp"
#include "ehe/cryptoval.hpp"
#include "ehe/error.hpp"
#include "ehe/ime.hpp"
#include "ehe/keygen.hpp"
#include "ehe/security.hpp"
#include "ehe/serialize.hpp"

struct ehe_public_key {
  ehe::ImePublicKey v;
};
struct ehe_private_key {
  ehe::ImePrivateKey v;
};
struct ehe_ciphertext {
  ehe::CiphertextStream v;
};
struct ehe_circuit {
  ehe::Circuit v;
};
struct ehe_program {
  ehe::EncryptedProgram v;
};
struct ehe_cv_key {
  ehe::CvKey v;
  std::vector<std::string> names;
};

namespace {

thread_local std::string g_error;

ehe_status status_for(ehe::ErrorCode code) { return static_cast<ehe_status>(ehe::exit_status(code)); }

template <class Fn>
ehe_status guard(Fn&& fn) {
  g_error.clear();
  try {
    fn();
    return EHE_OK;
  } catch (const ehe::Error& e) {
    g_error = std::string(ehe::error_code_name(e.code())) + ": " + e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return EHE_ERR_BUDGET;
  } catch (const std::exception& e) {
    g_error = e.what();
    return EHE_ERR_USAGE;
  }
}

void need(const void* p, const char* what) {
  ehe::require(p != nullptr, ehe::ErrorCode::kParameter, std::string(what) + " must not be null");
}

ehe::BitVec unpack(const uint8_t* bytes, uint64_t bits) {
  if (bits == 0) return ehe::BitVec(0);
  need(bytes, "message buffer");
  return ehe::BitVec::from_bytes(std::span<const std::uint8_t>(bytes, (bits + 7) / 8), bits);
}

void pack_into(const ehe::BitVec& b, uint8_t* out, size_t cap) {
  const auto bytes = b.to_bytes();
  ehe::require(cap >= bytes.size(), ehe::ErrorCode::kParameter,
               "output buffer needs " + std::to_string(bytes.size()) + " bytes");
  std::copy(bytes.begin(), bytes.end(), out);
}

template <class T>
void save(const T& v, const char* path) {
  need(path, "path");
  ehe::write_file(path, ehe::serialize(v));
}

}  // namespace

extern "C" {

const char* ehe_last_error(void) { return g_error.c_str(); }
const char* ehe_version(void) { return "ehe 1.0 (format 1, rng v1)"; }

void ehe_keygen_params_init(ehe_keygen_params* p, uint32_t k, uint32_t w, uint64_t seed, int insecure) {
  if (!p) return;
  std::memset(p, 0, sizeof *p);
  p->k = k;
  p->w = w;
  p->seed = seed;
  p->insecure = insecure;
  p->jobs = 1;
}

ehe_status ehe_keygen(const ehe_keygen_params* p, ehe_public_key** pk, ehe_private_key** sk) {
  return guard([&] {
    need(p, "params");
    need(pk, "public key output");
    need(sk, "private key output");
    ehe::KeyParams kp = p->insecure ? ehe::KeyParams::testing(p->k, p->w, p->seed)
                                    : ehe::KeyParams::secure(p->k, p->w, p->seed);
    kp.insecure = p->insecure != 0;
    if (p->nvars) kp.nvars = p->nvars;
    if (p->d_lo) kp.d_lo = p->d_lo;
    if (p->d_hi) kp.d_hi = p->d_hi;
    if (p->blocks || p->block_size) {
      const std::size_t count = p->blocks ? p->blocks : kp.block_sizes.size();
      const std::size_t size = p->block_size ? p->block_size : (kp.block_sizes.empty() ? 3 : kp.block_sizes[0]);
      kp.block_sizes.assign(count, size);
    }
    if (p->filler_gates) kp.filler_gates = p->filler_gates;
    kp.monomial_budget = p->monomial_budget;
    kp.jobs = p->jobs;
    auto pair = ehe::generate_keypair(kp);
    *pk = new ehe_public_key{std::move(pair.pub)};
    *sk = new ehe_private_key{std::move(pair.priv)};
  });
}

ehe_status ehe_public_key_info(const ehe_public_key* pk, ehe_key_info* info) {
  return guard([&] {
    need(pk, "public key");
    need(info, "info");
    *info = {};
    info->k = static_cast<uint32_t>(pk->v.k);
    info->w = static_cast<uint32_t>(pk->v.w);
    info->nvars = static_cast<uint32_t>(pk->v.nvars);
    info->degree = static_cast<uint32_t>(pk->v.degree);
    for (const auto& poly : pk->v.polys) {
      info->max_monomials = std::max<uint64_t>(info->max_monomials, poly.size());
      info->total_monomials += poly.size();
    }
  });
}

ehe_status ehe_private_key_info(const ehe_private_key* sk, ehe_key_info* info) {
  return guard([&] {
    need(sk, "private key");
    need(info, "info");
    *info = {};
    info->k = static_cast<uint32_t>(sk->v.k);
    info->w = static_cast<uint32_t>(sk->v.w);
    info->nvars = static_cast<uint32_t>(sk->v.nvars);
    info->gates = static_cast<uint32_t>(sk->v.mapping.size());
    info->blocks = static_cast<uint32_t>(sk->v.blocks.size());
  });
}

ehe_status ehe_public_key_save(const ehe_public_key* pk, const char* path) {
  return guard([&] {
    need(pk, "public key");
    save(pk->v, path);
  });
}

ehe_status ehe_public_key_load(const char* path, ehe_public_key** pk) {
  return guard([&] {
    need(path, "path");
    need(pk, "output");
    *pk = new ehe_public_key{ehe::deserialize_public_key(ehe::read_file(path))};
  });
}

ehe_status ehe_private_key_save(const ehe_private_key* sk, const char* path) {
  return guard([&] {
    need(sk, "private key");
    save(sk->v, path);
  });
}

ehe_status ehe_private_key_load(const char* path, ehe_private_key** sk) {
  return guard([&] {
    need(path, "path");
    need(sk, "output");
    *sk = new ehe_private_key{ehe::deserialize_private_key(ehe::read_file(path))};
  });
}

void ehe_public_key_free(ehe_public_key* pk) { delete pk; }
void ehe_private_key_free(ehe_private_key* sk) { delete sk; }

ehe_status ehe_private_key_blocks(const ehe_private_key* sk, uint32_t* greedy, uint32_t* exact, size_t cap,
                                  size_t* count) {
  return guard([&] {
    need(sk, "private key");
    const auto est = ehe::measure_blocks(sk->v);
    if (count) *count = est.size();
    for (std::size_t i = 0; i < est.size() && i < cap; ++i) {
      if (greedy) greedy[i] = static_cast<uint32_t>(est[i].greedy);
      if (exact) exact[i] = static_cast<uint32_t>(est[i].exact);
    }
  });
}

ehe_status ehe_encrypt(const ehe_public_key* pk, const uint8_t* msg, uint64_t bits, ehe_padding padding,
                       uint64_t seed, uint32_t jobs, ehe_ciphertext** ct) {
  return guard([&] {
    need(pk, "public key");
    need(ct, "output");
    ehe::require(padding == EHE_PAD_ZEROS || padding == EHE_PAD_RANDOM, ehe::ErrorCode::kParameter,
                 "unknown padding mode");
    const auto mode = padding == EHE_PAD_RANDOM ? ehe::Padding::kRandom : ehe::Padding::kZeros;
    *ct = new ehe_ciphertext{ehe::encrypt_message(pk->v, unpack(msg, bits), mode, seed, jobs)};
  });
}

ehe_status ehe_decrypt(const ehe_private_key* sk, const ehe_ciphertext* ct, uint8_t* out, size_t cap,
                       uint64_t* bits) {
  return guard([&] {
    need(sk, "private key");
    need(ct, "ciphertext");
    if (bits) *bits = ct->v.message_bits;
    if (!out) return;
    pack_into(ehe::decrypt_message(sk->v, ct->v), out, cap);
  });
}

ehe_status ehe_ciphertext_info_get(const ehe_ciphertext* ct, ehe_ciphertext_info* info) {
  return guard([&] {
    need(ct, "ciphertext");
    need(info, "info");
    info->k = static_cast<uint32_t>(ct->v.k);
    info->w = static_cast<uint32_t>(ct->v.w);
    info->message_bits = ct->v.message_bits;
    info->blocks = ct->v.blocks.size();
  });
}

ehe_status ehe_ciphertext_block(const ehe_ciphertext* ct, uint64_t block, uint8_t* out, size_t cap) {
  return guard([&] {
    need(ct, "ciphertext");
    need(out, "output");
    ehe::require(block < ct->v.blocks.size(), ehe::ErrorCode::kParameter, "block index out of range");
    pack_into(ct->v.blocks[block], out, cap);
  });
}

ehe_status ehe_ciphertext_save(const ehe_ciphertext* ct, const char* path) {
  return guard([&] {
    need(ct, "ciphertext");
    save(ct->v, path);
  });
}

ehe_status ehe_ciphertext_load(const char* path, ehe_ciphertext** ct) {
  return guard([&] {
    need(path, "path");
    need(ct, "output");
    *ct = new ehe_ciphertext{ehe::deserialize_ciphertext(ehe::read_file(path))};
  });
}

void ehe_ciphertext_free(ehe_ciphertext* ct) { delete ct; }

ehe_status ehe_circuit_build(const char* fn, uint32_t bits, uint32_t exponent, ehe_circuit** c) {
  return guard([&] {
    need(fn, "function name");
    need(c, "output");
    const ehe::FunctionSpec spec{ehe::parse_function(fn), bits, exponent ? exponent : 3u};
    *c = new ehe_circuit{ehe::build_function_circuit(spec)};
  });
}

ehe_status ehe_circuit_info(const ehe_circuit* c, uint32_t* width, uint64_t* gates) {
  return guard([&] {
    need(c, "circuit");
    if (width) *width = static_cast<uint32_t>(c->v.width);
    if (gates) *gates = c->v.size();
  });
}

ehe_status ehe_circuit_verify(const ehe_circuit* c, const char* fn, uint32_t bits, uint32_t exponent,
                              uint64_t samples, uint64_t seed, uint64_t* checked, uint64_t* failures) {
  return guard([&] {
    need(c, "circuit");
    need(fn, "function name");
    const ehe::FunctionSpec spec{ehe::parse_function(fn), bits, exponent ? exponent : 3u};
    const auto rep = ehe::verify_circuit(c->v, spec, samples, seed);
    if (checked) *checked = rep.checked;
    if (failures) *failures = rep.failures;
    if (!rep.mismatches.empty()) g_error = rep.mismatches.front();
  });
}

ehe_status ehe_circuit_save(const ehe_circuit* c, const char* path) {
  return guard([&] {
    need(c, "circuit");
    save(c->v, path);
  });
}

ehe_status ehe_circuit_load(const char* path, ehe_circuit** c) {
  return guard([&] {
    need(path, "path");
    need(c, "output");
    *c = new ehe_circuit{ehe::deserialize_circuit(ehe::read_file(path))};
  });
}

void ehe_circuit_free(ehe_circuit* c) { delete c; }

uint32_t ehe_shell_width(uint32_t bits, uint32_t exponent) {
  uint32_t w = 0;
  guard([&] { w = static_cast<uint32_t>(ehe::shell_width(bits, exponent ? exponent : 3u)); });
  return w;
}

void ehe_cv_params_init(ehe_cv_params* p) {
  if (!p) return;
  std::memset(p, 0, sizeof *p);
  p->fn = "add";
  p->bits = 8;
  p->exponent = 3;
  p->variant = EHE_CV_TWO_KEY;
  p->blind = 1;
  p->jobs = 1;
}

ehe_status ehe_cv_keygen(const ehe_private_key* message_key, const ehe_cv_params* p, ehe_program** program,
                         ehe_cv_key** key, ehe_cv_stats* stats) {
  return guard([&] {
    need(message_key, "message key");
    need(p, "params");
    need(p->fn, "function name");
    need(program, "program output");
    need(key, "key output");
    ehe::CvParams cp;
    cp.function = {ehe::parse_function(p->fn), p->bits, p->exponent ? p->exponent : 3u};
    cp.n = p->n;
    cp.sections = p->sections;
    ehe::require(p->variant == EHE_CV_TWO_KEY || p->variant == EHE_CV_SAME_KEY, ehe::ErrorCode::kParameter,
                 "unknown variant");
    cp.variant = p->variant == EHE_CV_SAME_KEY ? ehe::CvVariant::kSameKey : ehe::CvVariant::kTwoKey;
    cp.seed = p->seed;
    cp.blind = p->blind != 0;
    cp.r_cv_gates = p->r_cv_gates;
    cp.boundary_gates = p->boundary_gates;
    cp.monomial_budget = p->monomial_budget;
    cp.jobs = p->jobs;
    auto bundle = ehe::cv_keygen(message_key->v, cp);
    if (stats) {
      *stats = {};
      for (const auto& s : bundle.stats) {
        stats->total_work += s.work;
        stats->max_monomials = std::max<uint64_t>(stats->max_monomials, s.max_monomials);
      }
      stats->action_gates = bundle.action.size();
      stats->sections = static_cast<uint32_t>(bundle.program.sections.size());
    }
    auto* k = new ehe_cv_key{std::move(bundle.key), {}};
    for (const auto& r : ehe::function_layout(k->v.function).outputs) k->names.push_back(r.name);
    *program = new ehe_program{std::move(bundle.program)};
    *key = k;
  });
}

ehe_status ehe_cv_eval(const ehe_program* program, const ehe_ciphertext* ct, uint32_t jobs, ehe_ciphertext** result) {
  return guard([&] {
    need(program, "program");
    need(ct, "ciphertext");
    need(result, "output");
    ehe::require(ct->v.blocks.size() == 1, ehe::ErrorCode::kDimension,
                 "evaluation takes a single-block ciphertext, found " + std::to_string(ct->v.blocks.size()));
    ehe::require(ct->v.k == program->v.k && ct->v.w == program->v.w, ehe::ErrorCode::kDimension,
                 "ciphertext (k=" + std::to_string(ct->v.k) + ", w=" + std::to_string(ct->v.w) +
                     ") does not match the program (k=" + std::to_string(program->v.k) +
                     ", w=" + std::to_string(program->v.w) + ")");
    ehe::CiphertextStream r;
    r.k = r.w = program->v.n;
    r.message_bits = program->v.n;
    r.blocks.push_back(ehe::evaluate_program(program->v, ct->v.blocks[0], jobs));
    *result = new ehe_ciphertext{std::move(r)};
  });
}

ehe_status ehe_cv_decrypt(const ehe_cv_key* key, const ehe_ciphertext* result, uint64_t* values, size_t cap,
                          size_t* count) {
  return guard([&] {
    need(key, "key");
    need(result, "result");
    ehe::require(result->v.blocks.size() == 1 && result->v.w == key->v.n, ehe::ErrorCode::kDimension,
                 "result does not match the key's width n = " + std::to_string(key->v.n));
    const auto bits = ehe::decrypt_result(key->v, result->v.blocks[0]);
    const auto regs = ehe::unpack_result(key->v.function, bits);
    if (count) *count = regs.size();
    for (std::size_t i = 0; i < regs.size() && i < cap; ++i) {
      need(values, "values");
      values[i] = regs[i];
    }
  });
}

const char* ehe_cv_key_output_name(const ehe_cv_key* key, size_t index) {
  if (!key || index >= key->names.size()) return nullptr;
  return key->names[index].c_str();
}

ehe_status ehe_cv_pack_operands(uint32_t k, uint32_t bits, uint64_t a, uint64_t b, uint8_t* out, size_t cap) {
  return guard([&] {
    need(out, "output");
    const ehe::FunctionSpec spec{ehe::FunctionKind::kAdd, bits, 3};
    const std::uint64_t top = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    ehe::require(a <= top && b <= top, ehe::ErrorCode::kParameter,
                 "operands must fit in " + std::to_string(bits) + " bits");
    pack_into(ehe::pack_operands(spec, k, a, b), out, cap);
  });
}

ehe_status ehe_program_info_get(const ehe_program* p, ehe_program_info* info) {
  return guard([&] {
    need(p, "program");
    need(info, "info");
    *info = {};
    info->k = static_cast<uint32_t>(p->v.k);
    info->w = static_cast<uint32_t>(p->v.w);
    info->n = static_cast<uint32_t>(p->v.n);
    info->sections = static_cast<uint32_t>(p->v.sections.size());
    for (const auto& s : p->v.sections) {
      for (const auto& poly : s) info->max_monomials = std::max<uint64_t>(info->max_monomials, poly.size());
    }
    info->blindness_class = p->v.blindness_class.c_str();
  });
}

ehe_status ehe_program_save(const ehe_program* p, const char* path) {
  return guard([&] {
    need(p, "program");
    save(p->v, path);
  });
}

ehe_status ehe_program_load(const char* path, ehe_program** p) {
  return guard([&] {
    need(path, "path");
    need(p, "output");
    *p = new ehe_program{ehe::deserialize_program(ehe::read_file(path))};
  });
}

void ehe_program_free(ehe_program* p) { delete p; }

ehe_status ehe_cv_key_save(const ehe_cv_key* key, const char* path) {
  return guard([&] {
    need(key, "key");
    save(key->v, path);
  });
}

ehe_status ehe_cv_key_load(const char* path, ehe_cv_key** key) {
  return guard([&] {
    need(path, "path");
    need(key, "output");
    auto* k = new ehe_cv_key{ehe::deserialize_cv_key(ehe::read_file(path)), {}};
    try {
      for (const auto& r : ehe::function_layout(k->v.function).outputs) k->names.push_back(r.name);
    } catch (...) {
      delete k;
      throw;
    }
    *key = k;
  });
}

void ehe_cv_key_free(ehe_cv_key* key) { delete key; }

ehe_status ehe_security_report(uint32_t k, uint32_t w, uint32_t d, uint32_t D, double chi, const uint32_t* blocks,
                               size_t nblocks, char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    std::vector<std::size_t> h;
    if (nblocks) need(blocks, "blocks");
    for (std::size_t i = 0; i < nblocks; ++i) h.push_back(blocks[i]);
    const std::string text = ehe::format_report(ehe::security_report(k, w, d, D, chi, h));
    if (needed) *needed = text.size() + 1;
    if (buf && cap) {
      const std::size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

}  // extern "C"
