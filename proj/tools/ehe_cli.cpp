#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehe/ehe.h"

namespace {

class CliError : public std::runtime_error {
 public:
  CliError(int status, const std::string& msg) : std::runtime_error(msg), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

void check(ehe_status s) {
  if (s != EHE_OK) throw CliError(s, ehe_last_error());
}

[[noreturn]] void usage(const std::string& msg) { throw CliError(EHE_ERR_USAGE, msg); }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using PublicKey = std::unique_ptr<ehe_public_key, Deleter<ehe_public_key, ehe_public_key_free>>;
using PrivateKey = std::unique_ptr<ehe_private_key, Deleter<ehe_private_key, ehe_private_key_free>>;
using Ciphertext = std::unique_ptr<ehe_ciphertext, Deleter<ehe_ciphertext, ehe_ciphertext_free>>;
using Circuit = std::unique_ptr<ehe_circuit, Deleter<ehe_circuit, ehe_circuit_free>>;
using Program = std::unique_ptr<ehe_program, Deleter<ehe_program, ehe_program_free>>;
using CvKey = std::unique_ptr<ehe_cv_key, Deleter<ehe_cv_key, ehe_cv_key_free>>;

struct Preset {
  std::uint32_t k = 0;
  std::uint32_t w = 0;
  std::uint32_t n = 0;
};

std::vector<std::uint64_t> parse_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) usage("empty entry in " + what + " '" + text + "'");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item[0] == '-') usage("invalid number '" + item + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) usage("empty " + what);
  return out;
}

Preset parse_preset(std::string text) {
  const auto b = text.find_first_not_of(" \t");
  const auto e = text.find_last_not_of(" \t");
  if (b == std::string::npos) usage("empty preset");
  text = text.substr(b, e - b + 1);
  if (text.front() == '(' && text.back() == ')') text = text.substr(1, text.size() - 2);
  const auto v = parse_list(text, "preset");
  if (v.size() < 2 || v.size() > 3) usage("preset must be (k,w) or (k,w,n), got '" + text + "'");
  for (auto x : v) {
    if (x == 0 || x > UINT32_MAX) usage("preset entries must be positive 32-bit values");
  }
  Preset p;
  p.k = static_cast<std::uint32_t>(v[0]);
  p.w = static_cast<std::uint32_t>(v[1]);
  if (v.size() == 3) p.n = static_cast<std::uint32_t>(v[2]);
  return p;
}

std::uint64_t parse_seed(const std::string& text) {
  if (text == "os") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  return parse_list(text, "seed").at(0);
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) usage("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) usage("write failed for '" + path + "'");
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (auto b : bytes) {
    s += digits[b >> 4];
    s += digits[b & 15];
  }
  return s;
}

std::vector<std::uint8_t> from_hex(const std::string& hex) {
  if (hex.size() % 2) usage("hex message needs an even number of digits");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const std::string pair = hex.substr(i, 2);
    std::size_t used = 0;
    unsigned v = 0;
    try {
      v = static_cast<unsigned>(std::stoul(pair, &used, 16));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != 2) usage("invalid hex digits '" + pair + "'");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

PublicKey load_public(const std::string& path) {
  ehe_public_key* p = nullptr;
  check(ehe_public_key_load(path.c_str(), &p));
  return PublicKey(p);
}

PrivateKey load_private(const std::string& path) {
  ehe_private_key* p = nullptr;
  check(ehe_private_key_load(path.c_str(), &p));
  return PrivateKey(p);
}

Ciphertext load_ciphertext(const std::string& path) {
  ehe_ciphertext* p = nullptr;
  check(ehe_ciphertext_load(path.c_str(), &p));
  return Ciphertext(p);
}

ehe_cv_variant parse_variant(const std::string& v) {
  if (v == "two-key") return EHE_CV_TWO_KEY;
  if (v == "same-key") return EHE_CV_SAME_KEY;
  usage("variant must be two-key or same-key, got '" + v + "'");
}

ehe_padding parse_padding(const std::string& v) {
  if (v == "zeros") return EHE_PAD_ZEROS;
  if (v == "random") return EHE_PAD_RANDOM;
  usage("padding must be zeros or random, got '" + v + "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

struct KeygenArgs {
  std::string preset;
  std::uint32_t k = 0;
  std::uint32_t w = 0;
  std::uint32_t nvars = 0;
  std::uint32_t d_lo = 0;
  std::uint32_t d_hi = 0;
  std::uint32_t blocks = 0;
  std::uint32_t block_size = 0;
  std::uint32_t filler = 0;
  std::uint64_t budget = 0;
  std::string seed;
  bool insecure = false;
  std::uint32_t jobs = 1;
  std::string out = "key";
  std::string pub;
  std::string priv;
};

ehe_keygen_params keygen_params(const KeygenArgs& a) {
  std::uint32_t k = a.k;
  std::uint32_t w = a.w;
  if (!a.preset.empty()) {
    const Preset p = parse_preset(a.preset);
    if ((k && k != p.k) || (w && w != p.w)) usage("--k/--w disagree with --preset");
    k = p.k;
    w = p.w;
  }
  if (!k || !w) usage("keygen needs --preset or both --k and --w");
  if (a.seed.empty()) usage("keygen needs --seed (an integer, or 'os' for system entropy)");
  ehe_keygen_params p;
  ehe_keygen_params_init(&p, k, w, parse_seed(a.seed), a.insecure ? 1 : 0);
  p.nvars = a.nvars;
  p.d_lo = a.d_lo;
  p.d_hi = a.d_hi;
  p.blocks = a.blocks;
  p.block_size = a.block_size;
  p.filler_gates = a.filler;
  p.monomial_budget = a.budget;
  p.jobs = a.jobs;
  return p;
}

void print_public_info(const ehe_public_key* pk) {
  ehe_key_info info;
  check(ehe_public_key_info(pk, &info));
  std::cout << "k=" << info.k << "\nw=" << info.w << "\nnvars=" << info.nvars << "\ndegree=" << info.degree
            << "\nmax_monomials=" << info.max_monomials << "\ntotal_monomials=" << info.total_monomials << "\n";
}

int run_keygen(const KeygenArgs& a) {
  const ehe_keygen_params p = keygen_params(a);
  ehe_public_key* pk_raw = nullptr;
  ehe_private_key* sk_raw = nullptr;
  const auto t0 = std::chrono::steady_clock::now();
  check(ehe_keygen(&p, &pk_raw, &sk_raw));
  const double elapsed = seconds_since(t0);
  PublicKey pk(pk_raw);
  PrivateKey sk(sk_raw);
  const std::string pub = a.pub.empty() ? a.out + ".pub" : a.pub;
  const std::string priv = a.priv.empty() ? a.out + ".priv" : a.priv;
  check(ehe_public_key_save(pk.get(), pub.c_str()));
  check(ehe_private_key_save(sk.get(), priv.c_str()));
  print_public_info(pk.get());
  ehe_key_info sinfo;
  check(ehe_private_key_info(sk.get(), &sinfo));
  std::cout << "seed=" << p.seed << "\ngates=" << sinfo.gates << "\nblocks=" << sinfo.blocks << "\npublic_key=" << pub
            << "\nprivate_key=" << priv << "\nwall_seconds=" << elapsed << "\n";
  return 0;
}

struct EncryptArgs {
  std::string pub;
  std::string in;
  std::string text;
  std::string hex;
  std::string ints;
  std::uint32_t width = 0;
  std::string padding = "zeros";
  std::string seed;
  std::uint32_t jobs = 1;
  std::string out;
};

int run_encrypt(const EncryptArgs& a) {
  const int sources = !a.in.empty() + !a.text.empty() + !a.hex.empty() + !a.ints.empty();
  if (sources != 1) usage("encrypt needs exactly one of --in, --text, --hex, --ints");
  const ehe_padding padding = parse_padding(a.padding);
  if (padding == EHE_PAD_RANDOM && a.seed.empty()) usage("random padding needs --seed (an integer or 'os')");
  const std::uint64_t seed = a.seed.empty() ? 0 : parse_seed(a.seed);
  PublicKey pk = load_public(a.pub);
  std::vector<std::uint8_t> msg;
  std::uint64_t bits = 0;
  if (!a.ints.empty()) {
    if (!a.width) usage("--ints needs --width (operand bits)");
    if (padding != EHE_PAD_ZEROS) {
      throw CliError(EHE_ERR_CONTRACT, "operands for cryptovaluation must be encrypted with zero padding");
    }
    const auto v = parse_list(a.ints, "--ints");
    if (v.size() != 2) usage("--ints takes two operands a,b");
    ehe_key_info info;
    check(ehe_public_key_info(pk.get(), &info));
    msg.assign((info.k + 7) / 8, 0);
    check(ehe_cv_pack_operands(info.k, a.width, v[0], v[1], msg.data(), msg.size()));
    bits = info.k;
  } else {
    if (!a.in.empty()) msg = read_bytes(a.in);
    if (!a.text.empty()) msg.assign(a.text.begin(), a.text.end());
    if (!a.hex.empty()) msg = from_hex(a.hex);
    bits = 8 * static_cast<std::uint64_t>(msg.size());
  }
  ehe_ciphertext* ct_raw = nullptr;
  check(ehe_encrypt(pk.get(), msg.data(), bits, padding, seed, a.jobs, &ct_raw));
  Ciphertext ct(ct_raw);
  check(ehe_ciphertext_save(ct.get(), a.out.c_str()));
  ehe_ciphertext_info info;
  check(ehe_ciphertext_info_get(ct.get(), &info));
  std::cout << "message_bits=" << info.message_bits << "\nblocks=" << info.blocks << "\nciphertext=" << a.out << "\n";
  return 0;
}

struct DecryptArgs {
  std::string priv;
  std::string in;
  std::string out;
};

int run_decrypt(const DecryptArgs& a) {
  PrivateKey sk = load_private(a.priv);
  Ciphertext ct = load_ciphertext(a.in);
  std::uint64_t bits = 0;
  check(ehe_decrypt(sk.get(), ct.get(), nullptr, 0, &bits));
  std::vector<std::uint8_t> msg((bits + 7) / 8);
  check(ehe_decrypt(sk.get(), ct.get(), msg.data(), msg.size(), &bits));
  std::cout << "message_bits=" << bits << "\n";
  if (!a.out.empty()) {
    write_bytes(a.out, msg);
    std::cout << "plaintext=" << a.out << "\n";
  } else {
    std::cout << "hex=" << to_hex(msg) << "\n";
  }
  return 0;
}

struct CircuitArgs {
  std::string fn;
  std::uint32_t width = 0;
  std::uint32_t exponent = 3;
  std::string out;
  bool verify = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
};

int run_circuit_build(const CircuitArgs& a) {
  ehe_circuit* raw = nullptr;
  check(ehe_circuit_build(a.fn.c_str(), a.width, a.exponent, &raw));
  Circuit c(raw);
  std::uint32_t width = 0;
  std::uint64_t gates = 0;
  check(ehe_circuit_info(c.get(), &width, &gates));
  std::cout << "fn=" << a.fn << "\nbits=" << a.width << "\nwidth=" << width << "\ngates=" << gates << "\n";
  if (a.verify) {
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    check(ehe_circuit_verify(c.get(), a.fn.c_str(), a.width, a.exponent, a.samples, a.seed, &checked, &failures));
    std::cout << "verified=" << checked << "\nfailures=" << failures << "\n";
    if (failures) throw CliError(EHE_ERR_CONTRACT, std::string("circuit verification failed: ") + ehe_last_error());
  }
  if (!a.out.empty()) {
    check(ehe_circuit_save(c.get(), a.out.c_str()));
    std::cout << "circuit=" << a.out << "\n";
  }
  return 0;
}

struct CvKeygenArgs {
  std::string priv;
  std::string preset;
  std::string fn = "add";
  std::uint32_t width = 8;
  std::uint32_t exponent = 3;
  std::uint32_t n = 0;
  std::uint32_t sections = 0;
  std::string variant = "two-key";
  std::string seed;
  bool no_blind = false;
  std::uint32_t r_cv_gates = 0;
  std::uint32_t boundary_gates = 0;
  std::uint64_t budget = 0;
  std::uint32_t jobs = 1;
  std::string program = "program.ehe";
  std::string key = "cv.priv";
};

int run_cv_keygen(const CvKeygenArgs& a) {
  if (a.seed.empty()) usage("cv keygen needs --seed (an integer, or 'os' for system entropy)");
  std::uint32_t n = a.n;
  if (!a.preset.empty()) {
    const Preset p = parse_preset(a.preset);
    if (!p.n) usage("cv keygen presets are triples (k,w,n)");
    if (n && n != p.n) usage("--n disagrees with --preset");
    n = p.n;
  }
  if (!n) usage("cv keygen needs --n or a (k,w,n) preset");
  PrivateKey sk = load_private(a.priv);
  ehe_cv_params p;
  ehe_cv_params_init(&p);
  p.fn = a.fn.c_str();
  p.bits = a.width;
  p.exponent = a.exponent;
  p.n = n;
  p.sections = a.sections;
  p.variant = parse_variant(a.variant);
  p.seed = parse_seed(a.seed);
  p.blind = a.no_blind ? 0 : 1;
  p.r_cv_gates = a.r_cv_gates;
  p.boundary_gates = a.boundary_gates;
  p.monomial_budget = a.budget;
  p.jobs = a.jobs;
  ehe_program* prog_raw = nullptr;
  ehe_cv_key* key_raw = nullptr;
  ehe_cv_stats stats;
  const auto t0 = std::chrono::steady_clock::now();
  check(ehe_cv_keygen(sk.get(), &p, &prog_raw, &key_raw, &stats));
  const double elapsed = seconds_since(t0);
  Program prog(prog_raw);
  CvKey key(key_raw);
  check(ehe_program_save(prog.get(), a.program.c_str()));
  check(ehe_cv_key_save(key.get(), a.key.c_str()));
  ehe_program_info info;
  check(ehe_program_info_get(prog.get(), &info));
  std::cout << "k=" << info.k << "\nw=" << info.w << "\nn=" << info.n << "\nsections=" << info.sections
            << "\naction_gates=" << stats.action_gates << "\nmax_monomials=" << stats.max_monomials
            << "\ntotal_work=" << stats.total_work << "\nblindness_class=" << info.blindness_class
            << "\nseed=" << p.seed << "\nprogram=" << a.program << "\ncv_key=" << a.key << "\nwall_seconds=" << elapsed
            << "\n";
  return 0;
}

struct CvEvalArgs {
  std::string program;
  std::string in;
  std::string out;
  std::uint32_t jobs = 1;
};

int run_cv_eval(const CvEvalArgs& a) {
  ehe_program* raw = nullptr;
  check(ehe_program_load(a.program.c_str(), &raw));
  Program prog(raw);
  Ciphertext ct = load_ciphertext(a.in);
  ehe_ciphertext* res_raw = nullptr;
  check(ehe_cv_eval(prog.get(), ct.get(), a.jobs, &res_raw));
  Ciphertext res(res_raw);
  check(ehe_ciphertext_save(res.get(), a.out.c_str()));
  ehe_ciphertext_info info;
  check(ehe_ciphertext_info_get(res.get(), &info));
  std::cout << "n=" << info.w << "\nresult=" << a.out << "\n";
  return 0;
}

struct CvDecryptArgs {
  std::string key;
  std::string in;
};

int run_cv_decrypt(const CvDecryptArgs& a) {
  ehe_cv_key* raw = nullptr;
  check(ehe_cv_key_load(a.key.c_str(), &raw));
  CvKey key(raw);
  Ciphertext res = load_ciphertext(a.in);
  std::size_t count = 0;
  check(ehe_cv_decrypt(key.get(), res.get(), nullptr, 0, &count));
  std::vector<std::uint64_t> values(count);
  check(ehe_cv_decrypt(key.get(), res.get(), values.data(), values.size(), &count));
  for (std::size_t i = 0; i < count; ++i) std::cout << ehe_cv_key_output_name(key.get(), i) << "=" << values[i] << "\n";
  return 0;
}

struct SecurityArgs {
  std::string params;
  double chi = 2.5;
  std::string blocks;
  std::string key;
};

int run_security(const SecurityArgs& a) {
  const auto v = parse_list(a.params, "--params");
  if (v.size() < 3 || v.size() > 4) usage("--params takes k,w,d or k,w,d,D");
  std::vector<std::uint32_t> h;
  std::string source = "none";
  if (!a.blocks.empty() && !a.key.empty()) usage("give --blocks or --key, not both");
  if (!a.blocks.empty()) {
    for (auto x : parse_list(a.blocks, "--blocks")) h.push_back(static_cast<std::uint32_t>(x));
    source = "given";
  }
  if (!a.key.empty()) {
    PrivateKey sk = load_private(a.key);
    std::size_t count = 0;
    check(ehe_private_key_blocks(sk.get(), nullptr, nullptr, 0, &count));
    std::vector<std::uint32_t> greedy(count);
    std::vector<std::uint32_t> exact(count);
    check(ehe_private_key_blocks(sk.get(), greedy.data(), exact.data(), count, &count));
    for (std::size_t i = 0; i < count; ++i) h.push_back(exact[i] ? exact[i] : greedy[i]);
    source = "measured";
  }
  const auto d = static_cast<std::uint32_t>(v[2]);
  const auto D = v.size() == 4 ? static_cast<std::uint32_t>(v[3]) : 0u;
  std::size_t needed = 0;
  check(ehe_security_report(static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1]), d, D, a.chi, h.data(),
                            h.size(), nullptr, 0, &needed));
  std::string text(needed, '\0');
  check(ehe_security_report(static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1]), d, D, a.chi, h.data(),
                            h.size(), text.data(), text.size(), &needed));
  text.resize(needed ? needed - 1 : 0);
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  std::cout << "# security estimate for k=" << kv["k"] << ", w=" << kv["w"] << ", d=" << kv["d"] << ", D=" << kv["D"]
            << ", chi=" << kv["chi"] << "\n"
            << "#   XL attack cost        2^" << kv["log2_xl"] << " (" << kv["band_xl"] << ")\n"
            << "#   XL subexponential     2^" << kv["log2_xl_quadratic_subexp"] << "\n"
            << "#   circuit recovery      2^" << kv["log2_icrp"] << " (" << kv["band_icrp"] << ")\n"
            << "#   decomposition         2^" << kv["log2_denc"] << " (" << kv["band_denc"] << ")\n"
            << "#   Grover search         2^" << kv["log2_grover"] << "\n"
            << "#   criterion             " << (kv["criterion_ok"] == "true" ? "satisfied" : "not satisfied") << "\n"
            << "block_source=" << source << "\n"
            << text;
  return 0;
}

struct BenchArgs {
  std::string preset;
  std::string fn = "add";
  std::uint32_t width = 8;
  std::uint32_t exponent = 3;
  std::uint32_t sections = 0;
  std::string variant = "two-key";
  std::string workers = "1";
  std::string seed = "1";
  bool insecure = false;
  std::uint64_t budget = 0;
  std::uint32_t samples = 1;
};

struct BenchRow {
  std::string operation;
  std::uint32_t k;
  std::uint32_t w;
  std::uint32_t n;
  std::uint32_t sections;
  std::string fn;
  std::uint64_t workers;
  double wall;
  std::uint64_t max_monomials;
  std::optional<std::uint64_t> total_work;
};

void print_row(const BenchRow& r) {
  std::cout << r.operation << "," << r.k << "," << r.w << "," << r.n << "," << r.sections << "," << r.fn << ","
            << r.workers << "," << r.wall << "," << r.max_monomials << ","
            << (r.total_work ? std::to_string(*r.total_work) : std::string()) << "\n";
  std::cout.flush();
}

int run_bench(const BenchArgs& a) {
  if (a.preset.empty()) usage("bench needs --preset (k,w) or (k,w,n)");
  const Preset preset = parse_preset(a.preset);
  const std::uint64_t seed = parse_seed(a.seed);
  const auto workers = parse_list(a.workers, "--workers");
  std::cout << "operation,k,w,n,sections,fn,workers,wall_seconds,max_monomials,total_work\n";
  for (const std::uint64_t j : workers) {
    const auto jobs = static_cast<std::uint32_t>(j);
    ehe_keygen_params kp;
    ehe_keygen_params_init(&kp, preset.k, preset.w, seed, a.insecure ? 1 : 0);
    kp.jobs = jobs;
    ehe_public_key* pk_raw = nullptr;
    ehe_private_key* sk_raw = nullptr;
    auto t0 = std::chrono::steady_clock::now();
    check(ehe_keygen(&kp, &pk_raw, &sk_raw));
    const double t_kg = seconds_since(t0);
    PublicKey pk(pk_raw);
    PrivateKey sk(sk_raw);
    ehe_key_info info;
    check(ehe_public_key_info(pk.get(), &info));
    print_row({"keygen", preset.k, preset.w, 0, 0, "", j, t_kg, info.max_monomials, std::nullopt});

    std::vector<std::uint8_t> msg((preset.k + 7) / 8);
    std::mt19937_64 gen(seed);
    for (auto& b : msg) b = static_cast<std::uint8_t>(gen());
    if (preset.k % 8) msg.back() &= static_cast<std::uint8_t>((1u << (preset.k % 8)) - 1);
    double t_en = 0;
    double t_de = 0;
    for (std::uint32_t s = 0; s < a.samples; ++s) {
      ehe_ciphertext* ct_raw = nullptr;
      t0 = std::chrono::steady_clock::now();
      check(ehe_encrypt(pk.get(), msg.data(), preset.k, EHE_PAD_ZEROS, seed, jobs, &ct_raw));
      t_en += seconds_since(t0);
      Ciphertext ct(ct_raw);
      std::vector<std::uint8_t> back(msg.size());
      std::uint64_t bits = 0;
      t0 = std::chrono::steady_clock::now();
      check(ehe_decrypt(sk.get(), ct.get(), back.data(), back.size(), &bits));
      t_de += seconds_since(t0);
      if (back != msg) throw CliError(EHE_ERR_CONTRACT, "bench roundtrip mismatch");
    }
    print_row({"encrypt", preset.k, preset.w, 0, 0, "", j, t_en / a.samples, info.max_monomials, std::nullopt});
    print_row({"decrypt", preset.k, preset.w, 0, 0, "", j, t_de / a.samples, 0, std::nullopt});
    if (!preset.n) continue;

    ehe_cv_params cp;
    ehe_cv_params_init(&cp);
    cp.fn = a.fn.c_str();
    cp.bits = a.width;
    cp.exponent = a.exponent;
    cp.n = preset.n;
    cp.sections = a.sections;
    cp.variant = parse_variant(a.variant);
    cp.seed = seed;
    cp.monomial_budget = a.budget;
    cp.jobs = jobs;
    ehe_program* prog_raw = nullptr;
    ehe_cv_key* key_raw = nullptr;
    ehe_cv_stats stats;
    t0 = std::chrono::steady_clock::now();
    check(ehe_cv_keygen(sk.get(), &cp, &prog_raw, &key_raw, &stats));
    const double t_cv = seconds_since(t0);
    Program prog(prog_raw);
    CvKey key(key_raw);
    print_row({"cv_keygen", preset.k, preset.w, preset.n, stats.sections, a.fn, j, t_cv, stats.max_monomials,
               stats.total_work});

    std::vector<std::uint8_t> ops((preset.k + 7) / 8);
    const std::uint64_t top = a.width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << a.width) - 1;
    check(ehe_cv_pack_operands(preset.k, a.width, gen() & top, gen() & top, ops.data(), ops.size()));
    ehe_ciphertext* ct_raw = nullptr;
    check(ehe_encrypt(pk.get(), ops.data(), preset.k, EHE_PAD_ZEROS, seed, jobs, &ct_raw));
    Ciphertext ct(ct_raw);
    ehe_ciphertext* res_raw = nullptr;
    t0 = std::chrono::steady_clock::now();
    check(ehe_cv_eval(prog.get(), ct.get(), jobs, &res_raw));
    const double t_ev = seconds_since(t0);
    Ciphertext res(res_raw);
    print_row({"cv_eval", preset.k, preset.w, preset.n, stats.sections, a.fn, j, t_ev, stats.max_monomials,
               std::nullopt});
    std::vector<std::uint64_t> values(8);
    std::size_t count = 0;
    t0 = std::chrono::steady_clock::now();
    check(ehe_cv_decrypt(key.get(), res.get(), values.data(), values.size(), &count));
    const double t_dd = seconds_since(t0);
    print_row({"cv_decrypt", preset.k, preset.w, preset.n, stats.sections, a.fn, j, t_dd, 0, std::nullopt});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact homomorphic encryption toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ehe_version()));
  std::function<int()> action;

  KeygenArgs kg;
  auto* keygen = app.add_subcommand("keygen", "Generate an IME key pair");
  keygen->add_option("--preset", kg.preset, "Parameter pair such as \"(128,160)\"");
  keygen->add_option("--k", kg.k, "Plaintext bits");
  keygen->add_option("--w", kg.w, "Ciphertext bits");
  keygen->add_option("--nvars", kg.nvars, "Public polynomial variables (k or w, default w)");
  keygen->add_option("--d-lo", kg.d_lo, "Lower bound on the public degree");
  keygen->add_option("--d-hi", kg.d_hi, "Upper bound on the public degree");
  keygen->add_option("--blocks", kg.blocks, "Number of noncommuting blocks");
  keygen->add_option("--block-size", kg.block_size, "Gates per noncommuting block");
  keygen->add_option("--filler", kg.filler, "Random filler gates");
  keygen->add_option("--budget", kg.budget, "Monomial budget per polynomial (default 4 v^2)");
  keygen->add_option("--seed", kg.seed, "Integer seed, or 'os'");
  keygen->add_flag("--insecure-params", kg.insecure, "Allow small test parameters");
  keygen->add_option("--jobs", kg.jobs, "Worker threads (0: all cores)");
  keygen->add_option("--out", kg.out, "Output prefix for PREFIX.pub and PREFIX.priv");
  keygen->add_option("--pub", kg.pub, "Public key file");
  keygen->add_option("--priv", kg.priv, "Private key file");
  keygen->callback([&] { action = [&] { return run_keygen(kg); }; });

  EncryptArgs en;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a message with a public key");
  encrypt->add_option("--pub", en.pub, "Public key file")->required();
  encrypt->add_option("--in", en.in, "Message file (raw bytes)");
  encrypt->add_option("--text", en.text, "Message text");
  encrypt->add_option("--hex", en.hex, "Message as hex bytes");
  encrypt->add_option("--ints", en.ints, "Two operands a,b packed for cryptovaluation");
  encrypt->add_option("--width", en.width, "Operand bits for --ints");
  encrypt->add_option("--padding", en.padding, "zeros or random");
  encrypt->add_option("--seed", en.seed, "Seed for random padding, or 'os'");
  encrypt->add_option("--jobs", en.jobs, "Worker threads");
  encrypt->add_option("--out", en.out, "Ciphertext file")->required();
  encrypt->callback([&] { action = [&] { return run_encrypt(en); }; });

  DecryptArgs de;
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt a ciphertext with a private key");
  decrypt->add_option("--priv", de.priv, "Private key file")->required();
  decrypt->add_option("--in", de.in, "Ciphertext file")->required();
  decrypt->add_option("--out", de.out, "Plaintext file (default: print hex)");
  decrypt->callback([&] { action = [&] { return run_decrypt(de); }; });

  CircuitArgs ca;
  auto* circuit = app.add_subcommand("circuit", "Reversible arithmetic circuits");
  circuit->require_subcommand(1);
  auto* build = circuit->add_subcommand("build", "Build a function circuit");
  build->add_option("--fn", ca.fn, "add, sub, mul, div, compare, sum_of_squares, monomial_power")->required();
  build->add_option("--width", ca.width, "Operand bits L")->required();
  build->add_option("--exponent", ca.exponent, "Exponent for monomial_power");
  build->add_option("--out", ca.out, "Circuit file");
  build->add_flag("--verify", ca.verify, "Check against the integer oracle");
  build->add_option("--samples", ca.samples, "Random pairs when not exhaustive");
  build->add_option("--seed", ca.seed, "Seed for sampled verification");
  build->callback([&] { action = [&] { return run_circuit_build(ca); }; });

  auto* cv = app.add_subcommand("cv", "Cryptovaluation");
  cv->require_subcommand(1);
  CvKeygenArgs ck;
  auto* cvk = cv->add_subcommand("keygen", "Encrypt a function into a sectional program");
  cvk->add_option("--priv", ck.priv, "Message private key file")->required();
  cvk->add_option("--preset", ck.preset, "Triple such as \"(128,160,240)\"");
  cvk->add_option("--fn", ck.fn, "Function to encrypt");
  cvk->add_option("--width", ck.width, "Operand bits L");
  cvk->add_option("--exponent", ck.exponent, "Exponent for monomial_power");
  cvk->add_option("--n", ck.n, "Program width");
  cvk->add_option("--sections", ck.sections, "Number of sections e (default ceil(n/2))");
  cvk->add_option("--variant", ck.variant, "two-key or same-key");
  cvk->add_option("--seed", ck.seed, "Integer seed, or 'os'");
  cvk->add_flag("--no-blind", ck.no_blind, "Skip padding to the uniform shell");
  cvk->add_option("--r-cv-gates", ck.r_cv_gates, "Filler gates of the result key");
  cvk->add_option("--boundary-gates", ck.boundary_gates, "Gates of each section boundary key");
  cvk->add_option("--budget", ck.budget, "Monomial budget per polynomial (default 4 n^2)");
  cvk->add_option("--jobs", ck.jobs, "Worker threads");
  cvk->add_option("--program", ck.program, "Program file");
  cvk->add_option("--key", ck.key, "Result key file");
  cvk->callback([&] { action = [&] { return run_cv_keygen(ck); }; });

  CvEvalArgs ce;
  auto* cve = cv->add_subcommand("eval", "Evaluate a program on a ciphertext");
  cve->add_option("--program", ce.program, "Program file")->required();
  cve->add_option("--in", ce.in, "Ciphertext file")->required();
  cve->add_option("--out", ce.out, "Result file")->required();
  cve->add_option("--jobs", ce.jobs, "Worker threads");
  cve->callback([&] { action = [&] { return run_cv_eval(ce); }; });

  CvDecryptArgs cd;
  auto* cvd = cv->add_subcommand("decrypt", "Decrypt an evaluation result");
  cvd->add_option("--key", cd.key, "Result key file")->required();
  cvd->add_option("--in", cd.in, "Result file")->required();
  cvd->callback([&] { action = [&] { return run_cv_decrypt(cd); }; });

  SecurityArgs sa;
  auto* security = app.add_subcommand("security", "Attack complexity estimates");
  security->add_option("--params", sa.params, "k,w,d or k,w,d,D")->required();
  security->add_option("--chi", sa.chi, "Linear algebra exponent in (2,3]");
  security->add_option("--blocks", sa.blocks, "Noncommuting block sizes h1,h2,...");
  security->add_option("--key", sa.key, "Private key whose blocks are measured");
  security->callback([&] { action = [&] { return run_security(sa); }; });

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Timing harness with CSV output");
  bench->add_option("--preset", ba.preset, "(k,w) or (k,w,n)")->required();
  bench->add_option("--fn", ba.fn, "Function for the cryptovaluation rows");
  bench->add_option("--width", ba.width, "Operand bits L");
  bench->add_option("--exponent", ba.exponent, "Exponent for monomial_power");
  bench->add_option("--sections", ba.sections, "Number of sections e");
  bench->add_option("--variant", ba.variant, "two-key or same-key");
  bench->add_option("--workers", ba.workers, "Comma-separated worker counts");
  bench->add_option("--jobs", ba.workers, "Alias of --workers");
  bench->add_option("--seed", ba.seed, "Integer seed, or 'os'");
  bench->add_flag("--insecure-params", ba.insecure, "Allow small test parameters");
  bench->add_option("--budget", ba.budget, "Monomial budget per polynomial");
  bench->add_option("--samples", ba.samples, "Encrypt/decrypt repetitions averaged per row")
      ->check(CLI::PositiveNumber);
  bench->callback([&] { action = [&] { return run_bench(ba); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return EHE_ERR_USAGE;
  }
  try {
    return action ? action() : EHE_ERR_USAGE;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.status();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EHE_ERR_USAGE;
  }
}
