#include "ehe/cryptoval.hpp"

#include <algorithm>

#include "ehe/error.hpp"
#include "ehe/parallel.hpp"

namespace ehe {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

Circuit build_encrypted_action(const Circuit& m, const Circuit& r_en, const Circuit& r_cv, CvVariant variant) {
  const std::size_t n = m.width;
  require(r_cv.width == n, ErrorCode::kDimension, "R_cv width must equal the function width n");
  require(r_en.width <= n, ErrorCode::kDimension, "message key is wider than the program");
  if (variant == CvVariant::kSameKey) {
    require(r_en.width == n, ErrorCode::kDimension, "same-key evaluation needs n = w");
    require(r_en == r_cv, ErrorCode::kParameter, "same-key evaluation reuses the message key as R_cv");
  } else {
    require(n > r_en.width, ErrorCode::kDimension, "two-key evaluation needs n > w");
  }
  m.validate();
  Circuit u = inverse_circuit(r_en).widened(n);
  u.append(m);
  u.append(r_cv);
  return u;
}

std::vector<Circuit> sectionalize(const Circuit& u, std::size_t e, Rng& rng, std::size_t boundary_gates) {
  const std::size_t n = u.width;
  const std::size_t g = u.size();
  require(e >= 1 && e <= std::max<std::size_t>(g, 1), ErrorCode::kParameter,
          "section count " + std::to_string(e) + " must lie in [1, " + std::to_string(std::max<std::size_t>(g, 1)) +
              "]");
  if (boundary_gates == 0) boundary_gates = ceil_div(n, 4);
  std::vector<Circuit> keys;
  for (std::size_t q = 0; q + 1 < e; ++q) {
    MappingOptions opts;
    opts.width = n;
    opts.filler_gates = boundary_gates;
    Rng krng = rng.derive("boundary", q);
    keys.push_back(sample_encryption_mapping(opts, {}, krng).circuit);
  }
  std::vector<Circuit> out;
  std::size_t pos = 0;
  for (std::size_t q = 0; q < e; ++q) {
    const std::size_t len = g / e + (q < g % e ? 1 : 0);
    Circuit s(n);
    if (q > 0) s.append(inverse_circuit(keys[q - 1]));
    s.gates.insert(s.gates.end(), u.gates.begin() + static_cast<std::ptrdiff_t>(pos),
                   u.gates.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
    if (q + 1 < e) s.append(keys[q]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<Anf>> generate_sections(const std::vector<Circuit>& sections, const ProgramOptions& opts,
                                                std::vector<GenerationStats>* stats) {
  const std::size_t e = sections.size();
  std::vector<std::vector<Anf>> out(e);
  std::vector<GenerationStats> st(e);
  const unsigned jobs = effective_jobs(opts.jobs);
  // Parallelize over sections when there are enough of them, else inside each.
  const unsigned outer = e >= jobs ? jobs : 1;
  const unsigned inner = e >= jobs ? 1 : jobs;
  parallel_for(e, outer, [&](std::size_t q) {
    const std::size_t n = sections[q].width;
    GenerateOptions g;
    g.jobs = inner;
    g.monomial_budget = opts.monomial_budget ? opts.monomial_budget : 4 * n * n;
    try {
      out[q] = generate_polynomials(sections[q], g, &st[q]);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kBudget) throw;
      fail(ErrorCode::kBudget, "section " + std::to_string(q + 1) + " of " + std::to_string(e) + ": " + err.what());
    }
  });
  if (stats) *stats = std::move(st);
  return out;
}

BitVec evaluate_program(const EncryptedProgram& p, const BitVec& c, unsigned jobs) {
  require(c.size() == p.w, ErrorCode::kDimension,
          "ciphertext has " + std::to_string(c.size()) + " bits, program expects " + std::to_string(p.w));
  BitVec v = c.resized(p.n);
  std::vector<char> next(p.n);
  for (const auto& section : p.sections) {
    require(section.size() == p.n, ErrorCode::kDimension, "section does not hold n polynomials");
    parallel_for(p.n, jobs, [&](std::size_t i) { next[i] = section[i].eval(v) ? 1 : 0; });
    for (std::size_t i = 0; i < p.n; ++i) v.set(i, next[i] != 0);
  }
  return v;
}

BitVec decrypt_result(const CvKey& key, const BitVec& v) {
  require(v.size() == key.n, ErrorCode::kDimension,
          "result has " + std::to_string(v.size()) + " bits, key expects " + std::to_string(key.n));
  const BitVec s = run_state(inverse_circuit(key.r_cv), v);
  BitVec out(key.output_map.size());
  for (std::size_t i = 0; i < key.output_map.size(); ++i) {
    require(key.output_map[i] < key.n, ErrorCode::kCorrupt, "output wire out of range");
    out.set(i, s.get(key.output_map[i]));
  }
  return out;
}

std::uint64_t circuit_fingerprint(const Circuit& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(c.width);
  mix(c.size());
  for (const auto& g : c.gates) {
    mix(g.target);
    for (auto w : g.controls.words()) mix(w);
    for (auto w : g.polarity.words()) mix(w);
  }
  return h;
}

std::size_t shell_gate_count(std::size_t bits, std::size_t exponent) {
  std::size_t g = 0;
  for (auto k : all_functions()) g = std::max(g, build_function_circuit({k, bits, exponent}).size());
  return g;
}

Circuit pad_to_shell(const Circuit& m, std::size_t n, std::size_t gates, Rng& rng) {
  Circuit base = m.widened(n);
  require(n >= 2, ErrorCode::kParameter, "shell needs at least 2 wires");
  require(gates == base.size() || gates >= base.size() + 2, ErrorCode::kParameter,
          "shell must be equal to or at least two gates larger than the function circuit");
  std::size_t extra = gates - base.size();
  // Groups: pairs (g, g), plus one triple when the count is odd. Two gates
  // differing only in the polarity of control c compose to the gate without c.
  std::vector<std::size_t> group_sizes;
  if (extra % 2 == 1) {
    group_sizes.push_back(3);
    extra -= 3;
  }
  group_sizes.insert(group_sizes.end(), extra / 2, 2);
  std::vector<std::vector<std::size_t>> before(base.size() + 1);
  for (auto g : group_sizes) before[rng.uniform(base.size() + 1)].push_back(g);

  RankDistribution ranks = RankDistribution::standard();
  ranks.weights.erase(ranks.weights.begin());  // no negations: the triple needs a control
  Circuit out(n);
  out.gates.reserve(gates);
  auto emit = [&](const std::vector<std::size_t>& groups) {
    for (auto size : groups) {
      Gate g = sample_gate(n, ranks, rng);
      if (size == 2) {
        out.gates.push_back(g);
        out.gates.push_back(std::move(g));
        continue;
      }
      std::vector<std::size_t> ctl;
      for (std::size_t i = 0; i < n; ++i) {
        if (g.controls.get(i)) ctl.push_back(i);
      }
      const std::size_t c = ctl[rng.uniform(ctl.size())];
      Gate g2 = g;
      g2.polarity.flip(c);
      Gate g3 = g;
      g3.controls.set(c, false);
      g3.polarity.set(c, false);
      out.gates.push_back(std::move(g));
      out.gates.push_back(std::move(g2));
      out.gates.push_back(std::move(g3));
    }
  };
  for (std::size_t s = 0; s < base.size(); ++s) {
    emit(before[s]);
    out.gates.push_back(base.gates[s]);
  }
  emit(before[base.size()]);
  return out;
}

CvBundle cv_keygen(const ImePrivateKey& message_key, const CvParams& params) {
  const FunctionSpec& spec = params.function;
  const FunctionLayout layout = function_layout(spec);
  const std::size_t n = params.n;
  require(message_key.nvars == message_key.w, ErrorCode::kParameter,
          "cryptovaluation needs a message key with nvars = w");
  require(message_key.k >= 2 * spec.bits, ErrorCode::kDimension,
          "plaintext of " + std::to_string(message_key.k) + " bits cannot hold two " + std::to_string(spec.bits) +
              "-bit operands");
  require(n >= layout.width, ErrorCode::kDimension,
          "n = " + std::to_string(n) + " is narrower than the " + function_name(spec.kind) + " circuit (" +
              std::to_string(layout.width) + " wires)");
  const Rng root(params.seed, "cv-keygen");

  Circuit m = build_function_circuit(spec);
  const std::size_t shell = shell_width(spec.bits, spec.exponent);
  const bool blinded = params.blind && n >= shell;
  std::size_t shell_gates = m.size();
  if (blinded) {
    shell_gates = shell_gate_count(spec.bits, spec.exponent) + 3;
    Rng prng = root.derive("shell");
    m = pad_to_shell(m, n, shell_gates, prng);
  } else {
    m = m.widened(n);
  }

  const Circuit r_en = message_key.execution_circuit();
  Circuit r_cv;
  if (params.variant == CvVariant::kSameKey) {
    r_cv = r_en;
  } else {
    MappingOptions opts;
    opts.width = n;
    opts.block_sizes = params.r_cv_blocks;
    if (opts.block_sizes.empty() && n >= 3) opts.block_sizes = {3, 3};
    opts.filler_gates = params.r_cv_gates ? params.r_cv_gates : n;
    opts.monomial_budget = params.monomial_budget ? params.monomial_budget : 4 * n * n;
    Rng krng = root.derive("r-cv");
    r_cv = sample_encryption_mapping(opts, identity_polynomials(n), krng).circuit;
  }

  CvBundle out;
  out.action = build_encrypted_action(m, r_en, r_cv, params.variant);
  const std::size_t e = params.sections ? params.sections : ceil_div(n, 2);
  Rng srng = root.derive("sections");
  out.sections = sectionalize(out.action, e, srng, params.boundary_gates);

  ProgramOptions popts;
  popts.jobs = params.jobs;
  popts.monomial_budget = params.monomial_budget;
  EncryptedProgram& p = out.program;
  p.n = n;
  p.w = message_key.w;
  p.k = message_key.k;
  p.variant = params.variant;
  p.output_map = layout.output_map();
  p.blindness_class = "L=" + std::to_string(spec.bits) + ";n=" + std::to_string(n) + ";e=" + std::to_string(e) +
                      ";gates=" + std::to_string(m.size()) + (blinded ? "" : ";unblinded");
  p.sections = generate_sections(out.sections, popts, &out.stats);

  CvKey& key = out.key;
  key.variant = params.variant;
  key.n = n;
  key.w = message_key.w;
  key.k = message_key.k;
  key.message_key_fingerprint = circuit_fingerprint(r_en);
  key.function = spec;
  key.output_map = p.output_map;
  key.r_cv = std::move(r_cv);
  return out;
}

BitVec pack_operands(const FunctionSpec& spec, std::size_t k, std::uint64_t a, std::uint64_t b) {
  require(k >= 2 * spec.bits, ErrorCode::kDimension, "plaintext too short for two operands");
  BitVec m(k);
  m.set_uint(0, spec.bits, a);
  m.set_uint(spec.bits, spec.bits, b);
  return m;
}

std::vector<std::uint64_t> unpack_result(const FunctionSpec& spec, const BitVec& bits) {
  const FunctionLayout f = function_layout(spec);
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  for (const auto& r : f.outputs) {
    require(pos + r.wires.size() <= bits.size(), ErrorCode::kDimension, "result has too few bits");
    out.push_back(bits.to_uint(pos, std::min<std::size_t>(r.wires.size(), 64)));
    pos += r.wires.size();
  }
  return out;
}

}  // namespace ehe
