#include "ehe/gates.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "ehe/error.hpp"
#include "ehe/parallel.hpp"

namespace ehe {

namespace {

void check_index(std::size_t i, std::size_t width) {
  require(i < width, ErrorCode::kDimension,
          "wire index " + std::to_string(i) + " out of range for width " + std::to_string(width));
}

BitVec widen_bits(const BitVec& v, std::size_t width) { return v.resized(width); }

}  // namespace

// ---------------------------------------------------------------------------
// Gate / Circuit

Gate Gate::negation(std::size_t width, std::size_t target) {
  return mcx(width, {}, target);
}

Gate Gate::cnot(std::size_t width, std::size_t control, std::size_t target, bool white) {
  return mcx(width, {control}, target, white ? std::vector<std::size_t>{control} : std::vector<std::size_t>{});
}

Gate Gate::toffoli(std::size_t width, std::size_t c1, std::size_t c2, std::size_t target) {
  return mcx(width, {c1, c2}, target);
}

Gate Gate::mcx(std::size_t width, const std::vector<std::size_t>& controls, std::size_t target,
               const std::vector<std::size_t>& white_controls) {
  check_index(target, width);
  Gate g;
  g.target = static_cast<std::uint32_t>(target);
  g.controls = BitVec(width);
  g.polarity = BitVec(width);
  for (auto c : controls) {
    check_index(c, width);
    require(c != target, ErrorCode::kParameter, "gate target cannot also be a control");
    g.controls.set(c, true);
  }
  for (auto c : white_controls) {
    require(c < width && g.controls.get(c), ErrorCode::kParameter,
            "polarity bit set on a wire that is not a control");
    g.polarity.set(c, true);
  }
  return g;
}

bool Gate::well_formed() const noexcept {
  if (controls.size() != polarity.size() || target >= controls.size()) return false;
  if (controls.get(target)) return false;
  const auto c = controls.words();
  const auto z = polarity.words();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (z[i] & ~c[i]) return false;
  }
  return true;
}

Gate Gate::widened(std::size_t width) const {
  require(width >= this->width(), ErrorCode::kDimension, "cannot narrow a gate");
  Gate g;
  g.target = target;
  g.controls = widen_bits(controls, width);
  g.polarity = widen_bits(polarity, width);
  return g;
}

void Circuit::push_back(Gate g) {
  require(g.width() == width, ErrorCode::kDimension,
          "gate width " + std::to_string(g.width()) + " does not match circuit width " +
              std::to_string(width));
  require(g.well_formed(), ErrorCode::kParameter, "malformed gate");
  gates.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
  require(other.width == width, ErrorCode::kDimension, "circuit widths differ");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

void Circuit::validate() const {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    require(gates[i].width() == width && gates[i].well_formed(), ErrorCode::kDimension,
            "gate " + std::to_string(i) + " is malformed for width " + std::to_string(width));
  }
}

Circuit Circuit::widened(std::size_t w) const {
  Circuit out(w);
  out.gates.reserve(gates.size());
  for (const auto& g : gates) out.gates.push_back(g.widened(w));
  return out;
}

void GenerationStats::merge(const GenerationStats& o) {
  work += o.work;
  max_monomials = std::max(max_monomials, o.max_monomials);
  max_degree = std::max(max_degree, o.max_degree);
}

// ---------------------------------------------------------------------------
// State action

void apply_to_state_inplace(const Gate& g, BitVec& a) {
  require(a.size() == g.width(), ErrorCode::kDimension,
          "state has " + std::to_string(a.size()) + " bits, gate acts on " +
              std::to_string(g.width()));
  const auto c = g.controls.words();
  const auto z = g.polarity.words();
  const auto s = a.words();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (((s[i] ^ z[i]) & c[i]) != c[i]) return;
  }
  a.flip(g.target);
}

BitVec apply_to_state(const Gate& g, const BitVec& a) {
  BitVec out = a;
  apply_to_state_inplace(g, out);
  return out;
}

BitVec run_state(const Circuit& c, const BitVec& a) {
  require(a.size() == c.width, ErrorCode::kDimension,
          "state has " + std::to_string(a.size()) + " bits, circuit width is " +
              std::to_string(c.width));
  BitVec s = a;
  for (const auto& g : c.gates) apply_to_state_inplace(g, s);
  return s;
}

// ---------------------------------------------------------------------------
// Polynomial action

void apply_to_poly_inplace(const Gate& g, Anf& p, GenerationStats* stats) {
  require(p.nvars() == g.width(), ErrorCode::kDimension,
          "polynomial has " + std::to_string(p.nvars()) + " variables, gate acts on " +
              std::to_string(g.width()));
  const std::size_t r = g.target;
  if (!p.contains_var(r)) {
    if (stats) ++stats->work;
    return;
  }
  const std::size_t scanned = p.size();
  const std::size_t words = p.words();
  const std::size_t rw = r >> 6;
  const std::uint64_t rbit = std::uint64_t{1} << (r & 63);

  // Cofactor of x_r: every monomial containing x_r, with x_r removed.
  std::vector<std::uint64_t> cofactor;
  p.for_each([&](MaskView m) {
    if (m[rw] & rbit) {
      cofactor.insert(cofactor.end(), m.begin(), m.end());
      cofactor[cofactor.size() - words + rw] &= ~rbit;
    }
  });
  const std::size_t affected = cofactor.size() / words;

  // Expansion of prod (x_i + polarity_i): each white control may drop out.
  std::vector<std::size_t> white;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t bits = g.polarity.words()[w];
    while (bits) {
      white.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  const std::size_t nterms = std::size_t{1} << white.size();
  std::vector<std::uint64_t> terms(nterms * words);
  for (std::size_t s = 0; s < nterms; ++s) {
    std::copy_n(g.controls.words().begin(), words, terms.begin() + static_cast<std::ptrdiff_t>(s * words));
    for (std::size_t j = 0; j < white.size(); ++j) {
      if ((s >> j) & 1u) terms[s * words + (white[j] >> 6)] &= ~(std::uint64_t{1} << (white[j] & 63));
    }
  }

  std::vector<std::uint64_t> scratch(words);
  for (std::size_t m = 0; m < affected; ++m) {
    for (std::size_t t = 0; t < nterms; ++t) {
      for (std::size_t w = 0; w < words; ++w) scratch[w] = cofactor[m * words + w] | terms[t * words + w];
      p.toggle(scratch);
    }
  }
  if (stats) {
    stats->work += scanned + affected * nterms;
    stats->max_monomials = std::max(stats->max_monomials, p.size());
  }
}

Anf apply_to_poly(const Gate& g, const Anf& p) {
  Anf out = p;
  apply_to_poly_inplace(g, out);
  return out;
}

std::vector<Anf> identity_polynomials(std::size_t width) {
  std::vector<Anf> polys;
  polys.reserve(width);
  for (std::size_t i = 0; i < width; ++i) polys.push_back(Anf::variable(width, i));
  return polys;
}

std::vector<Anf> substitute(const Circuit& c, std::vector<Anf> polys, const GenerateOptions& opts,
                            GenerationStats* stats) {
  c.validate();
  for (const auto& p : polys) {
    require(p.nvars() == c.width, ErrorCode::kDimension, "polynomial/circuit width mismatch");
  }
  std::vector<GenerationStats> per(polys.size());
  parallel_for(polys.size(), opts.jobs, [&](std::size_t j) {
    Anf& p = polys[j];
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
      apply_to_poly_inplace(*it, p, &per[j]);
      if (opts.monomial_budget && p.size() > opts.monomial_budget) {
        fail(ErrorCode::kBudget, "polynomial " + std::to_string(j + 1) + " reached " +
                                     std::to_string(p.size()) + " monomials (budget " +
                                     std::to_string(opts.monomial_budget) + ")");
      }
    }
    per[j].max_monomials = std::max(per[j].max_monomials, p.size());
    per[j].max_degree = p.degree().value_or(0);
  });
  if (stats) {
    for (const auto& s : per) stats->merge(s);
  }
  return polys;
}

std::vector<Anf> generate_polynomials(const Circuit& c, const GenerateOptions& opts,
                                      GenerationStats* stats) {
  return substitute(c, identity_polynomials(c.width), opts, stats);
}

Circuit inverse_circuit(const Circuit& c) {
  Circuit out(c.width);
  out.gates.assign(c.gates.rbegin(), c.gates.rend());
  return out;
}

bool commutes(const Gate& g1, const Gate& g2) {
  require(g1.width() == g2.width(), ErrorCode::kDimension, "gate widths differ");
  if (!(g2.controls.get(g1.target) || g1.controls.get(g2.target))) return true;
  // A shared control of opposite polarity keeps the two gates from ever firing together.
  const auto c1 = g1.controls.words();
  const auto c2 = g2.controls.words();
  const auto p1 = g1.polarity.words();
  const auto p2 = g2.polarity.words();
  for (std::size_t i = 0; i < c1.size(); ++i) {
    if (c1[i] & c2[i] & (p1[i] ^ p2[i])) return true;
  }
  return false;
}

bool commutes_semantically(const Gate& g1, const Gate& g2) {
  require(g1.width() == g2.width(), ErrorCode::kDimension, "gate widths differ");
  const std::size_t w = g1.width();
  return generate_polynomials(Circuit(w, {g1, g2})) == generate_polynomials(Circuit(w, {g2, g1}));
}

// ---------------------------------------------------------------------------
// Sampling

RankDistribution RankDistribution::standard() {
  RankDistribution d;
  d.weights = {{0, 0.10}, {1, 0.10}, {2, 0.50}, {3, 0.15}, {4, 0.15}};
  return d;
}

RankDistribution RankDistribution::only(std::size_t rank) {
  RankDistribution d;
  d.weights = {{rank, 1.0}};
  return d;
}

BitVec sample_polarity(const BitVec& controls, const RankDistribution& dist, Rng& rng) {
  BitVec pol(controls.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    if (!controls.get(i)) continue;
    if (rng.bernoulli(dist.white_probability) && count < dist.polarity_cap) {
      pol.set(i, true);
      ++count;
    }
  }
  return pol;
}

Gate sample_gate(std::size_t width, const RankDistribution& dist, Rng& rng) {
  require(width >= 1, ErrorCode::kParameter, "cannot sample a gate on zero wires");
  std::size_t rank = 0;
  if (width > 1) {
    double total = 0;
    for (const auto& [r, wgt] : dist.weights) {
      if (r < width && wgt > 0) total += wgt;
    }
    require(total > 0, ErrorCode::kParameter,
            "no rank in the distribution fits width " + std::to_string(width));
    double u = rng.unit() * total;
    bool picked = false;
    for (const auto& [r, wgt] : dist.weights) {
      if (r >= width || wgt <= 0) continue;
      rank = r;
      picked = true;
      if (u < wgt) break;
      u -= wgt;
    }
    require(picked, ErrorCode::kParameter, "empty rank distribution");
  }
  const std::size_t target = rng.uniform(width);
  std::vector<std::size_t> pool;
  pool.reserve(width - 1);
  for (std::size_t i = 0; i < width; ++i) {
    if (i != target) pool.push_back(i);
  }
  std::vector<std::size_t> controls;
  for (std::size_t j = 0; j < rank; ++j) {
    const std::size_t pick = j + rng.uniform(pool.size() - j);
    std::swap(pool[j], pool[pick]);
    controls.push_back(pool[j]);
  }
  Gate g = Gate::mcx(width, controls, target);
  g.polarity = sample_polarity(g.controls, dist, rng);
  return g;
}

}  // namespace ehe
