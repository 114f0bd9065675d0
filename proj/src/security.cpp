#include "ehe/security.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ehe/error.hpp"
#include "ehe/rng.hpp"

namespace ehe {

double log2_big(const BigInt& x) {
  require(x > 0, ErrorCode::kParameter, "log2 of a non-positive number");
  const std::size_t msb = boost::multiprecision::msb(x);
  if (msb < 53) return std::log2(x.convert_to<double>());
  const BigInt top = x >> (msb - 52);
  return static_cast<double>(msb - 52) + std::log2(top.convert_to<double>());
}

BigInt binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  BigInt c = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;
  }
  return c;
}

BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

double log2_factorial(std::size_t n) { return log2_big(factorial(n)); }

double stirling_log2_factorial(std::size_t n) {
  if (n < 2) return 0;
  const double x = static_cast<double>(n);
  const double ln = x * std::log(x) - x + 0.5 * std::log(2 * M_PI * x) + 1.0 / (12 * x);
  return ln / std::log(2.0);
}

BigInt xl_monomials(std::size_t k, std::size_t D) {
  require(D <= k, ErrorCode::kParameter, "D must not exceed k");
  BigInt s = 0;
  for (std::size_t i = 0; i <= D; ++i) s += binomial(k, i);
  return s;
}

XlReport xl_report(std::size_t k, std::size_t d, std::size_t D, double chi) {
  require(d >= 2 && d <= D && D <= k, ErrorCode::kParameter, "XL estimate needs 2 <= d <= D <= k");
  require(chi > 2 && chi <= 3, ErrorCode::kParameter, "XL exponent chi must lie in (2, 3]");
  XlReport r;
  r.monomials = xl_monomials(k, D);
  r.log2_complexity = chi * log2_big(r.monomials);
  return r;
}

double xl_quadratic_subexp_log2(std::size_t w, double chi) {
  require(w >= 4, ErrorCode::kParameter, "subexponential estimate needs w >= 4");
  const double root = std::sqrt(static_cast<double>(w));
  auto s = static_cast<std::size_t>(root);
  while ((s + 1) * (s + 1) <= w) ++s;
  while (s * s > w) --s;
  return chi * (root * std::log2(static_cast<double>(w)) - log2_factorial(s));
}

double log2_icrp(std::size_t w) { return static_cast<double>(w); }

double log2_denc(const std::vector<std::size_t>& block_sizes) {
  double s = 0;
  for (auto h : block_sizes) s += log2_factorial(h);
  return s;
}

double log2_grover(std::size_t k, std::size_t w) {
  require(w >= 1, ErrorCode::kParameter, "w must be positive");
  return 3 * std::log2(static_cast<double>(w)) + static_cast<double>(k) / 2 + 1;
}

SecurityReport security_report(std::size_t k, std::size_t w, std::size_t d, std::size_t D, double chi,
                               const std::vector<std::size_t>& blocks) {
  require(w >= k, ErrorCode::kParameter, "w < k");
  SecurityReport r;
  r.k = k;
  r.w = w;
  r.d = d;
  r.D = D ? D : d;
  r.chi = chi;
  r.blocks = blocks;
  const XlReport xl = xl_report(k, d, r.D, chi);
  r.xl_monomials = xl.monomials;
  r.log2_xl = xl.log2_complexity;
  r.log2_xl_quadratic_subexp = xl_quadratic_subexp_log2(w, chi);
  r.log2_icrp = log2_icrp(w);
  r.log2_denc = log2_denc(blocks);
  r.log2_grover = log2_grover(k, w);
  return r;
}

CriterionVerdict criterion_check(const SecurityReport& r) {
  CriterionVerdict v;
  v.denc_gt_icrp = r.log2_denc > r.log2_icrp;
  v.icrp_gt_xl = r.log2_icrp > r.log2_xl;
  v.xl_gt_k = r.log2_xl > static_cast<double>(r.k);
  return v;
}

const char* security_band(double log2_value) {
  if (log2_value >= 1024) return ">=1024";
  if (log2_value >= 128) return ">=128";
  return "below-128";
}

std::string format_report(const SecurityReport& r) {
  std::ostringstream o;
  o.precision(6);
  o << std::fixed;
  o << "k=" << r.k << "\nw=" << r.w << "\nd=" << r.d << "\nD=" << r.D << "\nchi=" << r.chi << "\nl=" << r.blocks.size()
    << "\nh=";
  for (std::size_t i = 0; i < r.blocks.size(); ++i) o << (i ? "," : "") << r.blocks[i];
  o << "\nxl_monomials=" << r.xl_monomials << "\nlog2_xl=" << r.log2_xl
    << "\nlog2_xl_quadratic_subexp=" << r.log2_xl_quadratic_subexp << "\nlog2_icrp=" << r.log2_icrp
    << "\nlog2_denc=" << r.log2_denc << "\nlog2_grover=" << r.log2_grover;
  const CriterionVerdict v = criterion_check(r);
  o << "\ndenc_gt_icrp=" << (v.denc_gt_icrp ? "true" : "false") << "\nicrp_gt_xl=" << (v.icrp_gt_xl ? "true" : "false")
    << "\nxl_gt_k=" << (v.xl_gt_k ? "true" : "false") << "\ncriterion_ok=" << (v.ok() ? "true" : "false");
  o << "\nband_xl=" << security_band(r.log2_xl) << "\nband_icrp=" << security_band(r.log2_icrp)
    << "\nband_denc=" << security_band(r.log2_denc) << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Noncommuting sets

namespace {

std::vector<std::vector<bool>> conflict_graph(const std::vector<Gate>& gates) {
  const std::size_t m = gates.size();
  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) adj[i][j] = adj[j][i] = !commutes(gates[i], gates[j]);
  }
  return adj;
}

}  // namespace

std::size_t greedy_noncommuting_set(const std::vector<Gate>& gates, std::size_t restarts, std::uint64_t seed) {
  const std::size_t m = gates.size();
  if (m == 0) return 0;
  const auto adj = conflict_graph(gates);
  Rng rng(seed, "greedy-clique");
  std::size_t best = 0;
  std::vector<std::size_t> order(m);
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    std::iota(order.begin(), order.end(), 0);
    if (r == 0) {
      // First pass: highest degree first.
      std::vector<std::size_t> deg(m, 0);
      for (std::size_t i = 0; i < m; ++i) deg[i] = static_cast<std::size_t>(std::count(adj[i].begin(), adj[i].end(), true));
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
    } else {
      for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.uniform(i)]);
    }
    std::vector<std::size_t> set;
    for (auto v : order) {
      if (std::all_of(set.begin(), set.end(), [&](std::size_t u) { return adj[u][v]; })) set.push_back(v);
    }
    best = std::max(best, set.size());
  }
  return best;
}

std::size_t exact_noncommuting_set(const std::vector<Gate>& gates) {
  const std::size_t m = gates.size();
  require(m <= 24, ErrorCode::kParameter, "exact search is limited to 24 gates");
  if (m == 0) return 0;
  const auto adj = conflict_graph(gates);
  std::vector<std::uint32_t> nbr(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (adj[i][j]) nbr[i] |= 1u << j;
    }
  }
  std::size_t best = 0;
  auto search = [&](auto&& self, std::uint32_t cand, std::size_t size) -> void {
    if (cand == 0) {
      best = std::max(best, size);
      return;
    }
    if (size + static_cast<std::size_t>(std::popcount(cand)) <= best) return;
    const int v = std::countr_zero(cand);
    self(self, cand & nbr[static_cast<std::size_t>(v)], size + 1);
    self(self, cand & ~(1u << v), size);
  };
  search(search, m == 32 ? ~0u : (1u << m) - 1, 0);
  return best;
}

std::vector<BlockEstimate> measure_blocks(const ImePrivateKey& key) {
  std::vector<BlockEstimate> out;
  for (const auto& span : key.blocks) {
    require(span.start + span.length <= key.mapping.size(), ErrorCode::kCorrupt, "block span outside the mapping");
    std::vector<Gate> gates(key.mapping.gates.begin() + span.start,
                            key.mapping.gates.begin() + span.start + span.length);
    BlockEstimate e;
    e.greedy = greedy_noncommuting_set(gates);
    if (gates.size() <= 24) e.exact = exact_noncommuting_set(gates);
    out.push_back(e);
  }
  return out;
}

}  // namespace ehe
