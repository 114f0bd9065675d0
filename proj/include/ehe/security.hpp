#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ehe/gates.hpp"
#include "ehe/keygen.hpp"

namespace ehe {

using BigInt = boost::multiprecision::cpp_int;

double log2_big(const BigInt& x);
BigInt binomial(std::size_t n, std::size_t r);
BigInt factorial(std::size_t n);
double log2_factorial(std::size_t n);
/// Stirling's series up to the 1/(12n) term, in bits.
double stirling_log2_factorial(std::size_t n);

/// Monomials of degree <= D in k variables: sum_{i<=D} C(k, i).
BigInt xl_monomials(std::size_t k, std::size_t D);

struct XlReport {
  BigInt monomials;
  double log2_complexity = 0;  // chi * log2(monomials)
};

/// Requires 2 <= d <= D <= k and 2 < chi <= 3.
XlReport xl_report(std::size_t k, std::size_t d, std::size_t D, double chi);

/// chi * (sqrt(w) log2 w - log2(floor(sqrt(w))!)), for w >= 4.
double xl_quadratic_subexp_log2(std::size_t w, double chi);

double log2_icrp(std::size_t w);
double log2_denc(const std::vector<std::size_t>& block_sizes);
/// log2(w^3 2^{k/2+1}).
double log2_grover(std::size_t k, std::size_t w);

struct SecurityReport {
  std::size_t k = 0;
  std::size_t w = 0;
  std::size_t d = 0;
  std::size_t D = 0;
  double chi = 2.5;
  std::vector<std::size_t> blocks;

  BigInt xl_monomials;
  double log2_xl = 0;
  double log2_xl_quadratic_subexp = 0;
  double log2_icrp = 0;
  double log2_denc = 0;
  double log2_grover = 0;
};

/// D = 0 selects D = d.
SecurityReport security_report(std::size_t k, std::size_t w, std::size_t d, std::size_t D, double chi,
                               const std::vector<std::size_t>& blocks);

struct CriterionVerdict {
  bool denc_gt_icrp = false;
  bool icrp_gt_xl = false;
  bool xl_gt_k = false;

  bool ok() const noexcept { return denc_gt_icrp && icrp_gt_xl && xl_gt_k; }
};

/// T_deNC > T_ICRP > T_XL > 2^k, compared in log2 space.
CriterionVerdict criterion_check(const SecurityReport& r);

/// Classification band of a log2 complexity: "below-128", ">=128", ">=1024".
const char* security_band(double log2_value);

/// key=value lines, one per field and verdict.
std::string format_report(const SecurityReport& r);

/// Largest set of pairwise noncommuting gates, greedy with restarts (a lower bound).
std::size_t greedy_noncommuting_set(const std::vector<Gate>& gates, std::size_t restarts = 16, std::uint64_t seed = 0);
/// Exact maximum by branch and bound; at most 24 gates.
std::size_t exact_noncommuting_set(const std::vector<Gate>& gates);

struct BlockEstimate {
  std::size_t greedy = 0;
  std::size_t exact = 0;  // 0 when the block is too large for exact search
};

/// Measured h_i for each recorded block of a private key.
std::vector<BlockEstimate> measure_blocks(const ImePrivateKey& key);

}  // namespace ehe
