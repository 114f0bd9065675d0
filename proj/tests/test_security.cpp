#include <doctest.h>

#include <cmath>

#include "ehe/error.hpp"
#include "ehe/keygen.hpp"
#include "ehe/rng.hpp"
#include "ehe/security.hpp"

using namespace ehe;

namespace {

std::vector<std::vector<BigInt>> pascal(std::size_t rows) {
  std::vector<std::vector<BigInt>> t(rows + 1);
  for (std::size_t n = 0; n <= rows; ++n) {
    t[n].assign(n + 1, 1);
    for (std::size_t r = 1; r < n; ++r) t[n][r] = t[n - 1][r - 1] + t[n - 1][r];
  }
  return t;
}

std::size_t brute_clique(const std::vector<Gate>& g) {
  std::size_t best = 0;
  for (std::uint32_t s = 1; s < (1u << g.size()); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < g.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < g.size() && ok; ++j) {
        if (((s >> i) & 1u) && ((s >> j) & 1u) && commutes(g[i], g[j])) ok = false;
      }
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(s)));
  }
  return best;
}

}  // namespace

TEST_CASE("binomials match Pascal's triangle") {
  const auto t = pascal(200);
  for (std::size_t n = 0; n <= 200; n += 7) {
    for (std::size_t r = 0; r <= n; ++r) REQUIRE(binomial(n, r) == t[n][r]);
  }
  CHECK(binomial(5, 6) == 0);
}

TEST_CASE("factorials match the running product") {
  BigInt f = 1;
  for (std::size_t n = 1; n <= 300; ++n) {
    f *= n;
    REQUIRE(factorial(n) == f);
  }
  CHECK(factorial(0) == 1);
}

TEST_CASE("log2 of big integers") {
  CHECK(log2_big(BigInt(1)) == doctest::Approx(0.0));
  CHECK(log2_big(BigInt(1) << 300) == doctest::Approx(300.0));
  CHECK(log2_big((BigInt(1) << 200) * 3) == doctest::Approx(200 + std::log2(3.0)));
  CHECK_THROWS_AS(log2_big(BigInt(0)), Error);
}

TEST_CASE("Stirling tracks the exact log factorial") {
  for (std::size_t n : {5u, 13u, 50u, 400u}) {
    CHECK(std::abs(stirling_log2_factorial(n) - log2_factorial(n)) < 1e-3);
  }
}

TEST_CASE("XL monomial count is the partial sum of binomials") {
  const auto t = pascal(128);
  BigInt s = 0;
  for (std::size_t i = 0; i <= 13; ++i) s += t[128][i];
  CHECK(xl_monomials(128, 13) == s);
  const auto r = xl_report(128, 13, 13, 2.5);
  CHECK(r.log2_complexity == doctest::Approx(2.5 * log2_big(s)));
  CHECK_THROWS_AS(xl_report(128, 13, 12, 2.5), Error);
  CHECK_THROWS_AS(xl_report(128, 13, 13, 2.0), Error);
}

TEST_CASE("closed-form estimators") {
  CHECK(log2_icrp(160) == 160.0);
  CHECK(log2_grover(128, 160) == doctest::Approx(3 * std::log2(160.0) + 65));
  CHECK(log2_denc({13, 13}) == doctest::Approx(2 * log2_big(factorial(13))));
  const double root = std::sqrt(400.0);
  CHECK(xl_quadratic_subexp_log2(400, 2.0) == doctest::Approx(2 * (root * std::log2(400.0) - log2_factorial(20))));
}

TEST_CASE("criterion verdict and report fields") {
  const auto r = security_report(128, 160, 13, 0, 2.5, std::vector<std::size_t>(8, 13));
  CHECK(r.D == 13);
  const auto v = criterion_check(r);
  CHECK(v.ok());
  const auto weak = security_report(128, 160, 13, 0, 2.5, {3, 3});
  CHECK_FALSE(criterion_check(weak).denc_gt_icrp);
  const std::string text = format_report(r);
  CHECK(text.find("criterion_ok=true") != std::string::npos);
  CHECK(text.find("log2_icrp=160") != std::string::npos);
  CHECK(std::string(security_band(127.9)) == "below-128");
  CHECK(std::string(security_band(128)) == ">=128");
  CHECK(std::string(security_band(2000)) == ">=1024");
}

TEST_CASE("noncommuting set searches match brute force on small gate lists") {
  Rng rng(51, "clique");
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Gate> gates;
    const std::size_t m = 3 + rng.uniform(10);
    for (std::size_t i = 0; i < m; ++i) gates.push_back(sample_gate(6, RankDistribution::standard(), rng));
    const std::size_t exact = exact_noncommuting_set(gates);
    REQUIRE(exact == brute_clique(gates));
    REQUIRE(greedy_noncommuting_set(gates, 8, 1) <= exact);
  }
}

TEST_CASE("measured blocks of a key are at least the planned sizes") {
  const auto kp = generate_keypair(KeyParams::testing(32, 40, 52));
  const auto est = measure_blocks(kp.priv);
  REQUIRE(est.size() == kp.priv.blocks.size());
  for (std::size_t i = 0; i < est.size(); ++i) {
    CHECK(est[i].greedy >= kp.priv.blocks[i].length);
    if (est[i].exact) CHECK(est[i].exact >= est[i].greedy);
  }
}
