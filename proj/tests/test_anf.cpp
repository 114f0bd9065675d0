#include <doctest.h>

#include <algorithm>

#include "ehe/anf.hpp"
#include "ehe/error.hpp"
#include "ehe/rng.hpp"
#include "oracle.hpp"

using namespace ehe;

namespace {

Anf random_anf(std::size_t v, std::size_t terms, Rng& rng) {
  Anf p(v);
  for (std::size_t i = 0; i < terms; ++i) {
    BitVec m(v);
    for (std::size_t j = 0; j < v; ++j) m.set(j, rng.bernoulli(0.4));
    p.toggle(m.words());
  }
  return p;
}

}  // namespace

TEST_CASE("anf representation is the unique algebraic normal form of its truth table") {
  Rng rng(11, "anf-unique");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t v = 1 + rng.uniform(9);
    const Anf p = random_anf(v, rng.uniform(40), rng);
    auto masks = p.sorted_masks();
    std::sort(masks.begin(), masks.end());
    CHECK(masks == oracle::mobius(oracle::truth_table(p)));
  }
}

TEST_CASE("anf evaluation agrees with direct monomial evaluation") {
  Rng rng(12, "anf-eval");
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t v = 1 + rng.uniform(10);
    const Anf p = random_anf(v, rng.uniform(30), rng);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << v); ++a) {
      REQUIRE(p.eval(BitVec::from_uint(a, v)) == oracle::eval(p, a));
    }
  }
}

TEST_CASE("anf addition is pointwise xor and self-cancelling") {
  Rng rng(13, "anf-add");
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t v = 1 + rng.uniform(8);
    const Anf p = random_anf(v, rng.uniform(30), rng);
    const Anf q = random_anf(v, rng.uniform(30), rng);
    const Anf s = p + q;
    const auto tp = oracle::truth_table(p);
    const auto tq = oracle::truth_table(q);
    const auto ts = oracle::truth_table(s);
    for (std::size_t i = 0; i < ts.size(); ++i) REQUIRE(ts[i] == (tp[i] ^ tq[i]));
    CHECK((p + p).is_zero());
    CHECK(add(p, q) == s);
  }
}

TEST_CASE("anf toggling a present monomial removes it") {
  Anf p(3);
  p.toggle_monomial({0, 2});
  p.toggle_monomial({1});
  CHECK(p.size() == 2);
  p.toggle_monomial({0, 2});
  CHECK(p.size() == 1);
  CHECK(p == Anf::variable(3, 1));
}

TEST_CASE("anf degree, occurrences and constants") {
  Anf p = Anf::parse(4, "x1*x2*x4 + x3 + 1");
  CHECK(p.degree() == 3u);
  CHECK(p.occurrences(0) == 1);
  CHECK(p.occurrences(2) == 1);
  CHECK(p.contains_var(1));
  CHECK_FALSE(Anf::parse(4, "x1*x2 + x4").contains_var(2));
  CHECK(Anf::zero(4).degree() == std::nullopt);
  CHECK(Anf::one(4).degree() == 0u);
  CHECK(Anf::one(4).eval(BitVec(4)));
}

TEST_CASE("anf text roundtrip") {
  Rng rng(14, "anf-text");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t v = 1 + rng.uniform(70);
    const Anf p = random_anf(v, rng.uniform(12), rng);
    CHECK(Anf::parse(v, p.to_string()) == p);
  }
}

TEST_CASE("anf handles variables beyond the first word") {
  const std::size_t v = 130;
  Anf p(v);
  p.toggle_monomial({0, 64, 129});
  BitVec a(v);
  a.set(0, true);
  a.set(64, true);
  CHECK_FALSE(p.eval(a));
  a.set(129, true);
  CHECK(p.eval(a));
  CHECK(p.occurrences(129) == 1);
}

TEST_CASE("anf rejects malformed text") {
  CHECK_THROWS_AS(Anf::parse(3, "x4"), Error);
  CHECK_THROWS_AS(Anf::parse(3, "x1 + + x2"), Error);
}
