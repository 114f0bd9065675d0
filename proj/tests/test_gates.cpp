#include <doctest.h>

#include "ehe/error.hpp"
#include "ehe/gates.hpp"
#include "ehe/rng.hpp"
#include "oracle.hpp"

using namespace ehe;

namespace {

Circuit random_circuit(std::size_t width, std::size_t gates, Rng& rng) {
  Circuit c(width);
  const auto dist = RankDistribution::standard();
  for (std::size_t i = 0; i < gates; ++i) c.push_back(sample_gate(width, dist, rng));
  return c;
}

}  // namespace

TEST_CASE("gate state action matches the plain simulator") {
  Rng rng(21, "gate-state");
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t width = 1 + rng.uniform(10);
    const Circuit c = random_circuit(width, rng.uniform(40), rng);
    const auto plain = oracle::plain(c);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << width); ++a) {
      REQUIRE(oracle::state_of(run_state(c, BitVec::from_uint(a, width))) == oracle::run(plain, a));
    }
  }
}

TEST_CASE("generated polynomials evaluate to the executed circuit on every input") {
  Rng rng(22, "duality");
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t width = 2 + rng.uniform(7);
    const Circuit c = random_circuit(width, 1 + rng.uniform(64), rng);
    const auto polys = generate_polynomials(c);
    REQUIRE(polys.size() == width);
    const auto plain = oracle::plain(c);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << width); ++a) {
      const std::uint64_t out = oracle::run(plain, a);
      for (std::size_t i = 0; i < width; ++i) REQUIRE(oracle::eval(polys[i], a) == ((out >> i) & 1u));
    }
  }
}

TEST_CASE("generation is independent of the worker count") {
  Rng rng(23, "gen-jobs");
  const Circuit c = random_circuit(12, 80, rng);
  GenerationStats s1;
  GenerationStats s4;
  const auto p1 = generate_polynomials(c, {1, 0}, &s1);
  const auto p4 = generate_polynomials(c, {4, 0}, &s4);
  CHECK(p1 == p4);
  CHECK(s1.work == s4.work);
  CHECK(s1.max_monomials == s4.max_monomials);
}

TEST_CASE("monomial budget overrun raises a budget error") {
  Rng rng(24, "budget");
  const Circuit c = random_circuit(12, 200, rng);
  GenerationStats stats;
  generate_polynomials(c, {1, 0}, &stats);
  REQUIRE(stats.max_monomials > 2);
  try {
    generate_polynomials(c, {1, stats.max_monomials - 1});
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudget);
  }
}

TEST_CASE("inverse circuit undoes the circuit") {
  Rng rng(25, "inverse");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t width = 1 + rng.uniform(10);
    Circuit c = random_circuit(width, rng.uniform(30), rng);
    const Circuit inv = inverse_circuit(c);
    Circuit both = c;
    both.append(inv);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << width); ++a) {
      REQUIRE(oracle::run(oracle::plain(both), a) == a);
    }
  }
}

TEST_CASE("the commutation rule agrees with semantic commutation") {
  Rng rng(26, "commute");
  std::size_t both = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t width = 2 + rng.uniform(5);
    const auto dist = RankDistribution::standard();
    const Gate g1 = sample_gate(width, dist, rng);
    const Gate g2 = sample_gate(width, dist, rng);
    bool semantic = true;
    const oracle::PlainGate a = oracle::plain(g1);
    const oracle::PlainGate b = oracle::plain(g2);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << width); ++s) {
      if (oracle::run({a, b}, s) != oracle::run({b, a}, s)) semantic = false;
    }
    REQUIRE(commutes_semantically(g1, g2) == semantic);
    REQUIRE(commutes(g1, g2) == semantic);
    if (semantic) ++both;
  }
  CHECK(both > 0);
}

TEST_CASE("a target inside the other's controls breaks commutation") {
  const Gate a = Gate::cnot(3, 0, 1);
  const Gate b = Gate::cnot(3, 1, 2);
  CHECK_FALSE(commutes(a, b));
  CHECK_FALSE(commutes_semantically(a, b));
  CHECK(commutes(Gate::cnot(3, 0, 2), Gate::cnot(3, 1, 2)));
  const Gate c = Gate::mcx(4, {1, 3}, 0);
  const Gate d = Gate::mcx(4, {0, 3}, 1, {3});
  CHECK(commutes(c, d));
  CHECK(commutes_semantically(c, d));
}

TEST_CASE("named gates") {
  BitVec s = BitVec::from_string("000");
  apply_to_state_inplace(Gate::negation(3, 1), s);
  CHECK(s.to_string() == "010");
  s = BitVec::from_string("110");
  apply_to_state_inplace(Gate::toffoli(3, 0, 1, 2), s);
  CHECK(s.to_string() == "111");
  s = BitVec::from_string("000");
  apply_to_state_inplace(Gate::cnot(3, 0, 2, true), s);
  CHECK(s.to_string() == "001");
  const Gate m = Gate::mcx(4, {0, 1, 2}, 3, {1});
  CHECK(m.rank() == 3);
  CHECK(m.well_formed());
}

TEST_CASE("malformed gates are rejected") {
  CHECK_THROWS_AS(Gate::cnot(3, 1, 1), Error);
  CHECK_THROWS_AS(Gate::negation(3, 3), Error);
  Circuit c(2);
  CHECK_THROWS_AS(c.push_back(Gate::negation(3, 0)), Error);
}

TEST_CASE("sampled gates respect the rank distribution") {
  Rng rng(27, "sample");
  for (std::size_t rank = 0; rank <= 4; ++rank) {
    for (int i = 0; i < 50; ++i) {
      const Gate g = sample_gate(8, RankDistribution::only(rank), rng);
      REQUIRE(g.rank() == rank);
      REQUIRE(g.well_formed());
      REQUIRE_FALSE(g.controls.get(g.target));
    }
  }
}

TEST_CASE("widened circuits act identically on the low wires") {
  Rng rng(28, "widen");
  const Circuit c = random_circuit(6, 30, rng);
  const Circuit wide = c.widened(9);
  for (std::uint64_t a = 0; a < 64; ++a) {
    const std::uint64_t hi = (a * 5) & 7u;
    const BitVec out = run_state(wide, BitVec::from_uint(a | (hi << 6), 9));
    CHECK(out.to_uint(0, 6) == oracle::run(oracle::plain(c), a));
    CHECK(out.to_uint(6, 3) == hi);
  }
}
