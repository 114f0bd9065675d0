#include <doctest.h>

#include <functional>

#include "ehe/error.hpp"
#include "ehe/ime.hpp"
#include "ehe/keygen.hpp"
#include "ehe/rng.hpp"
#include "oracle.hpp"

using namespace ehe;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("parameter guards") {
  CHECK(code_of([] { KeyParams::secure(64, 80, 1).validate(); }) == ErrorCode::kParameter);
  CHECK(code_of([] { KeyParams::secure(128, 256, 1).validate(); }) == ErrorCode::kParameter);
  CHECK(code_of([] { KeyParams::testing(16, 12, 1).validate(); }) == ErrorCode::kParameter);
  auto p = KeyParams::testing(16, 20, 1);
  p.d_lo = 1;
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::kParameter);
  KeyParams::secure(128, 160, 1).validate();
  KeyParams::testing(16, 20, 1).validate();
}

TEST_CASE("secure preset follows the key-size rules") {
  const auto p = KeyParams::secure(128, 160, 3);
  CHECK(p.block_sizes.size() >= 8);
  for (auto h : p.block_sizes) {
    CHECK(h * 10 >= p.k);
    CHECK(h * 2 < p.k);
  }
  CHECK(p.d_lo * 10 >= p.k);
  CHECK(p.d_hi * 2 < p.k);
}

TEST_CASE("initial set is x_i plus a quadratic in the message bits") {
  auto p = KeyParams::testing(16, 20, 5);
  Rng rng(5, "initial-test");
  const auto terms = sample_initial_terms(p, rng);
  const auto polys = build_initial_set(p, terms);
  REQUIRE(polys.size() == p.w);
  for (std::size_t i = 0; i < p.w; ++i) {
    CHECK(polys[i].degree().value_or(0) <= 2);
  }
  for (const auto& t : terms) {
    CHECK(t.a < p.k);
    CHECK(t.b < p.k);
    CHECK(t.a != t.b);
  }
}

TEST_CASE("initial circuit realises the initial set") {
  auto p = KeyParams::testing(8, 12, 6);
  Rng rng(6, "initial-circuit");
  const auto terms = sample_initial_terms(p, rng);
  const auto polys = build_initial_set(p, terms);
  const Circuit c = initial_circuit(p.w, terms);
  for (std::uint64_t a = 0; a < 4096; ++a) {
    const std::uint64_t out = oracle::run(oracle::plain(c), a);
    for (std::size_t i = 0; i < p.w; ++i) REQUIRE(oracle::eval(polys[i], a) == ((out >> i) & 1u));
  }
}

TEST_CASE("test keys decrypt what they encrypt") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto kp = generate_keypair(KeyParams::testing(16, 20, seed));
    Rng rng(seed, "messages");
    for (int i = 0; i < 100; ++i) {
      const BitVec m = BitVec::from_uint(rng.uniform(1u << 16), 16);
      const BitVec c = encrypt(kp.pub, m, Padding::kRandom, seed, static_cast<std::uint64_t>(i));
      REQUIRE(c.size() == 20);
      REQUIRE(decrypt(kp.priv, c).plaintext == m);
    }
  }
}

TEST_CASE("public polynomials are the substitution of the private mapping") {
  const auto kp = generate_keypair(KeyParams::testing(16, 20, 9));
  CHECK(kp.priv.regenerate_public() == kp.pub.polys);
  CHECK(kp.pub.degree == max_degree(kp.pub.polys));
  CHECK(kp.pub.degree >= kp.pub.d_lo);
  CHECK(kp.pub.degree <= kp.pub.d_hi);
}

TEST_CASE("public key evaluation equals the execution circuit") {
  const auto kp = generate_keypair(KeyParams::testing(8, 12, 10));
  const Circuit exec = kp.priv.execution_circuit();
  const auto plain = oracle::plain(exec);
  for (std::uint64_t a = 0; a < 4096; ++a) {
    const std::uint64_t out = oracle::run(plain, a);
    for (std::size_t i = 0; i < 12; ++i) REQUIRE(oracle::eval(kp.pub.polys[i], a) == ((out >> i) & 1u));
  }
}

TEST_CASE("noncommuting blocks are pairwise noncommuting and disjoint in targets") {
  const auto kp = generate_keypair(KeyParams::testing(32, 40, 11));
  REQUIRE_FALSE(kp.priv.blocks.empty());
  std::vector<bool> targeted(40, false);
  for (const auto& span : kp.priv.blocks) {
    for (std::size_t i = 0; i < span.length; ++i) {
      const Gate& gi = kp.priv.mapping.gates[span.start + i];
      CHECK(gi.rank() >= 2);
      for (std::size_t j = i + 1; j < span.length; ++j) {
        CHECK_FALSE(commutes(gi, kp.priv.mapping.gates[span.start + j]));
      }
    }
  }
}

TEST_CASE("planned blocks satisfy the noncommuting contract for many sizes") {
  Rng rng(12, "plan");
  for (std::size_t h = 2; h <= 13; ++h) {
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < h; ++i) targets.push_back(i);
    const auto block = plan_noncommuting_block(40, h, targets, rng);
    REQUIRE(block.size() == h);
    for (std::size_t i = 0; i < h; ++i) {
      CHECK(block[i].rank() >= 2);
      for (std::size_t j = i + 1; j < h; ++j) CHECK_FALSE(commutes(block[i], block[j]));
    }
  }
}

TEST_CASE("keygen is deterministic in the seed") {
  const auto a = generate_keypair(KeyParams::testing(16, 20, 77));
  const auto b = generate_keypair(KeyParams::testing(16, 20, 77));
  const auto c = generate_keypair(KeyParams::testing(16, 20, 78));
  CHECK(a.priv.mapping == b.priv.mapping);
  CHECK(a.pub.polys == b.pub.polys);
  CHECK_FALSE(a.priv.mapping == c.priv.mapping);
  auto p = KeyParams::testing(16, 20, 77);
  p.jobs = 4;
  CHECK(generate_keypair(p).pub.polys == a.pub.polys);
}

TEST_CASE("keys over k variables decrypt from the first k bits") {
  auto p = KeyParams::testing(16, 20, 13);
  p.nvars = 16;
  const auto kp = generate_keypair(p);
  CHECK(kp.pub.nvars == 16);
  Rng rng(13, "vk");
  for (int i = 0; i < 100; ++i) {
    const BitVec m = BitVec::from_uint(rng.uniform(1u << 16), 16);
    REQUIRE(decrypt(kp.priv, encrypt(kp.pub, m)).plaintext == m);
  }
}

TEST_CASE("keypair from a given mapping") {
  auto p = KeyParams::testing(8, 12, 14);
  Rng rng(14, "manual");
  const auto terms = sample_initial_terms(p, rng);
  Circuit mapping(12);
  mapping.push_back(Gate::toffoli(12, 0, 1, 5));
  mapping.push_back(Gate::cnot(12, 3, 9));
  p.d_lo = 2;
  const auto kp = keypair_from_mapping(p, mapping, terms);
  CHECK(kp.priv.mapping == mapping);
  for (std::uint64_t m = 0; m < 256; ++m) {
    const BitVec msg = BitVec::from_uint(m, 8);
    REQUIRE(decrypt(kp.priv, encrypt(kp.pub, msg)).plaintext == msg);
  }
}
