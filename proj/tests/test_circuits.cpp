#include <doctest.h>

#include "ehe/circuits.hpp"
#include "ehe/error.hpp"
#include "ehe/rng.hpp"
#include "oracle.hpp"

using namespace ehe;

namespace {

std::uint64_t read(const BitVec& s, const std::vector<std::size_t>& wires) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < wires.size(); ++i) v |= std::uint64_t{s.get(wires[i])} << i;
  return v;
}

std::vector<std::uint64_t> expected(FunctionKind kind, std::size_t L, std::size_t e, std::uint64_t a,
                                    std::uint64_t b) {
  const std::uint64_t top = (std::uint64_t{1} << L) - 1;
  switch (kind) {
    case FunctionKind::kAdd:
      return {(a + b) % (top + 1), (a + b) > top ? 1u : 0u};
    case FunctionKind::kSub:
      return {(a + (top + 1) - b) % (top + 1), a < b ? 1u : 0u};
    case FunctionKind::kMul:
      return {a * b};
    case FunctionKind::kDiv:
      return b ? std::vector<std::uint64_t>{a / b, a % b} : std::vector<std::uint64_t>{top, a};
    case FunctionKind::kCompare:
      return {a == b, a > b};
    case FunctionKind::kSumOfSquares:
      return {a * a + b * b};
    case FunctionKind::kMonomialPower: {
      std::uint64_t p = 1;
      for (std::size_t i = 0; i < e; ++i) p = (p * a) % (top + 1);
      return {p};
    }
  }
  return {};
}

void check_exhaustive(FunctionKind kind, std::size_t L, std::size_t e = 3) {
  const FunctionSpec spec{kind, L, e};
  const Circuit c = build_function_circuit(spec);
  const FunctionLayout f = function_layout(spec);
  REQUIRE(c.width == f.width);
  CHECK(c.width <= shell_width(L, e));
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << L); ++a) {
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << L); ++b) {
      BitVec s(c.width);
      for (std::size_t i = 0; i < L; ++i) {
        s.set(f.a.wires[i], (a >> i) & 1u);
        s.set(f.b.wires[i], (b >> i) & 1u);
      }
      const BitVec out = run_state(c, s);
      const auto want = expected(kind, L, e, a, b);
      REQUIRE(f.outputs.size() == want.size());
      for (std::size_t r = 0; r < want.size(); ++r) {
        INFO(function_name(kind), " L=", L, " a=", a, " b=", b, " output ", f.outputs[r].name);
        REQUIRE(read(out, f.outputs[r].wires) == want[r]);
      }
      for (const auto& r : f.preserved) REQUIRE(read(out, r.wires) == read(s, r.wires));
      for (const auto& r : f.restored) REQUIRE(read(out, r.wires) == 0);
    }
  }
}

}  // namespace

TEST_CASE("adder, subtractor and comparator are exact for small widths") {
  for (std::size_t L = 1; L <= 6; ++L) {
    check_exhaustive(FunctionKind::kAdd, L);
    check_exhaustive(FunctionKind::kSub, L);
    check_exhaustive(FunctionKind::kCompare, L);
  }
}

TEST_CASE("multiplier, divider and squares are exact for small widths") {
  for (std::size_t L = 1; L <= 4; ++L) {
    check_exhaustive(FunctionKind::kMul, L);
    check_exhaustive(FunctionKind::kDiv, L);
    check_exhaustive(FunctionKind::kSumOfSquares, L);
  }
}

TEST_CASE("monomial power for several exponents") {
  for (std::size_t e : {2u, 3u, 5u}) {
    for (std::size_t L = 1; L <= 4; ++L) check_exhaustive(FunctionKind::kMonomialPower, L, e);
  }
}

TEST_CASE("library verification agrees with the independent check") {
  for (auto kind : all_functions()) {
    const FunctionSpec spec{kind, 4, 3};
    const auto rep = verify_circuit(build_function_circuit(spec), spec);
    CHECK(rep.ok());
    CHECK(rep.checked == 256);
  }
}

TEST_CASE("verification detects a broken circuit") {
  const FunctionSpec spec{FunctionKind::kAdd, 3, 3};
  Circuit c = build_function_circuit(spec);
  c.push_back(Gate::negation(c.width, function_layout(spec).outputs[0].wires[0]));
  const auto rep = verify_circuit(c, spec);
  CHECK_FALSE(rep.ok());
  CHECK(rep.failures == 64);
  CHECK_FALSE(rep.mismatches.empty());
}

TEST_CASE("verification detects a dirty ancilla") {
  const FunctionSpec spec{FunctionKind::kMul, 2, 3};
  Circuit c = build_function_circuit(spec);
  const FunctionLayout f = function_layout(spec);
  REQUIRE_FALSE(f.restored.empty());
  c.push_back(Gate::cnot(c.width, f.a.wires[0], f.restored[0].wires[0]));
  CHECK_FALSE(verify_circuit(c, spec).ok());
}

TEST_CASE("sampled verification for wide operands") {
  const FunctionSpec spec{FunctionKind::kAdd, 16, 3};
  const auto rep = verify_circuit(build_function_circuit(spec), spec, 500, 3);
  CHECK(rep.ok());
  CHECK(rep.checked == 500);
}

TEST_CASE("function names roundtrip") {
  for (auto kind : all_functions()) CHECK(parse_function(function_name(kind)) == kind);
  CHECK_THROWS_AS(parse_function("pow"), Error);
}

TEST_CASE("boolean lowering realises not, and, or") {
  for (BoolKind kind : {BoolKind::kNot, BoolKind::kAnd, BoolKind::kOr}) {
    for (std::uint64_t a = 0; a < 2; ++a) {
      for (std::uint64_t b = 0; b < 2; ++b) {
        BoolOp op{kind, 0, 1, 2, true};
        Circuit c(3, lower_boolean(3, op));
        const std::uint64_t out = oracle::run(oracle::plain(c), a | (b << 1));
        const bool want = kind == BoolKind::kNot ? !a : kind == BoolKind::kAnd ? (a && b) : (a || b);
        if (kind == BoolKind::kNot) {
          CHECK((out & 1u) == static_cast<std::uint64_t>(want));
        } else {
          CHECK(((out >> 2) & 1u) == static_cast<std::uint64_t>(want));
          CHECK((out & 3u) == (a | (b << 1)));
        }
      }
    }
  }
}

TEST_CASE("multi-controlled gates decompose into Toffolis with clean ancillas") {
  Rng rng(41, "decompose");
  for (std::size_t t = 3; t <= 6; ++t) {
    const std::size_t width = t + 1 + (t - 2);
    std::vector<std::size_t> controls;
    for (std::size_t i = 0; i < t; ++i) controls.push_back(i);
    std::vector<std::size_t> ancillas;
    for (std::size_t i = t + 1; i < width; ++i) ancillas.push_back(i);
    const Gate g = Gate::mcx(width, controls, t, {0, t - 1});
    const auto parts = decompose_multicontrolled(g, ancillas);
    for (const auto& p : parts) CHECK(p.rank() <= 2);
    const Circuit c(width, parts);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << (t + 1)); ++a) {
      REQUIRE(oracle::run(oracle::plain(c), a) == oracle::run({oracle::plain(g)}, a));
    }
  }
}

TEST_CASE("operand width guards") {
  CHECK_THROWS_AS(build_function_circuit({FunctionKind::kAdd, 0, 3}), Error);
  CHECK_THROWS_AS(build_function_circuit({FunctionKind::kMonomialPower, 4, 1}), Error);
}
