#include "ehe/circuits.hpp"

#include <algorithm>

#include "ehe/error.hpp"
#include "ehe/rng.hpp"

namespace ehe {

namespace {

std::vector<std::size_t> wire_range(std::size_t start, std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = start + i;
  return v;
}

std::vector<std::size_t> sub_range(const std::vector<std::size_t>& v, std::size_t start, std::size_t count) {
  return {v.begin() + static_cast<std::ptrdiff_t>(start),
          v.begin() + static_cast<std::ptrdiff_t>(start + count)};
}

std::uint64_t low_mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

struct Emitter {
  Circuit& c;
  std::vector<std::size_t> extra;
  std::vector<std::size_t> white;

  void gate(std::vector<std::size_t> controls, std::size_t target) {
    controls.insert(controls.end(), extra.begin(), extra.end());
    c.push_back(Gate::mcx(c.width, controls, target, white));
  }
};

void maj(Emitter& e, std::size_t cw, std::size_t tw, std::size_t xw) {
  e.gate({xw}, tw);
  e.gate({xw}, cw);
  e.gate({cw, tw}, xw);
}

void uma(Emitter& e, std::size_t cw, std::size_t tw, std::size_t xw) {
  e.gate({cw, tw}, xw);
  e.gate({xw}, cw);
  e.gate({cw}, tw);
}

void negate_all(Circuit& c, const std::vector<std::size_t>& wires) {
  for (auto w : wires) c.push_back(Gate::negation(c.width, w));
}

void copy_all(Circuit& c, const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
  for (std::size_t i = 0; i < from.size(); ++i) c.push_back(Gate::cnot(c.width, from[i], to[i]));
}

void check_spec(const FunctionSpec& spec) {
  require(spec.bits >= 1 && spec.bits <= kMaxOperandBits, ErrorCode::kParameter,
          "operand width must lie in [1, " + std::to_string(kMaxOperandBits) + "]");
  if (spec.kind == FunctionKind::kMonomialPower) {
    require(spec.exponent >= 2 && spec.exponent <= 16, ErrorCode::kParameter,
            "monomial power exponent must lie in [2, 16]");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Boolean lowering

std::vector<Gate> lower_boolean(std::size_t width, const BoolOp& op) {
  switch (op.kind) {
    case BoolKind::kNot:
      return {Gate::negation(width, op.a)};
    case BoolKind::kAnd:
      return {Gate::toffoli(width, op.a, op.b, op.out)};
    case BoolKind::kOr: {
      std::vector<Gate> g{Gate::negation(width, op.a), Gate::negation(width, op.b),
                          Gate::negation(width, op.out), Gate::toffoli(width, op.a, op.b, op.out)};
      if (op.restore_inputs) {
        g.push_back(Gate::negation(width, op.a));
        g.push_back(Gate::negation(width, op.b));
      }
      return g;
    }
  }
  fail(ErrorCode::kParameter, "unknown boolean operation");
}

// ---------------------------------------------------------------------------
// Names and layouts

const char* function_name(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::kAdd: return "add";
    case FunctionKind::kSub: return "sub";
    case FunctionKind::kMul: return "mul";
    case FunctionKind::kDiv: return "div";
    case FunctionKind::kCompare: return "compare";
    case FunctionKind::kSumOfSquares: return "sum_of_squares";
    case FunctionKind::kMonomialPower: return "monomial_power";
  }
  return "?";
}

FunctionKind parse_function(std::string_view name) {
  for (auto k : all_functions()) {
    if (name == function_name(k)) return k;
  }
  fail(ErrorCode::kParameter, "unknown function '" + std::string(name) + "'");
}

std::vector<FunctionKind> all_functions() {
  return {FunctionKind::kAdd, FunctionKind::kSub, FunctionKind::kMul, FunctionKind::kDiv,
          FunctionKind::kCompare, FunctionKind::kSumOfSquares, FunctionKind::kMonomialPower};
}

std::vector<std::size_t> FunctionLayout::output_map() const {
  std::vector<std::size_t> m;
  for (const auto& r : outputs) m.insert(m.end(), r.wires.begin(), r.wires.end());
  return m;
}

FunctionLayout function_layout(const FunctionSpec& spec) {
  check_spec(spec);
  const std::size_t L = spec.bits;
  FunctionLayout f;
  f.a = {"a", wire_range(0, L)};
  f.b = {"b", wire_range(L, L)};
  switch (spec.kind) {
    case FunctionKind::kAdd:
    case FunctionKind::kSub: {
      f.width = 2 * L + 2;
      const bool add = spec.kind == FunctionKind::kAdd;
      f.outputs = {{add ? "sum" : "difference", f.b.wires}, {add ? "carry" : "borrow", {2 * L + 1}}};
      f.preserved = {f.a};
      f.restored = {{"c0", {2 * L}}};
      break;
    }
    case FunctionKind::kMul:
      f.width = 4 * L + 1;
      f.outputs = {{"product", wire_range(2 * L, 2 * L)}};
      f.preserved = {f.a, f.b};
      f.restored = {{"c0", {4 * L}}};
      break;
    case FunctionKind::kDiv:
      f.width = 4 * L + 1;
      f.outputs = {{"quotient", wire_range(3 * L, L)}, {"remainder", f.a.wires}};
      f.preserved = {f.b};
      f.restored = {{"r", wire_range(2 * L, L)}, {"c0", {4 * L}}};
      break;
    case FunctionKind::kCompare:
      f.width = 2 * L + 3;
      f.outputs = {{"eq", {2 * L + 1}}, {"gt", {2 * L + 2}}};
      f.preserved = {f.a, f.b};
      f.restored = {{"c0", {2 * L}}};
      break;
    case FunctionKind::kSumOfSquares:
      f.width = 8 * L + 2;
      f.outputs = {{"sum", wire_range(4 * L, 2 * L + 1)}};
      f.preserved = {f.a, f.b};
      f.restored = {{"ca", wire_range(2 * L, L)}, {"cb", wire_range(3 * L, L)}, {"c0", {8 * L + 1}}};
      f.garbage = {{"b_squared", wire_range(6 * L + 1, 2 * L)}};
      break;
    case FunctionKind::kMonomialPower: {
      const std::size_t e = spec.exponent;
      f.width = (e + 2) * L + 1;
      f.outputs = {{"power", wire_range((e + 1) * L, L)}};
      f.preserved = {f.a, f.b};
      f.restored = {{"ca", wire_range(2 * L, L)}, {"c0", {(e + 2) * L}}};
      for (std::size_t j = 2; j < e; ++j) {
        f.garbage.push_back({"p" + std::to_string(j), wire_range((j + 1) * L, L)});
      }
      break;
    }
  }
  return f;
}

std::size_t shell_width(std::size_t bits, std::size_t exponent) {
  std::size_t w = 0;
  for (auto k : all_functions()) w = std::max(w, function_layout({k, bits, exponent}).width);
  return w;
}

// ---------------------------------------------------------------------------
// Construction

void append_adder(Circuit& c, const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ts,
                  std::size_t c0, const std::size_t* carry, const std::vector<std::size_t>& controls,
                  const std::vector<std::size_t>& white_controls) {
  const std::size_t m = xs.size();
  require(m >= 1 && ts.size() == m, ErrorCode::kParameter, "adder registers must have equal nonzero length");
  Emitter e{c, controls, white_controls};
  maj(e, c0, ts[0], xs[0]);
  for (std::size_t i = 1; i < m; ++i) maj(e, xs[i - 1], ts[i], xs[i]);
  if (carry) e.gate({xs[m - 1]}, *carry);
  for (std::size_t i = m - 1; i >= 1; --i) uma(e, xs[i - 1], ts[i], xs[i]);
  uma(e, c0, ts[0], xs[0]);
}

Circuit build_function_circuit(const FunctionSpec& spec) {
  const FunctionLayout f = function_layout(spec);
  const std::size_t L = spec.bits;
  const auto& a = f.a.wires;
  const auto& b = f.b.wires;
  Circuit c(f.width);
  switch (spec.kind) {
    case FunctionKind::kAdd: {
      const std::size_t z = 2 * L + 1;
      append_adder(c, a, b, 2 * L, &z);
      break;
    }
    case FunctionKind::kSub: {
      const std::size_t z = 2 * L + 1;
      negate_all(c, a);
      append_adder(c, a, b, 2 * L, &z);
      negate_all(c, b);
      negate_all(c, a);
      break;
    }
    case FunctionKind::kMul: {
      const auto p = wire_range(2 * L, 2 * L);
      for (std::size_t i = 0; i < L; ++i) {
        append_adder(c, b, sub_range(p, i, L), 4 * L, &p[i + L], {a[i]});
      }
      break;
    }
    case FunctionKind::kDiv: {
      // Restoring division on y = a || r: the window y[i..i+L] holds the
      // partial remainder shifted left with the next dividend bit.
      std::vector<std::size_t> y = a;
      const auto r = wire_range(2 * L, L);
      y.insert(y.end(), r.begin(), r.end());
      const auto q = wire_range(3 * L, L);
      const std::size_t c0 = 4 * L;
      for (std::size_t i = L; i-- > 0;) {
        const auto window = sub_range(y, i, L);
        const std::size_t top = y[i + L];
        auto whole = window;
        whole.push_back(top);
        negate_all(c, whole);
        append_adder(c, b, window, c0, &top);
        negate_all(c, whole);
        c.push_back(Gate::cnot(c.width, top, q[i]));
        c.push_back(Gate::negation(c.width, q[i]));
        append_adder(c, b, window, c0, &top, {q[i]}, {q[i]});
      }
      break;
    }
    case FunctionKind::kCompare: {
      const std::size_t c0 = 2 * L;
      const std::size_t eq = 2 * L + 1;
      const std::size_t gt = 2 * L + 2;
      // gt: carry-out of a + ~b.
      negate_all(c, b);
      Circuit chain(c.width);
      Emitter e{chain, {}, {}};
      maj(e, c0, b[0], a[0]);
      for (std::size_t i = 1; i < L; ++i) maj(e, a[i - 1], b[i], a[i]);
      c.append(chain);
      c.push_back(Gate::cnot(c.width, a[L - 1], gt));
      c.append(inverse_circuit(chain));
      negate_all(c, b);
      // eq: a XOR b is all zeros.
      copy_all(c, a, b);
      c.push_back(Gate::mcx(c.width, b, eq, b));
      copy_all(c, a, b);
      break;
    }
    case FunctionKind::kSumOfSquares: {
      const auto ca = wire_range(2 * L, L);
      const auto cb = wire_range(3 * L, L);
      const auto p = wire_range(4 * L, 2 * L + 1);
      const auto q = wire_range(6 * L + 1, 2 * L);
      const std::size_t c0 = 8 * L + 1;
      copy_all(c, a, ca);
      copy_all(c, b, cb);
      for (std::size_t i = 0; i < L; ++i) append_adder(c, a, sub_range(p, i, L), c0, &p[i + L], {ca[i]});
      for (std::size_t i = 0; i < L; ++i) append_adder(c, b, sub_range(q, i, L), c0, &q[i + L], {cb[i]});
      append_adder(c, q, sub_range(p, 0, 2 * L), c0, &p[2 * L]);
      copy_all(c, b, cb);
      copy_all(c, a, ca);
      break;
    }
    case FunctionKind::kMonomialPower: {
      const std::size_t e = spec.exponent;
      const auto ca = wire_range(2 * L, L);
      const std::size_t c0 = (e + 2) * L;
      copy_all(c, a, ca);
      std::vector<std::size_t> prev = a;
      for (std::size_t j = 2; j <= e; ++j) {
        const auto cur = wire_range((j + 1) * L, L);
        // Truncated products: cur += prev << i, controlled on a_i (or its copy
        // when prev is a itself).
        for (std::size_t i = 0; i < L; ++i) {
          const std::size_t ctl = j == 2 ? ca[i] : a[i];
          append_adder(c, sub_range(prev, 0, L - i), sub_range(cur, i, L - i), c0, nullptr, {ctl});
        }
        prev = cur;
      }
      copy_all(c, a, ca);
      break;
    }
  }
  return c;
}

std::vector<std::uint64_t> function_oracle(const FunctionSpec& spec, std::uint64_t a, std::uint64_t b) {
  check_spec(spec);
  const std::size_t L = spec.bits;
  const std::uint64_t m = low_mask(L);
  a &= m;
  b &= m;
  using u128 = unsigned __int128;
  switch (spec.kind) {
    case FunctionKind::kAdd:
      return {(a + b) & m, static_cast<std::uint64_t>((static_cast<u128>(a) + b) >> L)};
    case FunctionKind::kSub:
      return {(a - b) & m, b > a ? 1u : 0u};
    case FunctionKind::kMul:
      require(L <= 32, ErrorCode::kParameter, "oracle limited to 64-bit results");
      return {a * b};
    case FunctionKind::kDiv:
      if (b == 0) return {m, a};
      return {a / b, a % b};
    case FunctionKind::kCompare:
      return {a == b ? 1u : 0u, a > b ? 1u : 0u};
    case FunctionKind::kSumOfSquares:
      require(L <= 31, ErrorCode::kParameter, "oracle limited to 64-bit results");
      return {a * a + b * b};
    case FunctionKind::kMonomialPower: {
      std::uint64_t p = 1;
      for (std::size_t i = 0; i < spec.exponent; ++i) p *= a;
      return {p & m};
    }
  }
  fail(ErrorCode::kParameter, "unknown function");
}

// ---------------------------------------------------------------------------
// Verification

VerifyReport verify_circuit(const Circuit& c, const FunctionSpec& spec, std::uint64_t samples,
                            std::uint64_t seed) {
  const FunctionLayout f = function_layout(spec);
  require(c.width >= f.width, ErrorCode::kDimension, "circuit is narrower than the function layout");
  const std::size_t L = spec.bits;
  VerifyReport rep;
  const bool exhaustive = 2 * L <= 20;
  const std::uint64_t total = exhaustive ? (std::uint64_t{1} << (2 * L)) : (samples ? samples : 1000);
  Rng rng(seed, "verify");

  auto read = [](const BitVec& s, const std::vector<std::size_t>& wires) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < wires.size() && i < 64; ++i) v |= std::uint64_t{s.get(wires[i])} << i;
    return v;
  };
  auto note = [&](const std::string& msg) {
    ++rep.failures;
    if (rep.mismatches.size() < 8) rep.mismatches.push_back(msg);
  };

  // Wires outside every declared register must also come back as 0.
  std::vector<bool> declared(c.width, false);
  auto mark = [&](const Register& r) {
    for (auto w : r.wires) declared[w] = true;
  };
  mark(f.a);
  mark(f.b);
  for (const auto* group : {&f.outputs, &f.restored, &f.garbage}) {
    for (const auto& r : *group) mark(r);
  }

  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t a, b;
    if (exhaustive) {
      a = t & low_mask(L);
      b = t >> L;
    } else {
      a = rng.next() & low_mask(L);
      b = rng.next() & low_mask(L);
    }
    BitVec s(c.width);
    for (std::size_t i = 0; i < L; ++i) {
      s.set(f.a.wires[i], (a >> i) & 1u);
      s.set(f.b.wires[i], (b >> i) & 1u);
    }
    const BitVec out = run_state(c, s);
    ++rep.checked;
    const auto want = function_oracle(spec, a, b);
    const std::string tag = std::string(function_name(spec.kind)) + "(" + std::to_string(a) + ", " +
                            std::to_string(b) + ")";
    for (std::size_t r = 0; r < f.outputs.size(); ++r) {
      const auto got = read(out, f.outputs[r].wires);
      if (got != want[r]) {
        note(tag + ": " + f.outputs[r].name + " = " + std::to_string(got) + ", expected " +
             std::to_string(want[r]));
      }
    }
    for (const auto& r : f.preserved) {
      if (read(out, r.wires) != read(s, r.wires)) note(tag + ": input " + r.name + " changed");
    }
    for (const auto& r : f.restored) {
      if (read(out, r.wires) != 0) note(tag + ": ancilla " + r.name + " not restored");
    }
    for (std::size_t w = 0; w < c.width; ++w) {
      if (!declared[w] && out.get(w)) note(tag + ": spare wire " + std::to_string(w) + " not restored");
    }
  }
  return rep;
}

std::vector<Gate> decompose_multicontrolled(const Gate& g, const std::vector<std::size_t>& ancillas) {
  require(g.well_formed(), ErrorCode::kParameter, "malformed gate");
  const std::size_t t = g.rank();
  if (t <= 2) return {g};
  require(ancillas.size() >= t - 2, ErrorCode::kParameter,
          "rank-" + std::to_string(t) + " gate needs " + std::to_string(t - 2) + " ancillas");
  const std::size_t width = g.width();
  std::vector<std::size_t> ctl, white;
  for (std::size_t i = 0; i < width; ++i) {
    if (g.controls.get(i)) ctl.push_back(i);
    if (g.polarity.get(i)) white.push_back(i);
  }
  for (std::size_t j = 0; j < t - 2; ++j) {
    const std::size_t x = ancillas[j];
    require(x < width && x != g.target && !g.controls.get(x), ErrorCode::kParameter,
            "ancilla overlaps the gate's wires");
    for (std::size_t i = 0; i < j; ++i) require(ancillas[i] != x, ErrorCode::kParameter, "repeated ancilla");
  }
  std::vector<Gate> compute;
  compute.push_back(Gate::toffoli(width, ctl[0], ctl[1], ancillas[0]));
  for (std::size_t j = 1; j + 2 < t; ++j) {
    compute.push_back(Gate::toffoli(width, ctl[j + 1], ancillas[j - 1], ancillas[j]));
  }
  std::vector<Gate> out;
  for (auto w : white) out.push_back(Gate::negation(width, w));
  out.insert(out.end(), compute.begin(), compute.end());
  out.push_back(Gate::toffoli(width, ctl[t - 1], ancillas[t - 3], g.target));
  out.insert(out.end(), compute.rbegin(), compute.rend());
  for (auto w : white) out.push_back(Gate::negation(width, w));
  return out;
}

}  // namespace ehe
