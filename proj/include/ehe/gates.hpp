/**
 * @file gates.hpp
 * @brief Multi-controlled NOT gates, circuits, and their two actions:
 *        on basis states (bit vectors) and on polynomials (variable substitution).
 *
 * Circuits are stored in state-execution order: gates[0] acts on a state
 * first. Substituting a gate into a polynomial p yields q with
 * q(a) = p(gate(a)), so generating the polynomial tuple of a circuit applies
 * the substitutions in reverse execution order.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ehe/anf.hpp"
#include "ehe/bitvec.hpp"
#include "ehe/rng.hpp"

namespace ehe {

/// Flips `target` iff every control wire i satisfies a_i XOR polarity_i = 1.
/// A polarity bit of 1 makes that control fire on 0 ("white dot").
struct Gate {
  std::uint32_t target = 0;
  BitVec controls;
  BitVec polarity;

  static Gate negation(std::size_t width, std::size_t target);
  static Gate cnot(std::size_t width, std::size_t control, std::size_t target, bool white = false);
  static Gate toffoli(std::size_t width, std::size_t c1, std::size_t c2, std::size_t target);
  static Gate mcx(std::size_t width, const std::vector<std::size_t>& controls, std::size_t target,
                  const std::vector<std::size_t>& white_controls = {});

  std::size_t width() const noexcept { return controls.size(); }
  std::size_t rank() const noexcept { return controls.popcount(); }
  bool well_formed() const noexcept;
  /// Same gate over more wires.
  Gate widened(std::size_t width) const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
  std::size_t width = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(std::size_t w) : width(w) {}
  Circuit(std::size_t w, std::vector<Gate> g) : width(w), gates(std::move(g)) {}

  std::size_t size() const noexcept { return gates.size(); }
  void push_back(Gate g);
  void append(const Circuit& other);
  /// Throws a dimension error when any gate is malformed or out of range.
  void validate() const;
  Circuit widened(std::size_t w) const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Work accounting for polynomial generation, counted in monomial operations:
/// one per gate/polynomial pair whose target variable is absent, otherwise
/// every scanned monomial plus every monomial produced.
struct GenerationStats {
  std::uint64_t work = 0;
  std::size_t max_monomials = 0;
  std::size_t max_degree = 0;

  void merge(const GenerationStats& o);
};

void apply_to_state_inplace(const Gate& g, BitVec& a);
BitVec apply_to_state(const Gate& g, const BitVec& a);
BitVec run_state(const Circuit& c, const BitVec& a);

/// In-place substitution x_r <- x_r + prod_{i in controls}(x_i + polarity_i).
void apply_to_poly_inplace(const Gate& g, Anf& p, GenerationStats* stats = nullptr);
Anf apply_to_poly(const Gate& g, const Anf& p);

struct GenerateOptions {
  unsigned jobs = 1;
  /// Largest monomial count allowed in any polynomial; 0 disables the check.
  std::size_t monomial_budget = 0;
};

/// Substitutes the whole circuit into each polynomial of `polys`
/// (reverse execution order). Polynomials are processed independently.
std::vector<Anf> substitute(const Circuit& c, std::vector<Anf> polys,
                            const GenerateOptions& opts = {}, GenerationStats* stats = nullptr);

/// The ANF tuple of the Boolean map computed by `c`: eval at a equals run_state(c, a).
std::vector<Anf> generate_polynomials(const Circuit& c, const GenerateOptions& opts = {},
                                      GenerationStats* stats = nullptr);

std::vector<Anf> identity_polynomials(std::size_t width);

Circuit inverse_circuit(const Circuit& c);

/// Syntactic rule on (target, controls): gates fail to commute iff one's
/// target is a control of the other. Polarity is ignored.
bool commutes(const Gate& g1, const Gate& g2);
/// Exact check: both composition orders generate identical polynomial tuples.
bool commutes_semantically(const Gate& g1, const Gate& g2);

/// Weighted rank choices for random gates; polarity bits are drawn
/// independently per control with `white_probability`, capped at `polarity_cap`.
struct RankDistribution {
  std::vector<std::pair<std::size_t, double>> weights;
  double white_probability = 0.25;
  std::size_t polarity_cap = 4;

  /// 10% rank 0, 10% rank 1, 50% rank 2, 15% rank 3, 15% rank 4.
  static RankDistribution standard();
  static RankDistribution only(std::size_t rank);
};

Gate sample_gate(std::size_t width, const RankDistribution& dist, Rng& rng);
/// Random polarity over the given controls, honouring the distribution's cap.
BitVec sample_polarity(const BitVec& controls, const RankDistribution& dist, Rng& rng);

}  // namespace ehe
