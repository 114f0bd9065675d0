#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ehe/anf.hpp"
#include "ehe/gates.hpp"

namespace ehe {

/// Parameters of a message key. `nvars` is the variable count of the public
/// polynomials: either w (default) or k.
struct KeyParams {
  std::size_t k = 0;
  std::size_t w = 0;
  std::size_t nvars = 0;  // 0 means w
  std::size_t d_lo = 2;
  std::size_t d_hi = 0;  // 0 means nvars
  std::vector<std::size_t> block_sizes;  // one entry per noncommuting block
  std::size_t filler_gates = 0;
  std::size_t monomial_budget = 0;  // 0 means 4 * nvars^2
  std::uint64_t seed = 0;
  bool insecure = false;
  unsigned max_retries = 16;
  unsigned jobs = 1;

  /// Defaults satisfying the security criterion: l = 8 blocks of
  /// ceil(k/10) gates, degree in [ceil(k/10), ceil(k/2) - 1].
  static KeyParams secure(std::size_t k, std::size_t w, std::uint64_t seed);
  /// Small-parameter defaults for tests: 2 blocks of 3 gates, degree >= 2.
  static KeyParams testing(std::size_t k, std::size_t w, std::uint64_t seed);

  std::size_t vars() const noexcept { return nvars ? nvars : w; }
  std::size_t degree_cap() const noexcept { return d_hi ? d_hi : vars(); }
  std::size_t budget() const noexcept { return monomial_budget ? monomial_budget : 4 * vars() * vars(); }

  /// Throws a parameter error for inconsistent values, and for values outside
  /// the security conditions unless `insecure` is set.
  void validate() const;
};

/// Nonlinear initial polynomial x_linear + x_a * x_b (0-based wire indices).
struct InitialTerm {
  std::uint32_t linear = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  friend bool operator==(const InitialTerm&, const InitialTerm&) = default;
};

/// Contiguous run of gates inside the mapping that forms one pairwise
/// noncommuting block.
struct BlockSpan {
  std::uint32_t start = 0;
  std::uint32_t length = 0;

  friend bool operator==(const BlockSpan&, const BlockSpan&) = default;
};

/// Initial-set descriptor: entries k..w-1 of the initial polynomial list.
std::vector<InitialTerm> sample_initial_terms(const KeyParams& params, Rng& rng);
/// The ordered initial list: x1..xk followed by the nonlinear terms.
std::vector<Anf> build_initial_set(const KeyParams& params, const std::vector<InitialTerm>& terms);
std::vector<Anf> build_initial_set(const KeyParams& params, Rng& rng);

/// When nvars = w the nonlinear initial polynomials are exactly the
/// polynomials of a commuting Toffoli circuit; this returns that circuit.
Circuit initial_circuit(std::size_t width, const std::vector<InitialTerm>& terms);

struct MappingOptions {
  std::size_t width = 0;
  std::vector<std::size_t> block_sizes;
  std::size_t filler_gates = 0;
  std::size_t monomial_budget = 0;  // 0 disables probing
  RankDistribution filler_ranks = RankDistribution::standard();
  RankDistribution block_polarity = RankDistribution::standard();
  unsigned gate_retries = 32;
};

struct MappingSample {
  Circuit circuit;
  std::vector<BlockSpan> blocks;
  /// `probe` substituted with the sampled circuit (the public polynomials
  /// when `probe` is the initial set).
  std::vector<Anf> polys;
};

/// Samples an encryption mapping: filler gates interleaved with l blocks of
/// pairwise noncommuting gates of rank >= 2. Gates are drawn in reverse
/// execution order while `probe` is kept substituted, so a candidate that
/// pushes a polynomial over the budget is redrawn.
MappingSample sample_encryption_mapping(const MappingOptions& opts, std::vector<Anf> probe, Rng& rng);

/// Targets and required controls of a pairwise noncommuting block, in
/// execution order, before polarity is drawn.
std::vector<Gate> plan_noncommuting_block(std::size_t width, std::size_t h,
                                          const std::vector<std::size_t>& preferred_targets,
                                          Rng& rng);

struct ImePublicKey {
  std::size_t k = 0;
  std::size_t w = 0;
  std::size_t nvars = 0;
  std::size_t degree = 0;
  std::size_t d_lo = 0;
  std::size_t d_hi = 0;
  std::vector<Anf> polys;
};

struct ImePrivateKey {
  std::size_t k = 0;
  std::size_t w = 0;
  std::size_t nvars = 0;
  std::size_t d_lo = 0;
  std::size_t d_hi = 0;
  Circuit mapping;
  std::vector<InitialTerm> initial;
  std::vector<BlockSpan> blocks;

  /// Full state-level encryption circuit (nvars = w only): the mapping
  /// followed by the initial Toffoli circuit.
  Circuit execution_circuit() const;
  /// Public polynomials recomputed from the private key.
  std::vector<Anf> regenerate_public(unsigned jobs = 1) const;
};

struct KeyPair {
  ImePublicKey pub;
  ImePrivateKey priv;
  unsigned attempts = 0;
};

/// Samples a mapping until the public key's degree lies in [d_lo, d_hi].
KeyPair generate_keypair(const KeyParams& params);
/// Builds a key pair from a given mapping (no degree targeting).
KeyPair keypair_from_mapping(const KeyParams& params, const Circuit& mapping,
                             const std::vector<InitialTerm>& initial);

std::size_t max_degree(const std::vector<Anf>& polys);

}  // namespace ehe
