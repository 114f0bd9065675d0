#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace ehe {

/**
 * Deterministic random stream ("ehe-rng v1").
 *
 * Generator: xoshiro256** seeded through SplitMix64. A stream is identified by
 * (seed, label, index); derive() produces an independent child stream so work
 * split across threads draws exactly the same numbers as a sequential run.
 * Bounded draws use rejection sampling on 64-bit outputs, so results do not
 * depend on any standard-library distribution implementation.
 */
class Rng {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

  Rng derive(std::string_view label, std::uint64_t index = 0) const;

  std::uint64_t next();
  /// Uniform in [0, bound); bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double unit();
  bool bernoulli(double p) { return unit() < p; }

  std::uint64_t id() const noexcept { return id_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t id_ = 0;
};

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace ehe
