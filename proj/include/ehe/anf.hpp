/**
 * @file anf.hpp
 * @brief Multilinear polynomials over GF(2) in algebraic normal form.
 *
 * A monomial is a subset of the variables x1..xv, stored as a little-endian
 * bit mask of ceil(v/64) words (bit 0 = x1); the empty mask is the constant 1.
 * A polynomial is a duplicate-free set of monomials. Because 1 + 1 = 0,
 * inserting a monomial that is already present removes it, which is the only
 * mutation the set supports.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ehe/bitvec.hpp"

namespace ehe {

using MaskView = std::span<const std::uint64_t>;

bool mask_subset(MaskView a, MaskView b) noexcept;  // a ⊆ b
bool mask_less(MaskView a, MaskView b) noexcept;    // lexicographic on words

/// Open-addressing hash set of fixed-width masks with toggle semantics.
/// Linear probing with backward-shift deletion (no tombstones).
class MonomialSet {
 public:
  explicit MonomialSet(std::size_t words = 1) : words_(words) {}

  std::size_t words() const noexcept { return words_; }
  std::size_t size() const noexcept { return size_; }

  /// Inserts `mask` if absent, erases it if present. Returns true on insert.
  bool toggle(MaskView mask);
  bool contains(MaskView mask) const;
  void clear();
  void reserve(std::size_t n);

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t slot = 0; slot < hashes_.size(); ++slot) {
      if (hashes_[slot]) fn(MaskView(&keys_[slot * words_], words_));
    }
  }

 private:
  std::uint64_t hash(MaskView mask) const noexcept;
  std::size_t find_slot(MaskView mask, std::uint64_t h) const noexcept;
  void rehash(std::size_t capacity);
  void erase_slot(std::size_t slot);

  std::size_t words_;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> hashes_;  // 0 = empty slot
  std::vector<std::uint64_t> keys_;
};

class Anf {
 public:
  Anf() : Anf(0) {}
  explicit Anf(std::size_t nvars);

  static Anf zero(std::size_t nvars) { return Anf(nvars); }
  static Anf one(std::size_t nvars);
  /// The variable x_{index+1}.
  static Anf variable(std::size_t nvars, std::size_t index);
  /// Parses "x1*x2 + x3 + 1" (also "x1x2"); variables are 1-based.
  static Anf parse(std::size_t nvars, std::string_view text);

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t words() const noexcept { return set_.words(); }
  std::size_t size() const noexcept { return set_.size(); }
  bool is_zero() const noexcept { return set_.size() == 0; }

  /// Highest monomial degree; empty for the zero polynomial.
  std::optional<std::size_t> degree() const;
  bool contains_var(std::size_t index) const noexcept { return var_count_[index] != 0; }
  /// Number of monomials containing x_{index+1}.
  std::size_t occurrences(std::size_t index) const noexcept { return var_count_[index]; }
  bool contains(MaskView mask) const { return set_.contains(mask); }

  /// Adds one monomial mod 2.
  void toggle(MaskView mask);
  void toggle_monomial(std::initializer_list<std::size_t> vars);
  Anf& operator+=(const Anf& other);
  friend Anf operator+(Anf a, const Anf& b) {
    a += b;
    return a;
  }

  bool eval(const BitVec& point) const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    set_.for_each(std::forward<Fn>(fn));
  }

  /// Monomial masks in canonical (lexicographic word) order, flattened.
  std::vector<std::uint64_t> sorted_masks() const;
  std::string to_string() const;

  friend bool operator==(const Anf& a, const Anf& b);

 private:
  void count_vars(MaskView mask, int delta);

  std::size_t nvars_;
  MonomialSet set_;
  std::vector<std::uint32_t> var_count_;
};

Anf add(const Anf& p, const Anf& q);

}  // namespace ehe
