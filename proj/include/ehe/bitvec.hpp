#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ehe {

inline constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

/// Fixed-length bit vector, bit i stored in word i/64 at position i%64.
/// Unused high bits of the last word are kept zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : nbits_(nbits), words_(words_for(nbits), 0) {}

  /// Parses "0110..." with character 0 as bit 0.
  static BitVec from_string(std::string_view bits);
  static BitVec from_uint(std::uint64_t value, std::size_t nbits);
  /// Unpacks LSB-first bytes.
  static BitVec from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits);

  std::size_t size() const noexcept { return nbits_; }
  bool empty() const noexcept { return nbits_ == 0; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  std::size_t popcount() const noexcept;
  bool none() const noexcept;

  BitVec slice(std::size_t begin, std::size_t len) const;
  /// Copy with a new length; extra bits are zero.
  BitVec resized(std::size_t nbits) const;
  BitVec concat(const BitVec& tail) const;

  /// Reads up to 64 bits starting at `begin` as a little-endian integer.
  std::uint64_t to_uint(std::size_t begin, std::size_t len) const;
  void set_uint(std::size_t begin, std::size_t len, std::uint64_t value);

  std::string to_string() const;
  std::vector<std::uint8_t> to_bytes() const;

  friend bool operator==(const BitVec& a, const BitVec& b) = default;

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ehe
