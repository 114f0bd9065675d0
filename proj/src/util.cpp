#include <bit>

#include "ehe/bitvec.hpp"
#include "ehe/error.hpp"
#include "ehe/rng.hpp"

namespace ehe {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kBadVersion: return "version mismatch";
    case ErrorCode::kWrongKind: return "wrong file kind";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kCorrupt: return "corrupt";
    case ErrorCode::kSampling: return "sampling";
    case ErrorCode::kKeygen: return "keygen";
    case ErrorCode::kBudget: return "monomial budget";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return 2;
    case ErrorCode::kBadMagic:
    case ErrorCode::kBadVersion:
    case ErrorCode::kWrongKind:
    case ErrorCode::kTruncated:
    case ErrorCode::kCorrupt: return 3;
    case ErrorCode::kDimension:
    case ErrorCode::kParameter: return 4;
    case ErrorCode::kSampling:
    case ErrorCode::kKeygen:
    case ErrorCode::kBudget: return 5;
  }
  return 1;
}

// ---------------------------------------------------------------------------
// BitVec

BitVec BitVec::from_string(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      fail(ErrorCode::kParameter, "bit string may only contain '0' and '1'");
    }
  }
  return v;
}

BitVec BitVec::from_uint(std::uint64_t value, std::size_t nbits) {
  BitVec v(nbits);
  v.set_uint(0, nbits < 64 ? nbits : 64, value);
  return v;
}

BitVec BitVec::from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits) {
  require(bytes.size() * 8 >= nbits, ErrorCode::kTruncated, "not enough bytes for bit vector");
  BitVec v(nbits);
  for (std::size_t i = 0; i < nbits; ++i) v.set(i, (bytes[i >> 3] >> (i & 7)) & 1u);
  return v;
}

std::size_t BitVec::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVec::none() const noexcept {
  for (auto w : words_) {
    if (w) return false;
  }
  return true;
}

BitVec BitVec::slice(std::size_t begin, std::size_t len) const {
  require(begin + len <= nbits_, ErrorCode::kDimension, "bit slice out of range");
  BitVec out(len);
  for (std::size_t i = 0; i < len; ++i) out.set(i, get(begin + i));
  return out;
}

BitVec BitVec::resized(std::size_t nbits) const {
  BitVec out(nbits);
  const std::size_t n = nbits < nbits_ ? nbits : nbits_;
  for (std::size_t i = 0; i < n; ++i) out.set(i, get(i));
  return out;
}

BitVec BitVec::concat(const BitVec& tail) const {
  BitVec out = resized(nbits_ + tail.nbits_);
  for (std::size_t i = 0; i < tail.nbits_; ++i) out.set(nbits_ + i, tail.get(i));
  return out;
}

std::uint64_t BitVec::to_uint(std::size_t begin, std::size_t len) const {
  require(len <= 64 && begin + len <= nbits_, ErrorCode::kDimension, "to_uint out of range");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len; ++i) v |= static_cast<std::uint64_t>(get(begin + i)) << i;
  return v;
}

void BitVec::set_uint(std::size_t begin, std::size_t len, std::uint64_t value) {
  require(len <= 64 && begin + len <= nbits_, ErrorCode::kDimension, "set_uint out of range");
  for (std::size_t i = 0; i < len; ++i) set(begin + i, (value >> i) & 1u);
}

std::string BitVec::to_string() const {
  std::string s(nbits_, '0');
  for (std::size_t i = 0; i < nbits_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::vector<std::uint8_t> BitVec::to_bytes() const {
  std::vector<std::uint8_t> out((nbits_ + 7) / 8, 0);
  for (std::size_t i = 0; i < nbits_; ++i) {
    if (get(i)) out[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rng

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_id(std::uint64_t parent, std::string_view label, std::uint64_t index) {
  std::uint64_t st = parent ^ fnv1a64(label);
  std::uint64_t a = splitmix64(st);
  st = a ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL);
  return splitmix64(st);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : Rng(seed, "root", 0) {}

Rng::Rng(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  id_ = mix_id(seed ^ (std::uint64_t{kVersion} << 56), label, index);
  std::uint64_t st = id_;
  for (auto& w : s_) w = splitmix64(st);
}

Rng Rng::derive(std::string_view label, std::uint64_t index) const {
  return Rng(id_, label, index);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  require(bound != 0, ErrorCode::kParameter, "uniform bound must be nonzero");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound + 1) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x <= limit) return x % bound;
  }
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace ehe
