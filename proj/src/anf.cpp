#include "ehe/anf.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>

#include "ehe/error.hpp"

namespace ehe {

bool mask_subset(MaskView a, MaskView b) noexcept {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

bool mask_less(MaskView a, MaskView b) noexcept {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// MonomialSet

std::uint64_t MonomialSet::hash(MaskView mask) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ words_;
  for (auto w : mask) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
  }
  return h | (std::uint64_t{1} << 63);
}

std::size_t MonomialSet::find_slot(MaskView mask, std::uint64_t h) const noexcept {
  const std::size_t cap_mask = hashes_.size() - 1;
  std::size_t slot = h & cap_mask;
  for (;;) {
    const std::uint64_t sh = hashes_[slot];
    if (sh == 0) return slot;
    if (sh == h &&
        std::equal(mask.begin(), mask.end(), keys_.begin() + static_cast<std::ptrdiff_t>(slot * words_))) {
      return slot;
    }
    slot = (slot + 1) & cap_mask;
  }
}

void MonomialSet::rehash(std::size_t capacity) {
  std::vector<std::uint64_t> old_hashes = std::move(hashes_);
  std::vector<std::uint64_t> old_keys = std::move(keys_);
  hashes_.assign(capacity, 0);
  keys_.assign(capacity * words_, 0);
  const std::size_t cap_mask = capacity - 1;
  for (std::size_t s = 0; s < old_hashes.size(); ++s) {
    if (!old_hashes[s]) continue;
    std::size_t slot = old_hashes[s] & cap_mask;
    while (hashes_[slot]) slot = (slot + 1) & cap_mask;
    hashes_[slot] = old_hashes[s];
    std::copy_n(old_keys.begin() + static_cast<std::ptrdiff_t>(s * words_), words_,
                keys_.begin() + static_cast<std::ptrdiff_t>(slot * words_));
  }
}

void MonomialSet::reserve(std::size_t n) {
  std::size_t cap = hashes_.empty() ? 8 : hashes_.size();
  while (n * 8 > cap * 5) cap *= 2;
  if (cap != hashes_.size()) rehash(cap);
}

void MonomialSet::clear() {
  hashes_.clear();
  keys_.clear();
  size_ = 0;
}

void MonomialSet::erase_slot(std::size_t slot) {
  const std::size_t cap_mask = hashes_.size() - 1;
  std::size_t hole = slot;
  std::size_t next = (hole + 1) & cap_mask;
  while (hashes_[next]) {
    const std::size_t home = hashes_[next] & cap_mask;
    // Move `next` back into the hole unless its home lies cyclically in (hole, next].
    if (((next - home) & cap_mask) >= ((next - hole) & cap_mask)) {
      hashes_[hole] = hashes_[next];
      std::copy_n(keys_.begin() + static_cast<std::ptrdiff_t>(next * words_), words_,
                  keys_.begin() + static_cast<std::ptrdiff_t>(hole * words_));
      hole = next;
    }
    next = (next + 1) & cap_mask;
  }
  hashes_[hole] = 0;
  --size_;
}

bool MonomialSet::toggle(MaskView mask) {
  if (hashes_.empty() || (size_ + 1) * 8 > hashes_.size() * 5) {
    rehash(hashes_.empty() ? 8 : hashes_.size() * 2);
  }
  const std::uint64_t h = hash(mask);
  const std::size_t slot = find_slot(mask, h);
  if (hashes_[slot]) {
    erase_slot(slot);
    return false;
  }
  hashes_[slot] = h;
  std::copy(mask.begin(), mask.end(), keys_.begin() + static_cast<std::ptrdiff_t>(slot * words_));
  ++size_;
  return true;
}

bool MonomialSet::contains(MaskView mask) const {
  if (hashes_.empty()) return false;
  return hashes_[find_slot(mask, hash(mask))] != 0;
}

// ---------------------------------------------------------------------------
// Anf

Anf::Anf(std::size_t nvars) : nvars_(nvars), set_(words_for(nvars)), var_count_(nvars, 0) {}

Anf Anf::one(std::size_t nvars) {
  Anf p(nvars);
  std::vector<std::uint64_t> m(p.words(), 0);
  p.toggle(m);
  return p;
}

Anf Anf::variable(std::size_t nvars, std::size_t index) {
  require(index < nvars, ErrorCode::kDimension, "variable index out of range");
  Anf p(nvars);
  p.toggle_monomial({index});
  return p;
}

void Anf::count_vars(MaskView mask, int delta) {
  for (std::size_t w = 0; w < mask.size(); ++w) {
    std::uint64_t bits = mask[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      var_count_[w * 64 + static_cast<std::size_t>(b)] += static_cast<std::uint32_t>(delta);
      bits &= bits - 1;
    }
  }
}

void Anf::toggle(MaskView mask) {
  const bool inserted = set_.toggle(mask);
  count_vars(mask, inserted ? 1 : -1);
}

void Anf::toggle_monomial(std::initializer_list<std::size_t> vars) {
  std::vector<std::uint64_t> m(words(), 0);
  for (auto v : vars) {
    require(v < nvars_, ErrorCode::kDimension, "variable index out of range");
    m[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  toggle(m);
}

Anf& Anf::operator+=(const Anf& other) {
  require(nvars_ == other.nvars_, ErrorCode::kDimension, "polynomial variable counts differ");
  if (&other == this) {
    *this = Anf(nvars_);
    return *this;
  }
  other.for_each([&](MaskView m) { toggle(m); });
  return *this;
}

Anf add(const Anf& p, const Anf& q) { return p + q; }

std::optional<std::size_t> Anf::degree() const {
  if (is_zero()) return std::nullopt;
  std::size_t best = 0;
  for_each([&](MaskView m) {
    std::size_t d = 0;
    for (auto w : m) d += static_cast<std::size_t>(std::popcount(w));
    best = std::max(best, d);
  });
  return best;
}

bool Anf::eval(const BitVec& point) const {
  require(point.size() == nvars_, ErrorCode::kDimension,
          "evaluation point has " + std::to_string(point.size()) + " bits, polynomial has " +
              std::to_string(nvars_) + " variables");
  const MaskView a = point.words();
  bool acc = false;
  for_each([&](MaskView m) { acc ^= mask_subset(m, a); });
  return acc;
}

std::vector<std::uint64_t> Anf::sorted_masks() const {
  const std::size_t w = words();
  std::vector<std::uint64_t> flat;
  flat.reserve(size() * w);
  for_each([&](MaskView m) { flat.insert(flat.end(), m.begin(), m.end()); });
  if (w == 0) return flat;
  std::vector<std::size_t> order(size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mask_less(MaskView(&flat[a * w], w), MaskView(&flat[b * w], w));
  });
  std::vector<std::uint64_t> out(flat.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::copy_n(&flat[order[i] * w], w, &out[i * w]);
  }
  return out;
}

std::string Anf::to_string() const {
  if (is_zero()) return "0";
  const std::size_t w = words();
  const auto masks = sorted_masks();
  std::string s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!s.empty()) s += " + ";
    std::string term;
    for (std::size_t v = 0; v < nvars_; ++v) {
      if ((masks[i * w + (v >> 6)] >> (v & 63)) & 1u) {
        if (!term.empty()) term += '*';
        term += 'x' + std::to_string(v + 1);
      }
    }
    s += term.empty() ? "1" : term;
  }
  return s;
}

Anf Anf::parse(std::size_t nvars, std::string_view text) {
  Anf p(nvars);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  for (;;) {
    skip_ws();
    if (i >= text.size()) break;
    std::vector<std::uint64_t> m(p.words(), 0);
    bool any = false;
    bool zero_term = false;
    for (;;) {
      skip_ws();
      if (i < text.size() && text[i] == 'x') {
        ++i;
        std::size_t v = 0;
        const std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          v = v * 10 + static_cast<std::size_t>(text[i] - '0');
          ++i;
        }
        require(i > start && v >= 1 && v <= nvars, ErrorCode::kParameter,
                "bad variable in polynomial text");
        m[(v - 1) >> 6] |= std::uint64_t{1} << ((v - 1) & 63);
        any = true;
      } else if (i < text.size() && (text[i] == '1' || text[i] == '0')) {
        zero_term = zero_term || text[i] == '0';
        ++i;
        any = true;
      } else {
        break;
      }
      skip_ws();
      if (i < text.size() && text[i] == '*') ++i;
    }
    require(any, ErrorCode::kParameter, "bad term in polynomial text");
    if (!zero_term) p.toggle(m);
    skip_ws();
    if (i >= text.size()) break;
    require(text[i] == '+', ErrorCode::kParameter, "expected '+' in polynomial text");
    ++i;
  }
  return p;
}

bool operator==(const Anf& a, const Anf& b) {
  if (a.nvars_ != b.nvars_ || a.size() != b.size()) return false;
  bool equal = true;
  a.for_each([&](MaskView m) {
    if (equal && !b.contains(m)) equal = false;
  });
  return equal;
}

}  // namespace ehe
