#pragma once

#include <cstdint>
#include <vector>

#include "ehe/anf.hpp"
#include "ehe/gates.hpp"

namespace oracle {

struct PlainGate {
  std::size_t target = 0;
  std::uint64_t controls = 0;
  std::uint64_t white = 0;
};

inline std::uint64_t low_word(const ehe::BitVec& b) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < b.size() && i < 64; ++i) v |= std::uint64_t{b.get(i)} << i;
  return v;
}

inline PlainGate plain(const ehe::Gate& g) { return {g.target, low_word(g.controls), low_word(g.polarity)}; }

inline std::uint64_t run(const std::vector<PlainGate>& gates, std::uint64_t state) {
  for (const auto& g : gates) {
    if (((state ^ g.white) & g.controls) == g.controls) state ^= std::uint64_t{1} << g.target;
  }
  return state;
}

inline std::vector<PlainGate> plain(const ehe::Circuit& c) {
  std::vector<PlainGate> out;
  for (const auto& g : c.gates) out.push_back(plain(g));
  return out;
}

inline bool eval(const ehe::Anf& p, std::uint64_t point) {
  bool v = false;
  p.for_each([&](ehe::MaskView m) {
    if ((m[0] & ~point) == 0) v = !v;
  });
  return v;
}

inline std::vector<std::uint8_t> truth_table(const ehe::Anf& p) {
  std::vector<std::uint8_t> t(std::size_t{1} << p.nvars());
  for (std::uint64_t a = 0; a < t.size(); ++a) t[a] = eval(p, a);
  return t;
}

// Monomial masks of the unique ANF of a truth table, ascending.
inline std::vector<std::uint64_t> mobius(std::vector<std::uint8_t> t) {
  for (std::size_t step = 1; step < t.size(); step <<= 1) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i & step) t[i] ^= t[i ^ step];
    }
  }
  std::vector<std::uint64_t> masks;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i]) masks.push_back(i);
  }
  return masks;
}

inline std::uint64_t state_of(const ehe::BitVec& b) { return low_word(b); }

}  // namespace oracle
