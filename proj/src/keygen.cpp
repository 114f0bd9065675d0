#include "ehe/keygen.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ehe/error.hpp"

namespace ehe {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng.uniform(i);
    std::swap(v[i - 1], v[j]);
  }
}

// Applies g to every polynomial when no result exceeds the budget (0: none)
// and leaves the polynomials unchanged otherwise. Polynomials with the
// largest growth bound go first so an oversized result is found early.
bool try_apply(const Gate& g, std::vector<Anf>& polys, std::size_t budget) {
  if (budget == 0) {
    for (auto& p : polys) apply_to_poly_inplace(g, p);
    return true;
  }
  const std::size_t spread = std::size_t{1} << std::min<std::size_t>(g.polarity.popcount(), 40);
  std::vector<std::pair<std::size_t, std::size_t>> order;
  order.reserve(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const std::size_t occ = polys[i].occurrences(g.target);
    if (occ) order.emplace_back(polys[i].size() + occ * spread, i);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; j < order.size(); ++j) {
    Anf& p = polys[order[j].second];
    apply_to_poly_inplace(g, p);
    if (p.size() > budget) {
      for (std::size_t u = 0; u <= j; ++u) apply_to_poly_inplace(g, polys[order[u].second]);
      return false;
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

KeyParams KeyParams::secure(std::size_t k, std::size_t w, std::uint64_t seed) {
  KeyParams p;
  p.k = k;
  p.w = w;
  p.seed = seed;
  p.block_sizes.assign(8, ceil_div(k, 10));
  p.d_lo = ceil_div(k, 10);
  p.d_hi = k / 2 - (k % 2 == 0 ? 1 : 0);
  p.filler_gates = w;
  return p;
}

KeyParams KeyParams::testing(std::size_t k, std::size_t w, std::uint64_t seed) {
  KeyParams p;
  p.k = k;
  p.w = w;
  p.seed = seed;
  p.insecure = true;
  if (w >= 3) p.block_sizes = {3, 3};
  p.d_lo = w >= 2 ? 2 : 1;
  p.filler_gates = w;
  return p;
}

void KeyParams::validate() const {
  const std::size_t v = vars();
  require(k >= 1, ErrorCode::kParameter, "k must be positive");
  require(w >= k, ErrorCode::kParameter,
          "w < k: the ciphertext must have at least as many bits as the plaintext");
  require(v == k || v == w, ErrorCode::kParameter, "nvars must equal k or w");
  require(w == k || k >= 2, ErrorCode::kParameter,
          "nonlinear initial polynomials need k >= 2");
  require(d_lo <= degree_cap(), ErrorCode::kParameter, "empty degree range");
  require(degree_cap() <= v, ErrorCode::kParameter, "degree range exceeds variable count");
  for (auto h : block_sizes) {
    require(h >= 1 && h <= v, ErrorCode::kParameter,
            "block size " + std::to_string(h) + " must lie in [1, nvars]");
    require(v >= 3, ErrorCode::kParameter, "rank >= 2 blocks need at least 3 wires");
  }
  require(d_lo >= 2, ErrorCode::kParameter, "public key degree must be at least 2");
  if (insecure) return;
  require(k >= 128, ErrorCode::kParameter,
          "secure parameters need k >= 128 (use insecure/test mode for small values)");
  require(w < 2 * k, ErrorCode::kParameter, "secure parameters need k <= w < 2k");
  require(10 * d_lo >= k && 2 * degree_cap() < k, ErrorCode::kParameter,
          "secure parameters need k/10 <= d < k/2");
  require(block_sizes.size() >= 8, ErrorCode::kParameter,
          "secure parameters need at least 8 noncommuting blocks");
  std::size_t total = 0;
  for (auto h : block_sizes) {
    require(10 * h >= k && 2 * h < k, ErrorCode::kParameter,
            "secure parameters need k/10 <= h_i < k/2");
    total += h;
  }
  require(total <= k, ErrorCode::kParameter, "block sizes must sum to at most k");
}

// ---------------------------------------------------------------------------
// Initial set

std::vector<InitialTerm> sample_initial_terms(const KeyParams& params, Rng& rng) {
  std::vector<InitialTerm> terms;
  for (std::size_t j = params.k; j < params.w; ++j) {
    InitialTerm t;
    t.linear = static_cast<std::uint32_t>(params.vars() == params.w ? j : rng.uniform(params.k));
    t.a = static_cast<std::uint32_t>(rng.uniform(params.k));
    do {
      t.b = static_cast<std::uint32_t>(rng.uniform(params.k));
    } while (t.b == t.a);
    terms.push_back(t);
  }
  return terms;
}

std::vector<Anf> build_initial_set(const KeyParams& params, const std::vector<InitialTerm>& terms) {
  const std::size_t v = params.vars();
  require(terms.size() == params.w - params.k, ErrorCode::kParameter,
          "initial-set descriptor has the wrong length");
  std::vector<Anf> set;
  set.reserve(params.w);
  for (std::size_t j = 0; j < params.k; ++j) set.push_back(Anf::variable(v, j));
  for (const auto& t : terms) {
    require(t.linear < v && t.a < v && t.b < v && t.a != t.b, ErrorCode::kParameter,
            "bad initial-set term");
    Anf g = Anf::variable(v, t.linear);
    g.toggle_monomial({t.a, t.b});
    set.push_back(std::move(g));
  }
  return set;
}

std::vector<Anf> build_initial_set(const KeyParams& params, Rng& rng) {
  return build_initial_set(params, sample_initial_terms(params, rng));
}

Circuit initial_circuit(std::size_t width, const std::vector<InitialTerm>& terms) {
  Circuit c(width);
  for (const auto& t : terms) c.push_back(Gate::toffoli(width, t.a, t.b, t.linear));
  return c;
}

// ---------------------------------------------------------------------------
// Mapping sampler

std::vector<Gate> plan_noncommuting_block(std::size_t width, std::size_t h,
                                          const std::vector<std::size_t>& preferred_targets,
                                          Rng& rng) {
  require(h >= 1 && h <= width, ErrorCode::kParameter, "block size out of range");
  require(width >= 3, ErrorCode::kParameter, "rank >= 2 blocks need at least 3 wires");

  std::vector<std::size_t> first = preferred_targets;
  shuffle(first, rng);
  std::vector<bool> taken(width, false);
  std::vector<std::size_t> targets;
  for (auto t : first) {
    if (targets.size() == h) break;
    if (t < width && !taken[t]) {
      taken[t] = true;
      targets.push_back(t);
    }
  }
  if (targets.size() < h) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < width; ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    shuffle(rest, rng);
    for (std::size_t i = 0; targets.size() < h; ++i) targets.push_back(rest[i]);
  }

  // Rotational tournament over the block targets: position p controls on the
  // targets of the next floor((h-1)/2) positions, so every pair has an edge.
  std::vector<std::vector<std::size_t>> controls(h);
  const std::size_t reach = (h - 1) / 2;
  for (std::size_t p = 0; p < h; ++p) {
    for (std::size_t d = 1; d <= reach; ++d) controls[p].push_back(targets[(p + d) % h]);
    if (h % 2 == 0 && p < h / 2) controls[p].push_back(targets[p + h / 2]);
  }
  std::vector<Gate> gates;
  gates.reserve(h);
  for (std::size_t p = 0; p < h; ++p) {
    auto& ctl = controls[p];
    while (ctl.size() < 2) {
      const std::size_t c = rng.uniform(width);
      if (c != targets[p] && std::find(ctl.begin(), ctl.end(), c) == ctl.end()) ctl.push_back(c);
    }
    gates.push_back(Gate::mcx(width, ctl, targets[p]));
  }
  std::vector<std::size_t> order(h);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::vector<Gate> ordered;
  ordered.reserve(h);
  for (auto i : order) ordered.push_back(gates[i]);
  return ordered;
}

MappingSample sample_encryption_mapping(const MappingOptions& opts, std::vector<Anf> probe, Rng& rng) {
  const std::size_t width = opts.width;
  require(width >= 1, ErrorCode::kParameter, "mapping width must be positive");
  for (const auto& p : probe) {
    require(p.nvars() == width, ErrorCode::kDimension, "probe polynomial width mismatch");
  }

  // Execution-order slots: gap_0, block_1, gap_1, ..., block_l, gap_l.
  struct Slot {
    int block;  // -1 for filler
    std::size_t index;
  };
  const std::size_t l = opts.block_sizes.size();
  std::vector<Slot> slots;
  const std::size_t gaps = l + 1;
  for (std::size_t gap = 0; gap < gaps; ++gap) {
    const std::size_t n = opts.filler_gates / gaps + (gap < opts.filler_gates % gaps ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) slots.push_back({-1, 0});
    if (gap < l) {
      for (std::size_t i = 0; i < opts.block_sizes[gap]; ++i) slots.push_back({static_cast<int>(gap), i});
    }
  }

  // Blocks are planned when the sampler reaches them. Targets prefer wires no
  // other block has targeted, then wires occurring in few probe monomials.
  std::vector<std::vector<Gate>> blocks(l);
  std::vector<bool> used(width, false);
  auto plan_block = [&](std::size_t b) {
    Rng brng = rng.derive("block", b);
    std::vector<std::size_t> load(width, 0);
    for (const auto& p : probe) {
      for (std::size_t i = 0; i < width; ++i) load[i] += p.occurrences(i);
    }
    std::vector<std::size_t> order(width);
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, brng);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
      if (used[a] != used[c]) return !used[a];
      return load[a] < load[c];
    });
    order.resize(std::min(width, opts.block_sizes[b]));
    blocks[b] = plan_noncommuting_block(width, opts.block_sizes[b], order, brng);
    for (const auto& g : blocks[b]) used[g.target] = true;
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      for (std::size_t j = i + 1; j < blocks[b].size(); ++j) {
        require(!commutes(blocks[b][i], blocks[b][j]), ErrorCode::kSampling,
                "block " + std::to_string(b) + " is not pairwise noncommuting");
      }
    }
  };

  const std::size_t budget = opts.monomial_budget;
  std::vector<Gate> reversed;
  reversed.reserve(slots.size());
  std::vector<std::vector<Gate>> settled(l);
  for (std::size_t s = slots.size(); s-- > 0;) {
    const Slot& slot = slots[s];
    if (slot.block >= 0 && blocks[static_cast<std::size_t>(slot.block)].empty()) {
      plan_block(static_cast<std::size_t>(slot.block));
    }
    Rng grng = rng.derive(slot.block < 0 ? "filler" : "block-gate", s);
    bool placed = false;
    for (unsigned attempt = 0; attempt <= opts.gate_retries && !placed; ++attempt) {
      Gate g;
      if (slot.block < 0) {
        g = sample_gate(width, opts.filler_ranks, grng);
      } else {
        g = blocks[static_cast<std::size_t>(slot.block)][slot.index];
        // Last attempt falls back to all-black controls, the smallest expansion.
        if (attempt < opts.gate_retries) g.polarity = sample_polarity(g.controls, opts.block_polarity, grng);
        // Shared controls keep the polarity already settled in the block.
        for (const auto& other : settled[static_cast<std::size_t>(slot.block)]) {
          for (std::size_t c = 0; c < width; ++c) {
            if (g.controls.get(c) && other.controls.get(c)) g.polarity.set(c, other.polarity.get(c));
          }
        }
      }
      if (!try_apply(g, probe, budget)) continue;
      if (slot.block >= 0) settled[static_cast<std::size_t>(slot.block)].push_back(g);
      reversed.push_back(std::move(g));
      placed = true;
    }
    if (!placed) {
      fail(ErrorCode::kSampling,
           std::string("monomial budget ") + std::to_string(budget) + " exceeded by every candidate " +
               (slot.block < 0 ? "filler gate" : "block gate") + " at position " + std::to_string(s));
    }
  }

  MappingSample out;
  out.circuit = Circuit(width, std::vector<Gate>(reversed.rbegin(), reversed.rend()));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s].block >= 0 && slots[s].index == 0) {
      out.blocks.push_back({static_cast<std::uint32_t>(s),
                            static_cast<std::uint32_t>(opts.block_sizes[static_cast<std::size_t>(slots[s].block)])});
    }
  }
  out.polys = std::move(probe);
  return out;
}

// ---------------------------------------------------------------------------
// Keys

Circuit ImePrivateKey::execution_circuit() const {
  require(nvars == w, ErrorCode::kParameter,
          "state-level encryption circuit exists only for keys with nvars = w");
  Circuit c = mapping;
  c.append(initial_circuit(w, initial));
  return c;
}

std::vector<Anf> ImePrivateKey::regenerate_public(unsigned jobs) const {
  KeyParams p;
  p.k = k;
  p.w = w;
  p.nvars = nvars;
  GenerateOptions opts;
  opts.jobs = jobs;
  return substitute(mapping, build_initial_set(p, initial), opts);
}

std::size_t max_degree(const std::vector<Anf>& polys) {
  std::size_t d = 0;
  for (const auto& p : polys) d = std::max(d, p.degree().value_or(0));
  return d;
}

namespace {

KeyPair assemble(const KeyParams& params, Circuit mapping, std::vector<InitialTerm> initial,
                 std::vector<BlockSpan> blocks, std::vector<Anf> polys) {
  KeyPair kp;
  kp.pub.k = kp.priv.k = params.k;
  kp.pub.w = kp.priv.w = params.w;
  kp.pub.nvars = kp.priv.nvars = params.vars();
  kp.pub.d_lo = kp.priv.d_lo = params.d_lo;
  kp.pub.d_hi = kp.priv.d_hi = params.degree_cap();
  kp.pub.degree = max_degree(polys);
  kp.pub.polys = std::move(polys);
  kp.priv.mapping = std::move(mapping);
  kp.priv.initial = std::move(initial);
  kp.priv.blocks = std::move(blocks);
  return kp;
}

}  // namespace

KeyPair keypair_from_mapping(const KeyParams& params, const Circuit& mapping,
                             const std::vector<InitialTerm>& initial) {
  require(mapping.width == params.vars(), ErrorCode::kDimension, "mapping width must equal nvars");
  GenerateOptions opts;
  opts.jobs = params.jobs;
  auto polys = substitute(mapping, build_initial_set(params, initial), opts);
  return assemble(params, mapping, initial, {}, std::move(polys));
}

KeyPair generate_keypair(const KeyParams& params) {
  params.validate();
  const std::size_t v = params.vars();
  const Rng root(params.seed, "ime-keygen");
  Rng init_rng = root.derive("initial");
  auto terms = sample_initial_terms(params, init_rng);
  const auto initial = build_initial_set(params, terms);

  MappingOptions opts;
  opts.width = v;
  opts.block_sizes = params.block_sizes;
  opts.filler_gates = params.filler_gates;
  opts.monomial_budget = params.budget();

  std::string last;
  for (unsigned attempt = 0; attempt < params.max_retries; ++attempt) {
    Rng rng = root.derive("mapping", attempt);
    MappingSample sample;
    try {
      sample = sample_encryption_mapping(opts, initial, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSampling) throw;
      last = e.what();
      continue;
    }
    const std::size_t d = max_degree(sample.polys);
    if (d < params.d_lo || d > params.degree_cap()) {
      last = "measured degree " + std::to_string(d) + " outside [" + std::to_string(params.d_lo) +
             ", " + std::to_string(params.degree_cap()) + "]";
      continue;
    }
    KeyPair kp = assemble(params, std::move(sample.circuit), terms, std::move(sample.blocks),
                          std::move(sample.polys));
    kp.attempts = attempt + 1;
    return kp;
  }
  fail(ErrorCode::kKeygen, "key generation failed after " + std::to_string(params.max_retries) +
                               " attempts; last: " + last);
}

}  // namespace ehe
