#include "ehe/ime.hpp"

#include <string>

#include "ehe/error.hpp"
#include "ehe/parallel.hpp"

namespace ehe {

BitVec make_padding(std::size_t bits, Padding mode, std::uint64_t seed, std::uint64_t block) {
  BitVec r(bits);
  if (mode == Padding::kRandom) {
    Rng rng(seed, "padding", block);
    for (std::size_t i = 0; i < bits; ++i) r.set(i, rng.next() & 1u);
  }
  return r;
}

BitVec encrypt(const ImePublicKey& pk, const BitVec& m, Padding padding, std::uint64_t seed,
               std::uint64_t block, unsigned jobs) {
  require(m.size() == pk.k, ErrorCode::kDimension,
          "plaintext has " + std::to_string(m.size()) + " bits, key expects " + std::to_string(pk.k));
  require(pk.polys.size() == pk.w, ErrorCode::kDimension, "public key must hold w polynomials");
  const BitVec e = pk.nvars == pk.k ? m : m.concat(make_padding(pk.nvars - pk.k, padding, seed, block));
  std::vector<char> bits(pk.w, 0);
  parallel_for(pk.w, jobs, [&](std::size_t j) { bits[j] = pk.polys[j].eval(e) ? 1 : 0; });
  BitVec c(pk.w);
  for (std::size_t j = 0; j < pk.w; ++j) c.set(j, bits[j] != 0);
  return c;
}

Decrypted decrypt(const ImePrivateKey& sk, const BitVec& c) {
  require(c.size() == sk.w, ErrorCode::kDimension,
          "ciphertext has " + std::to_string(c.size()) + " bits, key expects " + std::to_string(sk.w));
  Decrypted out;
  if (sk.nvars == sk.k) {
    out.plaintext = run_state(inverse_circuit(sk.mapping), c.slice(0, sk.k));
    return out;
  }
  const BitVec e = run_state(inverse_circuit(sk.execution_circuit()), c);
  out.plaintext = e.slice(0, sk.k);
  out.padding = e.slice(sk.k, sk.w - sk.k);
  return out;
}

CiphertextStream encrypt_message(const ImePublicKey& pk, const BitVec& message, Padding padding,
                                 std::uint64_t seed, unsigned jobs) {
  CiphertextStream ct;
  ct.k = pk.k;
  ct.w = pk.w;
  ct.message_bits = message.size();
  const std::size_t nblocks = (message.size() + pk.k - 1) / pk.k;
  ct.blocks.resize(nblocks);
  parallel_for(nblocks, jobs, [&](std::size_t b) {
    const std::size_t begin = b * pk.k;
    const std::size_t len = std::min(pk.k, message.size() - begin);
    ct.blocks[b] = encrypt(pk, message.slice(begin, len).resized(pk.k), padding, seed, b);
  });
  return ct;
}

BitVec decrypt_message(const ImePrivateKey& sk, const CiphertextStream& ct, unsigned jobs) {
  require(ct.k == sk.k && ct.w == sk.w, ErrorCode::kDimension, "ciphertext was made for another key shape");
  require(ct.blocks.size() == (ct.message_bits + sk.k - 1) / sk.k, ErrorCode::kCorrupt,
          "block count does not match the message length");
  std::vector<BitVec> plain(ct.blocks.size());
  parallel_for(ct.blocks.size(), jobs, [&](std::size_t b) { plain[b] = decrypt(sk, ct.blocks[b]).plaintext; });
  BitVec m(ct.message_bits);
  for (std::size_t i = 0; i < ct.message_bits; ++i) m.set(i, plain[i / sk.k].get(i % sk.k));
  return m;
}

}  // namespace ehe
