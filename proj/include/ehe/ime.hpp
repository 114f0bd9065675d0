#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ehe/bitvec.hpp"
#include "ehe/keygen.hpp"

namespace ehe {

enum class Padding { kZeros, kRandom };

/// Fill bits for positions k..v-1. Random padding uses the stream
/// (seed, "padding", block).
BitVec make_padding(std::size_t bits, Padding mode, std::uint64_t seed, std::uint64_t block);

/// Evaluates the public polynomials at m followed by the padding.
BitVec encrypt(const ImePublicKey& pk, const BitVec& m, Padding padding = Padding::kZeros,
               std::uint64_t seed = 0, std::uint64_t block = 0, unsigned jobs = 1);

struct Decrypted {
  BitVec plaintext;
  BitVec padding;
};

/// Runs the inverse encryption circuit on c. Keys with nvars = k invert the
/// mapping on the first k ciphertext bits and return no padding.
Decrypted decrypt(const ImePrivateKey& sk, const BitVec& c);

/// Block mode for messages of any length: k-bit blocks, the last one zero-filled.
struct CiphertextStream {
  std::size_t k = 0;
  std::size_t w = 0;
  std::uint64_t message_bits = 0;
  std::vector<BitVec> blocks;

  friend bool operator==(const CiphertextStream&, const CiphertextStream&) = default;
};

CiphertextStream encrypt_message(const ImePublicKey& pk, const BitVec& message,
                                 Padding padding = Padding::kZeros, std::uint64_t seed = 0,
                                 unsigned jobs = 1);
BitVec decrypt_message(const ImePrivateKey& sk, const CiphertextStream& ct, unsigned jobs = 1);

}  // namespace ehe
