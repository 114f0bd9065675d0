#include <doctest.h>

#include "ehe/error.hpp"
#include "ehe/ime.hpp"
#include "ehe/keygen.hpp"
#include "ehe/rng.hpp"

using namespace ehe;

TEST_CASE("padding modes") {
  const BitVec z = make_padding(9, Padding::kZeros, 4, 0);
  CHECK(z.size() == 9);
  CHECK(z.none());
  const BitVec r1 = make_padding(64, Padding::kRandom, 4, 0);
  const BitVec r2 = make_padding(64, Padding::kRandom, 4, 1);
  CHECK(r1 == make_padding(64, Padding::kRandom, 4, 0));
  CHECK_FALSE(r1 == r2);
}

TEST_CASE("decryption recovers the padding") {
  const auto kp = generate_keypair(KeyParams::testing(16, 20, 31));
  const BitVec m = BitVec::from_uint(0xbeef, 16);
  const BitVec c = encrypt(kp.pub, m, Padding::kRandom, 5, 3);
  const Decrypted d = decrypt(kp.priv, c);
  CHECK(d.plaintext == m);
  CHECK(d.padding == make_padding(4, Padding::kRandom, 5, 3));
  CHECK(decrypt(kp.priv, encrypt(kp.pub, m)).padding.none());
}

TEST_CASE("random padding gives distinct ciphertexts of one message") {
  const auto kp = generate_keypair(KeyParams::testing(16, 24, 32));
  const BitVec m = BitVec::from_uint(0x1234, 16);
  CHECK_FALSE(encrypt(kp.pub, m, Padding::kRandom, 1, 0) == encrypt(kp.pub, m, Padding::kRandom, 2, 0));
}

TEST_CASE("message streams split into blocks and roundtrip") {
  const auto kp = generate_keypair(KeyParams::testing(16, 20, 33));
  Rng rng(33, "stream");
  for (std::size_t bits : {0u, 1u, 15u, 16u, 17u, 100u}) {
    BitVec msg(bits);
    for (std::size_t i = 0; i < bits; ++i) msg.set(i, rng.bernoulli(0.5));
    const auto ct = encrypt_message(kp.pub, msg, Padding::kRandom, 9);
    CHECK(ct.message_bits == bits);
    CHECK(ct.blocks.size() == (bits + 15) / 16);
    CHECK(decrypt_message(kp.priv, ct) == msg);
    CHECK(encrypt_message(kp.pub, msg, Padding::kRandom, 9, 4) == ct);
  }
}

TEST_CASE("dimension errors") {
  const auto kp = generate_keypair(KeyParams::testing(16, 20, 34));
  CHECK_THROWS_AS(encrypt(kp.pub, BitVec(15)), Error);
  CHECK_THROWS_AS(decrypt(kp.priv, BitVec(19)), Error);
  try {
    decrypt(kp.priv, BitVec(21));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimension);
  }
}
