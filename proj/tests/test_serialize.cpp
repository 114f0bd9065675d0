#include <doctest.h>

#include <functional>

#include <cstdio>
#include <filesystem>

#include "ehe/circuits.hpp"
#include "ehe/cryptoval.hpp"
#include "ehe/error.hpp"
#include "ehe/ime.hpp"
#include "ehe/keygen.hpp"
#include "ehe/serialize.hpp"

using namespace ehe;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

const KeyPair& small_key() {
  static const KeyPair kp = generate_keypair(KeyParams::testing(16, 20, 61));
  return kp;
}

}  // namespace

TEST_CASE("public and private keys roundtrip") {
  const auto& kp = small_key();
  const auto pub = deserialize_public_key(serialize(kp.pub));
  CHECK(pub.polys == kp.pub.polys);
  CHECK(pub.k == 16);
  CHECK(pub.w == 20);
  CHECK(pub.degree == kp.pub.degree);
  const auto priv = deserialize_private_key(serialize(kp.priv));
  CHECK(priv.mapping == kp.priv.mapping);
  CHECK(priv.initial == kp.priv.initial);
  CHECK(priv.blocks == kp.priv.blocks);
  CHECK(serialize(priv) == serialize(kp.priv));
  CHECK(private_key_type(serialize(kp.priv)) == PrivateKeyType::kMessage);
}

TEST_CASE("ciphertexts and circuits roundtrip") {
  const auto& kp = small_key();
  BitVec msg(37);
  msg.set(3, true);
  msg.set(36, true);
  const auto ct = encrypt_message(kp.pub, msg, Padding::kRandom, 4);
  CHECK(deserialize_ciphertext(serialize(ct)) == ct);
  const Circuit c = build_function_circuit({FunctionKind::kMul, 4, 3});
  CHECK(deserialize_circuit(serialize(c)) == c);
  const Circuit wide = c.widened(130);
  CHECK(deserialize_circuit(serialize(wide)) == wide);
}

TEST_CASE("programs and result keys roundtrip") {
  CvParams p;
  p.function = {FunctionKind::kAdd, 4, 3};
  p.n = 20;
  p.sections = 3;
  p.seed = 5;
  const auto kp = generate_keypair(KeyParams::testing(8, 12, 62));
  const auto bundle = cv_keygen(kp.priv, p);
  CHECK(deserialize_program(serialize(bundle.program)) == bundle.program);
  CHECK(deserialize_cv_key(serialize(bundle.key)) == bundle.key);
  CHECK(private_key_type(serialize(bundle.key)) == PrivateKeyType::kCryptoval);
}

TEST_CASE("header layout") {
  const Bytes b = serialize(small_key().pub);
  REQUIRE(b.size() > kHeaderSize);
  CHECK(std::string(b.begin(), b.begin() + 4) == "EHE1");
  CHECK(b[4] == 1);
  CHECK(b[5] == 1);
  CHECK(b[6] == 0);
  CHECK(b[7] == 16);
  CHECK(b[11] == 20);
  const FileHeader h = read_header(b);
  CHECK(h.kind == FileKind::kPublicKey);
  CHECK(h.payload == b.size() - kHeaderSize);
}

TEST_CASE("each kind of corruption is a distinct error") {
  const Bytes good = serialize(small_key().pub);
  Bytes magic = good;
  magic[0] ^= 0xff;
  CHECK(code_of([&] { deserialize_public_key(magic); }) == ErrorCode::kBadMagic);
  Bytes version = good;
  version[5] = 9;
  CHECK(code_of([&] { deserialize_public_key(version); }) == ErrorCode::kBadVersion);
  CHECK(code_of([&] { deserialize_private_key(good); }) == ErrorCode::kWrongKind);
  Bytes cut(good.begin(), good.end() - 3);
  CHECK(code_of([&] { deserialize_public_key(cut); }) == ErrorCode::kTruncated);
  Bytes tiny(good.begin(), good.begin() + 10);
  CHECK(code_of([&] { deserialize_public_key(tiny); }) == ErrorCode::kTruncated);
  Bytes extra = good;
  extra.push_back(0);
  CHECK(code_of([&] { deserialize_public_key(extra); }) == ErrorCode::kCorrupt);
}

TEST_CASE("identical seeds give byte-identical key files") {
  const auto a = generate_keypair(KeyParams::testing(16, 20, 63));
  auto p = KeyParams::testing(16, 20, 63);
  p.jobs = 4;
  const auto b = generate_keypair(p);
  CHECK(serialize(a.pub) == serialize(b.pub));
  CHECK(serialize(a.priv) == serialize(b.priv));
}

TEST_CASE("files") {
  const auto path = (std::filesystem::temp_directory_path() / "ehe_serialize_test.bin").string();
  const Bytes b = serialize(small_key().priv);
  write_file(path, b);
  CHECK(read_file(path) == b);
  std::remove(path.c_str());
  CHECK(code_of([&] { read_file(path); }) == ErrorCode::kIo);
}
