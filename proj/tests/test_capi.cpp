#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ehe/ehe.h"

namespace {

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

struct Keys {
  ehe_public_key* pk = nullptr;
  ehe_private_key* sk = nullptr;
  Keys(uint32_t k, uint32_t w, uint64_t seed) {
    ehe_keygen_params p;
    ehe_keygen_params_init(&p, k, w, seed, 1);
    REQUIRE(ehe_keygen(&p, &pk, &sk) == EHE_OK);
  }
  ~Keys() {
    ehe_public_key_free(pk);
    ehe_private_key_free(sk);
  }
};

}  // namespace

TEST_CASE("message roundtrip through the C interface") {
  Keys keys(16, 20, 3);
  const char* text = "exact homomorphic";
  const auto bits = static_cast<uint64_t>(8 * std::strlen(text));
  ehe_ciphertext* ct = nullptr;
  REQUIRE(ehe_encrypt(keys.pk, reinterpret_cast<const uint8_t*>(text), bits, EHE_PAD_RANDOM, 9, 1, &ct) == EHE_OK);
  ehe_ciphertext_info info;
  REQUIRE(ehe_ciphertext_info_get(ct, &info) == EHE_OK);
  CHECK(info.k == 16);
  CHECK(info.w == 20);
  CHECK(info.message_bits == bits);
  CHECK(info.blocks == (bits + 15) / 16);
  uint64_t got_bits = 0;
  std::vector<uint8_t> out(std::strlen(text));
  REQUIRE(ehe_decrypt(keys.sk, ct, out.data(), out.size(), &got_bits) == EHE_OK);
  CHECK(got_bits == bits);
  CHECK(std::string(out.begin(), out.end()) == text);
  CHECK(ehe_decrypt(keys.sk, ct, out.data(), 1, &got_bits) == EHE_ERR_CONTRACT);
  ehe_ciphertext_free(ct);
}

TEST_CASE("files written by one handle load into another") {
  Keys keys(16, 20, 4);
  const auto pub = temp_path("capi_test.pub");
  const auto priv = temp_path("capi_test.priv");
  REQUIRE(ehe_public_key_save(keys.pk, pub.c_str()) == EHE_OK);
  REQUIRE(ehe_private_key_save(keys.sk, priv.c_str()) == EHE_OK);
  ehe_public_key* pk = nullptr;
  ehe_private_key* sk = nullptr;
  REQUIRE(ehe_public_key_load(pub.c_str(), &pk) == EHE_OK);
  REQUIRE(ehe_private_key_load(priv.c_str(), &sk) == EHE_OK);
  ehe_key_info a;
  ehe_key_info b;
  ehe_public_key_info(keys.pk, &a);
  ehe_public_key_info(pk, &b);
  CHECK(a.total_monomials == b.total_monomials);
  CHECK(a.degree == b.degree);
  CHECK(ehe_private_key_load(pub.c_str(), &sk) == EHE_ERR_FORMAT);
  CHECK(std::string(ehe_last_error()).find("kind") != std::string::npos);
  ehe_public_key_free(pk);
  ehe_private_key_free(sk);
  std::remove(pub.c_str());
  std::remove(priv.c_str());
}

TEST_CASE("status codes") {
  ehe_public_key* pk = nullptr;
  ehe_private_key* sk = nullptr;
  CHECK(ehe_public_key_load(temp_path("capi_missing.pub").c_str(), &pk) == EHE_ERR_USAGE);
  const auto junk = temp_path("capi_junk.pub");
  {
    std::ofstream f(junk, std::ios::binary);
    f << "not a key file at all, definitely not one";
  }
  CHECK(ehe_public_key_load(junk.c_str(), &pk) == EHE_ERR_FORMAT);
  std::remove(junk.c_str());
  ehe_keygen_params p;
  ehe_keygen_params_init(&p, 16, 20, 1, 0);
  CHECK(ehe_keygen(&p, &pk, &sk) == EHE_ERR_CONTRACT);
  CHECK(std::strlen(ehe_last_error()) > 0);
  CHECK(ehe_keygen(nullptr, &pk, &sk) == EHE_ERR_CONTRACT);
  ehe_keygen_params_init(&p, 16, 20, 1, 1);
  p.monomial_budget = 3;
  CHECK(ehe_keygen(&p, &pk, &sk) == EHE_ERR_BUDGET);
  CHECK(ehe_version() != nullptr);
}

TEST_CASE("cryptovaluation through the C interface") {
  Keys keys(8, 12, 5);
  ehe_cv_params p;
  ehe_cv_params_init(&p);
  p.fn = "add";
  p.bits = 4;
  p.n = 20;
  p.sections = 10;
  p.seed = 6;
  ehe_program* prog = nullptr;
  ehe_cv_key* key = nullptr;
  ehe_cv_stats stats;
  REQUIRE(ehe_cv_keygen(keys.sk, &p, &prog, &key, &stats) == EHE_OK);
  CHECK(stats.sections == 10);
  CHECK(stats.total_work > 0);
  CHECK(std::string(ehe_cv_key_output_name(key, 0)) == "sum");
  CHECK(std::string(ehe_cv_key_output_name(key, 1)) == "carry");
  CHECK(ehe_cv_key_output_name(key, 2) == nullptr);
  for (uint64_t a = 0; a < 16; a += 5) {
    for (uint64_t b = 0; b < 16; b += 3) {
      uint8_t msg[1];
      REQUIRE(ehe_cv_pack_operands(8, 4, a, b, msg, 1) == EHE_OK);
      ehe_ciphertext* ct = nullptr;
      REQUIRE(ehe_encrypt(keys.pk, msg, 8, EHE_PAD_ZEROS, 0, 1, &ct) == EHE_OK);
      ehe_ciphertext* res = nullptr;
      REQUIRE(ehe_cv_eval(prog, ct, 1, &res) == EHE_OK);
      uint64_t values[2];
      size_t count = 0;
      REQUIRE(ehe_cv_decrypt(key, res, values, 2, &count) == EHE_OK);
      CHECK(count == 2);
      CHECK(values[0] == (a + b) % 16);
      CHECK(values[1] == (a + b) / 16);
      CHECK(ehe_cv_eval(prog, res, 1, &ct) == EHE_ERR_CONTRACT);
      ehe_ciphertext_free(ct);
      ehe_ciphertext_free(res);
    }
  }
  ehe_program_info info;
  REQUIRE(ehe_program_info_get(prog, &info) == EHE_OK);
  CHECK(info.n == 20);
  CHECK(std::string(info.blindness_class).find("L=4") != std::string::npos);
  ehe_program_free(prog);
  ehe_cv_key_free(key);
}

TEST_CASE("circuits and security through the C interface") {
  ehe_circuit* c = nullptr;
  REQUIRE(ehe_circuit_build("mul", 3, 0, &c) == EHE_OK);
  uint64_t checked = 0;
  uint64_t failures = 1;
  REQUIRE(ehe_circuit_verify(c, "mul", 3, 0, 0, 1, &checked, &failures) == EHE_OK);
  CHECK(checked == 64);
  CHECK(failures == 0);
  ehe_circuit_free(c);
  CHECK(ehe_circuit_build("nope", 3, 0, &c) == EHE_ERR_CONTRACT);
  CHECK(ehe_shell_width(8, 3) >= 66);

  const uint32_t blocks[8] = {13, 13, 13, 13, 13, 13, 13, 13};
  size_t needed = 0;
  REQUIRE(ehe_security_report(128, 160, 13, 0, 2.5, blocks, 8, nullptr, 0, &needed) == EHE_OK);
  std::string text(needed, '\0');
  REQUIRE(ehe_security_report(128, 160, 13, 0, 2.5, blocks, 8, text.data(), text.size(), &needed) == EHE_OK);
  CHECK(text.find("criterion_ok=true") != std::string::npos);
  CHECK(ehe_security_report(128, 160, 13, 0, 1.5, blocks, 8, nullptr, 0, &needed) == EHE_ERR_CONTRACT);
}
