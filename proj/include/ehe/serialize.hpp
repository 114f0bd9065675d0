#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ehe/cryptoval.hpp"
#include "ehe/ime.hpp"
#include "ehe/keygen.hpp"

namespace ehe {

/// Layout: "EHE1", kind u8, version u16, then k, w, n, v, e as u32 and the
/// payload length as u64. All integers little-endian; 35 bytes in total.
enum class FileKind : std::uint8_t { kPublicKey = 1, kPrivateKey = 2, kCiphertext = 3, kCircuit = 4, kProgram = 5 };

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderSize = 35;

struct FileHeader {
  FileKind kind = FileKind::kPublicKey;
  std::uint16_t version = kFormatVersion;
  std::uint32_t k = 0;
  std::uint32_t w = 0;
  std::uint32_t n = 0;
  std::uint32_t v = 0;
  std::uint32_t e = 0;
  std::uint64_t payload = 0;
};

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Parses and checks magic, version and payload length.
FileHeader read_header(ByteView bytes);
const char* file_kind_name(FileKind kind);

Bytes serialize(const ImePublicKey& pk);
Bytes serialize(const ImePrivateKey& sk);
Bytes serialize(const CvKey& key);
Bytes serialize(const CiphertextStream& ct);
Bytes serialize(const Circuit& c);
Bytes serialize(const EncryptedProgram& p);

ImePublicKey deserialize_public_key(ByteView bytes);
ImePrivateKey deserialize_private_key(ByteView bytes);
CvKey deserialize_cv_key(ByteView bytes);
CiphertextStream deserialize_ciphertext(ByteView bytes);
Circuit deserialize_circuit(ByteView bytes);
EncryptedProgram deserialize_program(ByteView bytes);

/// Private-key files hold either a message key or a cryptovaluation key.
enum class PrivateKeyType : std::uint8_t { kMessage = 0, kCryptoval = 1 };
PrivateKeyType private_key_type(ByteView bytes);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, ByteView bytes);

}  // namespace ehe
