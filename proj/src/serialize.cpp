#include "ehe/serialize.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "ehe/error.hpp"

namespace ehe {

namespace {

constexpr char kMagic[4] = {'E', 'H', 'E', '1'};

class Writer {
 public:
  void u8(std::uint8_t x) { out_.push_back(x); }
  void u16(std::uint16_t x) { put(x, 2); }
  void u32(std::uint64_t x) {
    require(x <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::kParameter, "value does not fit 32 bits");
    put(x, 4);
  }
  void u64(std::uint64_t x) { put(x, 8); }
  void bytes(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void words(std::span<const std::uint64_t> ws) {
    for (auto x : ws) u64(x);
  }
  Bytes& data() { return out_; }

 private:
  void put(std::uint64_t x, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView b) : b_(b) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  ByteView bytes(std::size_t n) {
    need(n);
    ByteView v = b_.subspan(pos_, n);
    pos_ += n;
    return v;
  }
  /// Guards element counts against the bytes actually left.
  std::size_t count(std::size_t min_bytes_each) {
    const std::uint32_t c = u32();
    require(min_bytes_each == 0 || c <= remaining() / min_bytes_each, ErrorCode::kTruncated,
            "element count exceeds the remaining payload");
    return c;
  }
  std::size_t remaining() const { return b_.size() - pos_; }
  void finish() const { require(pos_ == b_.size(), ErrorCode::kCorrupt, "trailing bytes after payload"); }

 private:
  void need(std::size_t n) const { require(n <= b_.size() - pos_, ErrorCode::kTruncated, "unexpected end of data"); }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t x = 0;
    for (int i = 0; i < n; ++i) x |= std::uint64_t{b_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return x;
  }
  ByteView b_;
  std::size_t pos_ = 0;
};

Bytes finish(FileHeader h, Bytes payload) {
  Writer w;
  w.bytes(ByteView(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
  w.u8(static_cast<std::uint8_t>(h.kind));
  w.u16(kFormatVersion);
  w.u32(h.k);
  w.u32(h.w);
  w.u32(h.n);
  w.u32(h.v);
  w.u32(h.e);
  w.u64(payload.size());
  w.bytes(payload);
  return std::move(w.data());
}

std::pair<FileHeader, Reader> open(ByteView bytes, FileKind kind) {
  const FileHeader h = read_header(bytes);
  require(h.kind == kind, ErrorCode::kWrongKind,
          std::string("expected a ") + file_kind_name(kind) + " file, found " + file_kind_name(h.kind));
  return {h, Reader(bytes.subspan(kHeaderSize))};
}

void put_anf(Writer& w, const Anf& p) {
  w.u32(p.size());
  w.words(p.sorted_masks());
}

Anf get_anf(Reader& r, std::size_t nvars) {
  const std::size_t words = words_for(nvars);
  const std::size_t count = r.count(words * 8);
  Anf p(nvars);
  std::vector<std::uint64_t> mask(words);
  const std::uint64_t tail = nvars % 64 ? ~((std::uint64_t{1} << (nvars % 64)) - 1) : 0;
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& x : mask) x = r.u64();
    require(words == 0 || (mask.back() & tail) == 0, ErrorCode::kCorrupt, "monomial uses a variable out of range");
    const std::size_t before = p.size();
    p.toggle(mask);
    require(p.size() == before + 1, ErrorCode::kCorrupt, "duplicate monomial");
  }
  return p;
}

void put_circuit(Writer& w, const Circuit& c) {
  w.u32(c.size());
  for (const auto& g : c.gates) {
    w.u32(g.target);
    w.words(g.controls.words());
    w.words(g.polarity.words());
  }
}

Circuit get_circuit(Reader& r, std::size_t width) {
  const std::size_t words = words_for(width);
  const std::size_t count = r.count(4 + 16 * words);
  Circuit c(width);
  c.gates.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Gate g;
    g.target = r.u32();
    g.controls = BitVec(width);
    g.polarity = BitVec(width);
    for (std::size_t j = 0; j < words; ++j) g.controls.words()[j] = r.u64();
    for (std::size_t j = 0; j < words; ++j) g.polarity.words()[j] = r.u64();
    const std::uint64_t tail = width % 64 ? ~((std::uint64_t{1} << (width % 64)) - 1) : 0;
    require(words == 0 || ((g.controls.words()[words - 1] | g.polarity.words()[words - 1]) & tail) == 0,
            ErrorCode::kCorrupt, "gate mask exceeds the circuit width");
    require(g.well_formed(), ErrorCode::kCorrupt, "malformed gate " + std::to_string(i));
    c.gates.push_back(std::move(g));
  }
  return c;
}

void put_bits(Writer& w, const BitVec& b) { w.bytes(b.to_bytes()); }

BitVec get_bits(Reader& r, std::size_t nbits) {
  const ByteView raw = r.bytes((nbits + 7) / 8);
  const BitVec b = BitVec::from_bytes(raw, nbits);
  require(b.to_bytes() == Bytes(raw.begin(), raw.end()), ErrorCode::kCorrupt, "nonzero padding bits");
  return b;
}

void put_wires(Writer& w, const std::vector<std::size_t>& m) {
  w.u32(m.size());
  for (auto x : m) w.u32(x);
}

std::vector<std::size_t> get_wires(Reader& r, std::size_t limit) {
  const std::size_t count = r.count(4);
  std::vector<std::size_t> m(count);
  for (auto& x : m) {
    x = r.u32();
    require(x < limit, ErrorCode::kCorrupt, "wire index out of range");
  }
  return m;
}

}  // namespace

const char* file_kind_name(FileKind kind) {
  switch (kind) {
    case FileKind::kPublicKey: return "public-key";
    case FileKind::kPrivateKey: return "private-key";
    case FileKind::kCiphertext: return "ciphertext";
    case FileKind::kCircuit: return "circuit";
    case FileKind::kProgram: return "program";
  }
  return "unknown";
}

FileHeader read_header(ByteView bytes) {
  require(bytes.size() >= 4, ErrorCode::kTruncated, "file shorter than the header");
  require(std::equal(bytes.begin(), bytes.begin() + 4, kMagic), ErrorCode::kBadMagic, "bad magic (not an EHE1 file)");
  require(bytes.size() >= kHeaderSize, ErrorCode::kTruncated, "file shorter than the header");
  Reader r(bytes.subspan(4, kHeaderSize - 4));
  FileHeader h;
  const std::uint8_t kind = r.u8();
  h.version = r.u16();
  require(h.version == kFormatVersion, ErrorCode::kBadVersion,
          "unsupported format version " + std::to_string(h.version));
  require(kind >= 1 && kind <= 5, ErrorCode::kWrongKind, "unknown file kind " + std::to_string(kind));
  h.kind = static_cast<FileKind>(kind);
  h.k = r.u32();
  h.w = r.u32();
  h.n = r.u32();
  h.v = r.u32();
  h.e = r.u32();
  h.payload = r.u64();
  require(bytes.size() - kHeaderSize >= h.payload, ErrorCode::kTruncated, "payload is truncated");
  require(bytes.size() - kHeaderSize == h.payload, ErrorCode::kCorrupt, "trailing bytes after payload");
  return h;
}

// ---------------------------------------------------------------------------
// Keys

Bytes serialize(const ImePublicKey& pk) {
  Writer w;
  w.u32(pk.degree);
  w.u32(pk.d_lo);
  w.u32(pk.d_hi);
  w.u32(pk.polys.size());
  for (const auto& p : pk.polys) put_anf(w, p);
  FileHeader h;
  h.kind = FileKind::kPublicKey;
  h.k = static_cast<std::uint32_t>(pk.k);
  h.w = static_cast<std::uint32_t>(pk.w);
  h.v = static_cast<std::uint32_t>(pk.nvars);
  return finish(h, std::move(w.data()));
}

ImePublicKey deserialize_public_key(ByteView bytes) {
  auto [h, r] = open(bytes, FileKind::kPublicKey);
  require(h.w >= h.k && (h.v == h.k || h.v == h.w), ErrorCode::kCorrupt, "inconsistent key dimensions");
  ImePublicKey pk;
  pk.k = h.k;
  pk.w = h.w;
  pk.nvars = h.v;
  pk.degree = r.u32();
  pk.d_lo = r.u32();
  pk.d_hi = r.u32();
  const std::size_t count = r.count(4);
  require(count == pk.w, ErrorCode::kCorrupt, "public key must hold w polynomials");
  for (std::size_t i = 0; i < count; ++i) pk.polys.push_back(get_anf(r, pk.nvars));
  r.finish();
  return pk;
}

Bytes serialize(const ImePrivateKey& sk) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(PrivateKeyType::kMessage));
  w.u32(sk.d_lo);
  w.u32(sk.d_hi);
  w.u32(sk.initial.size());
  for (const auto& t : sk.initial) {
    w.u32(t.linear);
    w.u32(t.a);
    w.u32(t.b);
  }
  w.u32(sk.blocks.size());
  for (const auto& b : sk.blocks) {
    w.u32(b.start);
    w.u32(b.length);
  }
  put_circuit(w, sk.mapping);
  FileHeader h;
  h.kind = FileKind::kPrivateKey;
  h.k = static_cast<std::uint32_t>(sk.k);
  h.w = static_cast<std::uint32_t>(sk.w);
  h.v = static_cast<std::uint32_t>(sk.nvars);
  return finish(h, std::move(w.data()));
}

PrivateKeyType private_key_type(ByteView bytes) {
  auto [h, r] = open(bytes, FileKind::kPrivateKey);
  const std::uint8_t t = r.u8();
  require(t <= 1, ErrorCode::kCorrupt, "unknown private key type");
  return static_cast<PrivateKeyType>(t);
}

ImePrivateKey deserialize_private_key(ByteView bytes) {
  auto [h, r] = open(bytes, FileKind::kPrivateKey);
  require(r.u8() == static_cast<std::uint8_t>(PrivateKeyType::kMessage), ErrorCode::kWrongKind,
          "expected a message private key, found a cryptovaluation key");
  require(h.w >= h.k && (h.v == h.k || h.v == h.w), ErrorCode::kCorrupt, "inconsistent key dimensions");
  ImePrivateKey sk;
  sk.k = h.k;
  sk.w = h.w;
  sk.nvars = h.v;
  sk.d_lo = r.u32();
  sk.d_hi = r.u32();
  const std::size_t terms = r.count(12);
  require(terms == sk.w - sk.k, ErrorCode::kCorrupt, "initial-set descriptor has the wrong length");
  for (std::size_t i = 0; i < terms; ++i) {
    InitialTerm t;
    t.linear = r.u32();
    t.a = r.u32();
    t.b = r.u32();
    require(t.linear < sk.nvars && t.a < sk.k && t.b < sk.k && t.a != t.b, ErrorCode::kCorrupt, "bad initial term");
    sk.initial.push_back(t);
  }
  const std::size_t blocks = r.count(8);
  for (std::size_t i = 0; i < blocks; ++i) {
    BlockSpan b;
    b.start = r.u32();
    b.length = r.u32();
    sk.blocks.push_back(b);
  }
  sk.mapping = get_circuit(r, sk.nvars);
  for (const auto& b : sk.blocks) {
    require(std::size_t{b.start} + b.length <= sk.mapping.size(), ErrorCode::kCorrupt, "block span outside the mapping");
  }
  r.finish();
  return sk;
}

Bytes serialize(const CvKey& key) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(PrivateKeyType::kCryptoval));
  w.u8(static_cast<std::uint8_t>(key.variant));
  w.u64(key.message_key_fingerprint);
  w.u8(static_cast<std::uint8_t>(key.function.kind));
  w.u32(key.function.bits);
  w.u32(key.function.exponent);
  put_wires(w, key.output_map);
  put_circuit(w, key.r_cv);
  FileHeader h;
  h.kind = FileKind::kPrivateKey;
  h.k = static_cast<std::uint32_t>(key.k);
  h.w = static_cast<std::uint32_t>(key.w);
  h.n = static_cast<std::uint32_t>(key.n);
  h.v = static_cast<std::uint32_t>(key.n);
  return finish(h, std::move(w.data()));
}

CvKey deserialize_cv_key(ByteView bytes) {
  auto [h, r] = open(bytes, FileKind::kPrivateKey);
  require(r.u8() == static_cast<std::uint8_t>(PrivateKeyType::kCryptoval), ErrorCode::kWrongKind,
          "expected a cryptovaluation key, found a message private key");
  require(h.n >= h.w && h.w >= h.k, ErrorCode::kCorrupt, "inconsistent key dimensions");
  CvKey key;
  key.k = h.k;
  key.w = h.w;
  key.n = h.n;
  const std::uint8_t variant = r.u8();
  require(variant <= 1, ErrorCode::kCorrupt, "unknown evaluation variant");
  key.variant = static_cast<CvVariant>(variant);
  key.message_key_fingerprint = r.u64();
  const std::uint8_t kind = r.u8();
  require(kind <= static_cast<std::uint8_t>(FunctionKind::kMonomialPower), ErrorCode::kCorrupt, "unknown function");
  key.function.kind = static_cast<FunctionKind>(kind);
  key.function.bits = r.u32();
  key.function.exponent = r.u32();
  key.output_map = get_wires(r, key.n);
  key.r_cv = get_circuit(r, key.n);
  r.finish();
  return key;
}

// ---------------------------------------------------------------------------
// Ciphertexts, circuits, programs

Bytes serialize(const CiphertextStream& ct) {
  Writer w;
  w.u64(ct.message_bits);
  w.u32(ct.blocks.size());
  for (const auto& b : ct.blocks) {
    require(b.size() == ct.w, ErrorCode::kDimension, "ciphertext block has the wrong length");
    put_bits(w, b);
  }
  FileHeader h;
  h.kind = FileKind::kCiphertext;
  h.k = static_cast<std::uint32_t>(ct.k);
  h.w = static_cast<std::uint32_t>(ct.w);
  return finish(h, std::move(w.data()));
}

CiphertextStream deserialize_ciphertext(ByteView bytes) {
  auto [h, r] = open(bytes, FileKind::kCiphertext);
  require(h.k >= 1 && h.w >= h.k, ErrorCode::kCorrupt, "inconsistent ciphertext dimensions");
  CiphertextStream ct;
  ct.k = h.k;
  ct.w = h.w;
  ct.message_bits = r.u64();
  const std::size_t blocks = r.count((ct.w + 7) / 8);
  require(blocks == (ct.message_bits + ct.k - 1) / ct.k, ErrorCode::kCorrupt,
          "block count does not match the message length");
  for (std::size_t i = 0; i < blocks; ++i) ct.blocks.push_back(get_bits(r, ct.w));
  r.finish();
  return ct;
}

Bytes serialize(const Circuit& c) {
  Writer w;
  put_circuit(w, c);
  FileHeader h;
  h.kind = FileKind::kCircuit;
  h.v = static_cast<std::uint32_t>(c.width);
  return finish(h, std::move(w.data()));
}

Circuit deserialize_circuit(ByteView bytes) {
  auto [h, r] = open(bytes, FileKind::kCircuit);
  Circuit c = get_circuit(r, h.v);
  r.finish();
  return c;
}

Bytes serialize(const EncryptedProgram& p) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(p.variant));
  put_wires(w, p.output_map);
  w.u32(p.blindness_class.size());
  w.bytes(ByteView(reinterpret_cast<const std::uint8_t*>(p.blindness_class.data()), p.blindness_class.size()));
  for (const auto& s : p.sections) {
    require(s.size() == p.n, ErrorCode::kDimension, "section does not hold n polynomials");
    for (const auto& poly : s) put_anf(w, poly);
  }
  FileHeader h;
  h.kind = FileKind::kProgram;
  h.k = static_cast<std::uint32_t>(p.k);
  h.w = static_cast<std::uint32_t>(p.w);
  h.n = static_cast<std::uint32_t>(p.n);
  h.v = static_cast<std::uint32_t>(p.n);
  h.e = static_cast<std::uint32_t>(p.sections.size());
  return finish(h, std::move(w.data()));
}

EncryptedProgram deserialize_program(ByteView bytes) {
  auto [h, r] = open(bytes, FileKind::kProgram);
  require(h.n >= h.w && h.w >= h.k && h.v == h.n && h.e >= 1, ErrorCode::kCorrupt, "inconsistent program dimensions");
  EncryptedProgram p;
  p.k = h.k;
  p.w = h.w;
  p.n = h.n;
  const std::uint8_t variant = r.u8();
  require(variant <= 1, ErrorCode::kCorrupt, "unknown evaluation variant");
  p.variant = static_cast<CvVariant>(variant);
  p.output_map = get_wires(r, p.n);
  const std::size_t label = r.count(1);
  const ByteView raw = r.bytes(label);
  p.blindness_class.assign(raw.begin(), raw.end());
  require(h.e <= r.remaining() / (4 * std::max<std::size_t>(p.n, 1)), ErrorCode::kTruncated,
          "section count exceeds the remaining payload");
  p.sections.resize(h.e);
  for (auto& s : p.sections) {
    s.reserve(p.n);
    for (std::size_t i = 0; i < p.n; ++i) s.push_back(get_anf(r, p.n));
  }
  r.finish();
  return p;
}

// ---------------------------------------------------------------------------
// Files

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path + "'");
  Bytes b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(!in.bad(), ErrorCode::kIo, "error reading '" + path + "'");
  return b;
}

void write_file(const std::string& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot create '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::kIo, "error writing '" + path + "'");
}

}  // namespace ehe
