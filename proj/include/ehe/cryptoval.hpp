#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ehe/anf.hpp"
#include "ehe/circuits.hpp"
#include "ehe/gates.hpp"
#include "ehe/keygen.hpp"

namespace ehe {

enum class CvVariant : std::uint8_t { kTwoKey = 0, kSameKey = 1 };

/// inverse(r_en) widened to n, then m, then r_cv (execution order).
/// Same-key requires n = w and r_en = r_cv.
Circuit build_encrypted_action(const Circuit& m, const Circuit& r_en, const Circuit& r_cv, CvVariant variant);

/// Splits u into e contiguous runs S_1..S_e of near-equal length and hides
/// each boundary behind a fresh random circuit R_q:
/// section_1 = S_1 R_1, section_q = inv(R_{q-1}) S_q R_q, section_e = inv(R_{e-1}) S_e.
/// `boundary_gates` = 0 selects ceil(n/4).
std::vector<Circuit> sectionalize(const Circuit& u, std::size_t e, Rng& rng, std::size_t boundary_gates = 0);

struct EncryptedProgram {
  std::size_t n = 0;
  std::size_t w = 0;
  std::size_t k = 0;
  CvVariant variant = CvVariant::kTwoKey;
  std::vector<std::size_t> output_map;
  std::string blindness_class;
  std::vector<std::vector<Anf>> sections;

  friend bool operator==(const EncryptedProgram&, const EncryptedProgram&) = default;
};

struct CvKey {
  CvVariant variant = CvVariant::kTwoKey;
  std::size_t n = 0;
  std::size_t w = 0;
  std::size_t k = 0;
  std::uint64_t message_key_fingerprint = 0;
  FunctionSpec function;
  std::vector<std::size_t> output_map;
  Circuit r_cv;

  friend bool operator==(const CvKey&, const CvKey&) = default;
};

struct ProgramOptions {
  unsigned jobs = 1;
  std::size_t monomial_budget = 0;  // 0 means 4 n^2
};

/// One polynomial set per section. Sections are independent, so they are
/// generated in parallel; the result does not depend on the worker count.
std::vector<std::vector<Anf>> generate_sections(const std::vector<Circuit>& sections,
                                                const ProgramOptions& opts = {},
                                                std::vector<GenerationStats>* stats = nullptr);

/// v_0 = c || 0, v_q[i] = section_q[i](v_{q-1}); returns v_e.
BitVec evaluate_program(const EncryptedProgram& p, const BitVec& c, unsigned jobs = 1);

/// Inverse of r_cv on v, then the output wires.
BitVec decrypt_result(const CvKey& key, const BitVec& v);

std::uint64_t circuit_fingerprint(const Circuit& c);

struct CvParams {
  FunctionSpec function;
  std::size_t n = 0;
  std::size_t sections = 0;  // 0 means ceil(n/2)
  CvVariant variant = CvVariant::kTwoKey;
  std::uint64_t seed = 0;
  bool blind = true;
  std::size_t r_cv_gates = 0;            // filler gates of R_cv; 0 means n
  std::vector<std::size_t> r_cv_blocks;  // default {3, 3}
  std::size_t boundary_gates = 0;        // 0 means ceil(n/4)
  std::size_t monomial_budget = 0;       // 0 means 4 n^2
  unsigned jobs = 1;
};

struct CvBundle {
  EncryptedProgram program;
  CvKey key;
  Circuit action;                  // the unsectioned encrypted action
  std::vector<Circuit> sections;   // section circuits before generation
  std::vector<GenerationStats> stats;
};

/// Builds the function circuit (padded to the blindness shell when n allows),
/// samples R_cv (two-key) or reuses the message key (same-key), composes the
/// encrypted action, sectionalizes it and generates the polynomial sets.
CvBundle cv_keygen(const ImePrivateKey& message_key, const CvParams& params);

/// Shell circuit: m widened to n with identity-acting gate pairs inserted
/// until it has `gates` gates.
Circuit pad_to_shell(const Circuit& m, std::size_t n, std::size_t gates, Rng& rng);
/// Largest gate count over all function kinds at operand width L (the shell
/// adds 3 so every kind can be padded).
std::size_t shell_gate_count(std::size_t bits, std::size_t exponent = 3);

/// Plaintext for a two-operand function: a at bits 0..L-1, b at L..2L-1.
BitVec pack_operands(const FunctionSpec& spec, std::size_t k, std::uint64_t a, std::uint64_t b);
/// Splits decrypted output bits into the function's output registers.
std::vector<std::uint64_t> unpack_result(const FunctionSpec& spec, const BitVec& bits);

}  // namespace ehe
