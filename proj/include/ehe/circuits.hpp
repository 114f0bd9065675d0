#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ehe/gates.hpp"

namespace ehe {

// ---------------------------------------------------------------------------
// Boolean lowering

enum class BoolKind { kNot, kAnd, kOr };

struct BoolOp {
  BoolKind kind = BoolKind::kNot;
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t out = 0;  // ancilla for AND/OR, expected to start at 0
  bool restore_inputs = false;
};

/// NOT -> [N_a]; AND -> [T^{ab}_out]; OR -> [N_a, N_b, N_out, T^{ab}_out]
/// (inputs left complemented unless restore_inputs appends [N_a, N_b]).
std::vector<Gate> lower_boolean(std::size_t width, const BoolOp& op);

// ---------------------------------------------------------------------------
// Arithmetic circuits

enum class FunctionKind { kAdd, kSub, kMul, kDiv, kCompare, kSumOfSquares, kMonomialPower };

const char* function_name(FunctionKind kind);
FunctionKind parse_function(std::string_view name);
std::vector<FunctionKind> all_functions();

inline constexpr std::size_t kMaxOperandBits = 64;

struct FunctionSpec {
  FunctionKind kind = FunctionKind::kAdd;
  std::size_t bits = 1;      // operand width L
  std::size_t exponent = 3;  // monomial_power only

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

struct Register {
  std::string name;
  std::vector<std::size_t> wires;  // least significant first
};

/// Operands a (wires 0..L-1) and b (L..2L-1) always come first. Every other
/// wire starts at 0 and is either an output, restored to 0, or garbage.
struct FunctionLayout {
  std::size_t width = 0;
  Register a;
  Register b;
  std::vector<Register> outputs;
  std::vector<Register> preserved;  // input registers left unchanged
  std::vector<Register> restored;   // ancillas returned to 0
  std::vector<Register> garbage;

  /// Output wires concatenated in register order.
  std::vector<std::size_t> output_map() const;
};

FunctionLayout function_layout(const FunctionSpec& spec);
/// Width shared by every function kind at operand width L (blindness shell).
std::size_t shell_width(std::size_t bits, std::size_t exponent = 3);

/// Circuit on exactly function_layout(spec).width wires.
Circuit build_function_circuit(const FunctionSpec& spec);

/// Integer oracle: expected value of each output register for operands a, b.
std::vector<std::uint64_t> function_oracle(const FunctionSpec& spec, std::uint64_t a, std::uint64_t b);

/// Adds x (wires xs) into t (wires ts, same length) with Cuccaro's ripple-carry
/// adder. c0 is a zero ancilla; carry (if any) receives the carry-out by XOR.
/// Every gate also gets the extra `controls`.
void append_adder(Circuit& c, const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ts,
                  std::size_t c0, const std::size_t* carry, const std::vector<std::size_t>& controls = {},
                  const std::vector<std::size_t>& white_controls = {});

struct VerifyReport {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> mismatches;  // first few, human readable

  bool ok() const noexcept { return failures == 0 && checked > 0; }
};

/// Runs c against the integer oracle: exhaustively when 2L <= 20 (or when
/// samples is 0), otherwise on `samples` random operand pairs. Also checks
/// preserved inputs and restored ancillas.
VerifyReport verify_circuit(const Circuit& c, const FunctionSpec& spec, std::uint64_t samples = 0,
                            std::uint64_t seed = 0);

/// V-chain decomposition into gates of rank <= 2 using rank-2 ancillas
/// (zero on entry, restored). White controls are sandwiched by negations.
std::vector<Gate> decompose_multicontrolled(const Gate& g, const std::vector<std::size_t>& ancillas);

}  // namespace ehe
