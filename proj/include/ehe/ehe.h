/*
 * C interface to the EHE library. Every object is an opaque handle released
 * with its *_free function. Functions return an ehe_status; on failure
 * ehe_last_error() describes the problem (per thread, until the next call).
 * Bit strings are packed LSB-first: bit i lives in byte i/8 at position i%8.
 */
#ifndef EHE_EHE_H
#define EHE_EHE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EHE_API __declspec(dllexport)
#else
#define EHE_API __attribute__((visibility("default")))
#endif

typedef enum ehe_status {
  EHE_OK = 0,
  EHE_ERR_USAGE = 2,    /* bad argument, missing file, I/O */
  EHE_ERR_FORMAT = 3,   /* bad magic, version, kind, truncation, corruption */
  EHE_ERR_CONTRACT = 4, /* dimension mismatch or parameter guard */
  EHE_ERR_BUDGET = 5    /* monomial budget, key generation or sampling failure */
} ehe_status;

typedef struct ehe_public_key ehe_public_key;
typedef struct ehe_private_key ehe_private_key;
typedef struct ehe_ciphertext ehe_ciphertext;
typedef struct ehe_circuit ehe_circuit;
typedef struct ehe_program ehe_program;
typedef struct ehe_cv_key ehe_cv_key;

EHE_API const char* ehe_last_error(void);
EHE_API const char* ehe_version(void);

/* ---- message keys ---- */

typedef struct ehe_keygen_params {
  uint32_t k;
  uint32_t w;
  uint32_t nvars;           /* 0: w */
  uint32_t d_lo;            /* 0: preset */
  uint32_t d_hi;            /* 0: preset */
  uint32_t blocks;          /* 0: preset */
  uint32_t block_size;      /* 0: preset */
  uint32_t filler_gates;    /* 0: preset */
  uint64_t monomial_budget; /* 0: 4 nvars^2 */
  uint64_t seed;
  int insecure;             /* nonzero: small test parameters are allowed */
  uint32_t jobs;            /* 0: all cores */
} ehe_keygen_params;

/* Fills the preset for (k, w): secure defaults, or test defaults when insecure. */
EHE_API void ehe_keygen_params_init(ehe_keygen_params* p, uint32_t k, uint32_t w, uint64_t seed, int insecure);
EHE_API ehe_status ehe_keygen(const ehe_keygen_params* p, ehe_public_key** pk, ehe_private_key** sk);

typedef struct ehe_key_info {
  uint32_t k;
  uint32_t w;
  uint32_t nvars;
  uint32_t degree;      /* public keys only */
  uint64_t max_monomials;
  uint64_t total_monomials;
  uint32_t gates;       /* private keys only */
  uint32_t blocks;
} ehe_key_info;

EHE_API ehe_status ehe_public_key_info(const ehe_public_key* pk, ehe_key_info* info);
EHE_API ehe_status ehe_private_key_info(const ehe_private_key* sk, ehe_key_info* info);
EHE_API ehe_status ehe_public_key_save(const ehe_public_key* pk, const char* path);
EHE_API ehe_status ehe_public_key_load(const char* path, ehe_public_key** pk);
EHE_API ehe_status ehe_private_key_save(const ehe_private_key* sk, const char* path);
EHE_API ehe_status ehe_private_key_load(const char* path, ehe_private_key** sk);
EHE_API void ehe_public_key_free(ehe_public_key* pk);
EHE_API void ehe_private_key_free(ehe_private_key* sk);

/* Measured pairwise-noncommuting block sizes of a private key. `exact` is 0
 * for blocks too large for exact search. Pass cap = 0 to query `count`. */
EHE_API ehe_status ehe_private_key_blocks(const ehe_private_key* sk, uint32_t* greedy, uint32_t* exact, size_t cap,
                                          size_t* count);

/* ---- message encryption ---- */

typedef enum ehe_padding { EHE_PAD_ZEROS = 0, EHE_PAD_RANDOM = 1 } ehe_padding;

/* Encrypts `bits` message bits in k-bit blocks. */
EHE_API ehe_status ehe_encrypt(const ehe_public_key* pk, const uint8_t* msg, uint64_t bits, ehe_padding padding,
                               uint64_t seed, uint32_t jobs, ehe_ciphertext** ct);
/* Writes the message into `out` (cap bytes); `bits` receives its length.
 * With out = NULL only the length is reported. */
EHE_API ehe_status ehe_decrypt(const ehe_private_key* sk, const ehe_ciphertext* ct, uint8_t* out, size_t cap,
                               uint64_t* bits);

typedef struct ehe_ciphertext_info {
  uint32_t k;
  uint32_t w;
  uint64_t message_bits;
  uint64_t blocks;
} ehe_ciphertext_info;

EHE_API ehe_status ehe_ciphertext_info_get(const ehe_ciphertext* ct, ehe_ciphertext_info* info);
/* Raw bits of one block (w bits). */
EHE_API ehe_status ehe_ciphertext_block(const ehe_ciphertext* ct, uint64_t block, uint8_t* out, size_t cap);
EHE_API ehe_status ehe_ciphertext_save(const ehe_ciphertext* ct, const char* path);
EHE_API ehe_status ehe_ciphertext_load(const char* path, ehe_ciphertext** ct);
EHE_API void ehe_ciphertext_free(ehe_ciphertext* ct);

/* ---- arithmetic circuits ---- */

/* fn: add, sub, mul, div, compare, sum_of_squares, monomial_power. */
EHE_API ehe_status ehe_circuit_build(const char* fn, uint32_t bits, uint32_t exponent, ehe_circuit** c);
EHE_API ehe_status ehe_circuit_info(const ehe_circuit* c, uint32_t* width, uint64_t* gates);
/* samples = 0: exhaustive when 2L <= 20, else 1000 random pairs. */
EHE_API ehe_status ehe_circuit_verify(const ehe_circuit* c, const char* fn, uint32_t bits, uint32_t exponent,
                                      uint64_t samples, uint64_t seed, uint64_t* checked, uint64_t* failures);
EHE_API ehe_status ehe_circuit_save(const ehe_circuit* c, const char* path);
EHE_API ehe_status ehe_circuit_load(const char* path, ehe_circuit** c);
EHE_API void ehe_circuit_free(ehe_circuit* c);
/* Width shared by all functions at operand width L. */
EHE_API uint32_t ehe_shell_width(uint32_t bits, uint32_t exponent);

/* ---- cryptovaluation ---- */

typedef enum ehe_cv_variant { EHE_CV_TWO_KEY = 0, EHE_CV_SAME_KEY = 1 } ehe_cv_variant;

typedef struct ehe_cv_params {
  const char* fn;
  uint32_t bits;
  uint32_t exponent;         /* monomial_power; 0: 3 */
  uint32_t n;
  uint32_t sections;         /* 0: ceil(n/2) */
  ehe_cv_variant variant;
  uint64_t seed;
  int blind;                 /* pad to the uniform shell when n allows */
  uint32_t r_cv_gates;       /* 0: n */
  uint32_t boundary_gates;   /* 0: ceil(n/4) */
  uint64_t monomial_budget;  /* 0: 4 n^2 */
  uint32_t jobs;
} ehe_cv_params;

typedef struct ehe_cv_stats {
  uint64_t total_work;       /* monomial operations over all sections */
  uint64_t max_monomials;
  uint64_t action_gates;
  uint32_t sections;
} ehe_cv_stats;

EHE_API void ehe_cv_params_init(ehe_cv_params* p);
EHE_API ehe_status ehe_cv_keygen(const ehe_private_key* message_key, const ehe_cv_params* p, ehe_program** program,
                                 ehe_cv_key** key, ehe_cv_stats* stats);
/* Evaluates a single-block ciphertext; the result is an n-bit ciphertext. */
EHE_API ehe_status ehe_cv_eval(const ehe_program* program, const ehe_ciphertext* ct, uint32_t jobs,
                               ehe_ciphertext** result);
/* Decrypts a result into the function's output registers. */
EHE_API ehe_status ehe_cv_decrypt(const ehe_cv_key* key, const ehe_ciphertext* result, uint64_t* values, size_t cap,
                                  size_t* count);
EHE_API const char* ehe_cv_key_output_name(const ehe_cv_key* key, size_t index);
/* Packs a and b into a k-bit plaintext for the key's function. */
EHE_API ehe_status ehe_cv_pack_operands(uint32_t k, uint32_t bits, uint64_t a, uint64_t b, uint8_t* out, size_t cap);

typedef struct ehe_program_info {
  uint32_t k;
  uint32_t w;
  uint32_t n;
  uint32_t sections;
  uint64_t max_monomials;
  const char* blindness_class; /* valid while the program lives */
} ehe_program_info;

EHE_API ehe_status ehe_program_info_get(const ehe_program* p, ehe_program_info* info);
EHE_API ehe_status ehe_program_save(const ehe_program* p, const char* path);
EHE_API ehe_status ehe_program_load(const char* path, ehe_program** p);
EHE_API void ehe_program_free(ehe_program* p);
EHE_API ehe_status ehe_cv_key_save(const ehe_cv_key* key, const char* path);
EHE_API ehe_status ehe_cv_key_load(const char* path, ehe_cv_key** key);
EHE_API void ehe_cv_key_free(ehe_cv_key* key);

/* ---- security estimators ---- */

/* key=value report. D = 0 selects D = d. `needed` receives the size including
 * the terminating NUL; the text is truncated to cap. */
EHE_API ehe_status ehe_security_report(uint32_t k, uint32_t w, uint32_t d, uint32_t D, double chi,
                                       const uint32_t* blocks, size_t nblocks, char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif
