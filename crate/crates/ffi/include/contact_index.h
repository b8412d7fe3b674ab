#ifndef CONTACT_INDEX_H
#define CONTACT_INDEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum CiStatus {
  CI_STATUS_OK = 0,
  CI_STATUS_NULL_ARGUMENT = 1,
  CI_STATUS_INVALID_UTF8 = 2,
  CI_STATUS_PARSE = 3,
  CI_STATUS_CONFIG = 4,
  CI_STATUS_NOT_IN_ALGEBRA_A = 5,
  CI_STATUS_NOT_ELLIPTIC = 6,
  // Quadrature, remainder fit, Fock truncation or expansion depth.
  CI_STATUS_NUMERIC = 7,
  CI_STATUS_MISSING_CLOSURE = 8,
  CI_STATUS_NONZERO_RESIDUE = 9,
  // Stencil, chart overlap, sp(2n) or unitarity failures.
  CI_STATUS_GEOMETRY = 10,
  CI_STATUS_UNSUPPORTED = 11,
  CI_STATUS_PANIC = 12,
} CiStatus;

// Which trace route `ci_symbol_tau` evaluates.
typedef enum CiRoute {
  CI_ROUTE_HEAT_CLOSED_FORM = 0,
  CI_ROUTE_NUMERIC = 1,
  CI_ROUTE_FOCK = 2,
} CiRoute;

// Opaque paired symbol.
typedef struct CiSymbol CiSymbol;

typedef struct CiComplex {
  double re;
  double im;
} CiComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty if none. The pointer
// stays valid until the next failing call on the same thread.
const char *ci_last_error(void);

// Library version as a static NUL-terminated string.
const char *ci_version(void);

// Parses a symbol literal in `n` variables, expanded to `depth` terms.
// A null `grade` selects the order of the literal.
//
// # Safety
// `text` must be a NUL-terminated string, `grade` null or valid, `out` writable.
enum CiStatus ci_symbol_parse(const char *text,
                              size_t n,
                              size_t depth,
                              const int32_t *grade,
                              struct CiSymbol **out);

// Releases a symbol; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ci_symbol_free(struct CiSymbol *s);

// Product a·b in the paired algebra.
//
// # Safety
// `a`, `b` must be live handles and `out` writable.
enum CiStatus ci_symbol_mul(const struct CiSymbol *a,
                            const struct CiSymbol *b,
                            struct CiSymbol **out);

// Sum a + b; both must carry the same grade parity.
//
// # Safety
// `a`, `b` must be live handles and `out` writable.
enum CiStatus ci_symbol_add(const struct CiSymbol *a,
                            const struct CiSymbol *b,
                            struct CiSymbol **out);

// Number of phase-space variable pairs n.
//
// # Safety
// `s` must be a live handle.
size_t ci_symbol_dim(const struct CiSymbol *s);

// The regularized trace τ(s) through one route.
//
// # Safety
// `s` must be a live handle and `out` writable.
enum CiStatus ci_symbol_tau(const struct CiSymbol *s, enum CiRoute route, struct CiComplex *out);

// Residue of the first component of s.
//
// # Safety
// `s` must be a live handle and `out` writable.
enum CiStatus ci_symbol_res(const struct CiSymbol *s, struct CiComplex *out);

// Runs a JSON run configuration exactly as the command-line tool does.
// The JSON report goes to `report` (free with `ci_string_free`) and the
// process exit code the tool would use goes to `exit_code`. Library errors
// are reported inside the JSON, so the status is `Ok` unless the arguments
// themselves are unusable.
//
// # Safety
// `config_json` must be NUL-terminated; `report` and `exit_code` writable.
enum CiStatus ci_run_json(const char *config_json, char **report, int32_t *exit_code);

// Releases a string returned by the library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ci_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONTACT_INDEX_H */
