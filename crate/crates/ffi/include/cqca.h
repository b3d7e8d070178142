#ifndef CQCA_H
#define CQCA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum CqcaStatus {
  CQCA_STATUS_OK = 0,
  CQCA_STATUS_NULL_POINTER = 1,
  CQCA_STATUS_INVALID_UTF8 = 2,
  CQCA_STATUS_INVALID_ARGUMENT = 3,
  CQCA_STATUS_BUDGET_EXCEEDED = 4,
  CQCA_STATUS_BUFFER_TOO_SMALL = 5,
  CQCA_STATUS_PANIC = 6,
} CqcaStatus;

// Coarse class of an automaton. `param` in [`cqca_classify`] carries the
// trace constant for `Periodic` and the speed for `Glider`.
typedef enum CqcaClassKind {
  CQCA_CLASS_KIND_PERIODIC = 0,
  CQCA_CLASS_KIND_GLIDER = 1,
  CQCA_CLASS_KIND_FRACTAL = 2,
} CqcaClassKind;

// Opaque handle to a validated automaton.
typedef struct CqcaAutomaton CqcaAutomaton;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Loads an automaton from a preset name, `trace=<poly>`, inline JSON or a
// JSON file path. Release with [`cqca_automaton_free`].
//
// # Safety
// `spec` must be a NUL-terminated string and `out` a valid pointer.
enum CqcaStatus cqca_automaton_load(const char *spec, struct CqcaAutomaton **out);

// Frees a handle. Null is ignored.
//
// # Safety
// `h` must come from [`cqca_automaton_load`] and not be freed twice.
void cqca_automaton_free(struct CqcaAutomaton *h);

// Class of the automaton.
//
// # Safety
// `h` must be a live handle; `kind` and `param` valid pointers.
enum CqcaStatus cqca_classify(const struct CqcaAutomaton *h,
                              enum CqcaClassKind *kind,
                              uint64_t *param);

// Entangling and simple flags.
//
// # Safety
// `h` must be a live handle; the outputs valid pointers.
enum CqcaStatus cqca_flags(const struct CqcaAutomaton *h, bool *entangling, bool *simple);

// Minimal period on a ring of `n` sites.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CqcaStatus cqca_period(const struct CqcaAutomaton *h, size_t n, uint64_t *out);

// Writes the trace polynomial, e.g. `u^-1 + 1 + u`.
//
// # Safety
// `h` must be a live handle; `buf` must hold `len` bytes; `needed` may be null.
enum CqcaStatus cqca_trace(const struct CqcaAutomaton *h, char *buf, size_t len, size_t *needed);

// Evolves a Pauli string (`X0 Z3 @N=8`) by `steps` time steps and writes
// the image in the same notation.
//
// # Safety
// `h` must be a live handle; `pauli` NUL-terminated; `buf` must hold `len`
// bytes; `needed` may be null.
enum CqcaStatus cqca_apply(const struct CqcaAutomaton *h,
                           const char *pauli,
                           uint64_t steps,
                           char *buf,
                           size_t len,
                           size_t *needed);

// Message for the last failure on this thread, or null. Valid until the
// next call into the library from the same thread.
const char *cqca_last_error(void);

// Library version as a static NUL-terminated string.
const char *cqca_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CQCA_H */
