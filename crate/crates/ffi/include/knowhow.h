#ifndef KNOWHOW_H
#define KNOWHOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KhStatus {
  KH_STATUS_OK = 0,
  KH_STATUS_NULL_ARGUMENT = 1,
  KH_STATUS_INVALID_UTF8 = 2,
  KH_STATUS_PARSE_ERROR = 3,
  KH_STATUS_INVALID_SYSTEM = 4,
  /*
   Unknown state or agent, or a witness request for a non-strategic formula.
   */
  KH_STATUS_EVAL_ERROR = 5,
  /*
   A proof was checked and rejected.
   */
  KH_STATUS_REJECTED = 6,
  KH_STATUS_PANIC = 7,
} KhStatus;

/*
 Opaque handle to a parsed system.
 */
typedef struct KhSystem KhSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a system from its text. The system need not be valid; evaluation
 on an invalid system fails with `KH_STATUS_INVALID_SYSTEM`.

 # Safety
 `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum KhStatus kh_system_load(const char *source, struct KhSystem **out);

/*
 Releases a system. Null is ignored.

 # Safety
 `sys` must come from `kh_system_load` and not be used afterwards.
 */
void kh_system_free(struct KhSystem *sys);

/*
 `KH_STATUS_OK` for a valid system, otherwise `KH_STATUS_INVALID_SYSTEM`
 with the violations, one per line, in the last error.

 # Safety
 `sys` must be a live handle.
 */
enum KhStatus kh_system_validate(const struct KhSystem *sys);

/*
 Evaluates `formula` at `state`, writing the verdict to `out`.

 # Safety
 Pointers must be valid; strings NUL-terminated.
 */
enum KhStatus kh_eval(const struct KhSystem *sys,
                      const char *state,
                      const char *formula,
                      bool naive,
                      bool *out);

/*
 First witnessing profile of a top-level `S{C}` or `H{C}` formula, as
 text like `a=L b=R`. `*out` is set to null when the formula is false.

 # Safety
 Pointers must be valid; strings NUL-terminated.
 */
enum KhStatus kh_witness(const struct KhSystem *sys,
                         const char *state,
                         const char *formula,
                         char **out);

/*
 Checks a proof script against the bundled lemmas. `*verdict` receives
 the verdict text (also on rejection) and must be freed by the caller.

 # Safety
 `script` must be NUL-terminated; `verdict` writable or null.
 */
enum KhStatus kh_check_proof(const char *script, char **verdict);

/*
 Message of the last failure on this thread, or null. Valid until the
 next call into the library from the same thread.
 */
const char *kh_last_error(void);

/*
 Releases a string returned by the library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void kh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOWHOW_H */
