#ifndef SCHAPER_H
#define SCHAPER_H

#include <stdint.h>
#include <stddef.h>

typedef enum SchaperStatus {
  SCHAPER_STATUS_OK = 0,
  SCHAPER_STATUS_NULL_POINTER = 1,
  SCHAPER_STATUS_INVALID_UTF8 = 2,
  SCHAPER_STATUS_PARSE_ERROR = 3,
  SCHAPER_STATUS_NOT_PRIME = 4,
  SCHAPER_STATUS_RESOURCE_LIMIT = 5,
  SCHAPER_STATUS_INVALID_INPUT = 6,
  SCHAPER_STATUS_INTERNAL = 7,
} SchaperStatus;

// Opaque partition handle.
typedef struct SchaperPartition SchaperPartition;

// Last error message on this thread; empty after a successful call. Owned by the library.
const char *schaper_last_error(void);

// Parses `"4,4,2,2,1"` (or `""` for the empty partition).
//
// # Safety
// `text` must be a nul-terminated string and `out` a writable pointer.
enum SchaperStatus schaper_partition_parse(const char *text, struct SchaperPartition **out);

// # Safety
// `p` must come from [`schaper_partition_parse`] and not be freed twice. Null is ignored.
void schaper_partition_free(struct SchaperPartition *p);

// # Safety
// `p` must be a live handle or null (giving 0).
uintptr_t schaper_partition_size(const struct SchaperPartition *p);

// Comma-separated parts.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum SchaperStatus schaper_partition_to_string(const struct SchaperPartition *p, char **out);

// Exact Schaper number from the Gram matrix. `max_basis == 0` keeps the default budget.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum SchaperStatus schaper_oracle(const struct SchaperPartition *p,
                                  uint32_t prime_p,
                                  uint64_t max_basis,
                                  uint32_t *out);

// Proved lower and upper bounds from the combinatorial classifiers.
//
// # Safety
// `p` must be a live handle, `lower` and `upper` writable.
enum SchaperStatus schaper_bounds(const struct SchaperPartition *p,
                                  uint32_t prime_p,
                                  uint32_t *lower,
                                  uint32_t *upper);

// Full classifier report with certificates, as JSON.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum SchaperStatus schaper_bounds_json(const struct SchaperPartition *p,
                                       uint32_t prime_p,
                                       char **out);

// Symbolic right-hand side of the sum formula as JSON: `{"shape", "prime", "terms": [{"nu", "coef"}]}`.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum SchaperStatus schaper_sum_formula_json(const struct SchaperPartition *p,
                                            uint32_t prime_p,
                                            char **out);

// # Safety
// `s` must come from this library and not be freed twice. Null is ignored.
void schaper_string_free(char *s);

#endif  /* SCHAPER_H */
