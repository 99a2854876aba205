#ifndef ORBICONF_H
#define ORBICONF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum OrbiconfStatus {
  ORBICONF_STATUS_OK = 0,
  /**
   * Malformed text or a structure failing its axioms.
   */
  ORBICONF_STATUS_INVALID_INPUT = 1,
  /**
   * A search budget ran out before an answer.
   */
  ORBICONF_STATUS_INCONCLUSIVE = 2,
  ORBICONF_STATUS_NULL_POINTER = 3,
  /**
   * Text was not valid UTF-8.
   */
  ORBICONF_STATUS_INVALID_UTF8 = 4,
  /**
   * A bug inside the library; the message has details.
   */
  ORBICONF_STATUS_PANIC = 5,
} OrbiconfStatus;

typedef enum OrbiconfPrimeMethod {
  /**
   * Quotients by semiregular subgroups only.
   */
  ORBICONF_PRIME_METHOD_REGULAR = 0,
  /**
   * Every equal-fiber partition.
   */
  ORBICONF_PRIME_METHOD_GENERAL = 1,
} OrbiconfPrimeMethod;

/**
 * Answer of a decision procedure.
 */
typedef enum OrbiconfVerdict {
  /**
   * Prime, or good.
   */
  ORBICONF_VERDICT_YES = 0,
  /**
   * Not prime, or bad.
   */
  ORBICONF_VERDICT_NO = 1,
  ORBICONF_VERDICT_UNKNOWN = 2,
} OrbiconfVerdict;

/**
 * Opaque configuration handle.
 */
typedef struct OrbiconfConfiguration OrbiconfConfiguration;

/**
 * Opaque permutation group handle.
 */
typedef struct OrbiconfGroup OrbiconfGroup;

/**
 * Opaque orbi-incidence structure handle.
 */
typedef struct OrbiconfOrbi OrbiconfOrbi;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *orbiconf_last_error(void);

/**
 * Parses a configuration file's text and checks the axioms.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum OrbiconfStatus orbiconf_configuration_parse(const char *text_ptr,
                                                 struct OrbiconfConfiguration **out);

/**
 * The configuration with lines `base mod modulus`; residues are 1-based.
 *
 * # Safety
 * `base` must point to `len` readable values and `out` must be writable.
 */
enum OrbiconfStatus orbiconf_configuration_from_mod(const size_t *base,
                                                    size_t len,
                                                    size_t modulus,
                                                    struct OrbiconfConfiguration **out);

/**
 * # Safety
 * `c` must be null or a handle from this library, not yet freed.
 */
void orbiconf_configuration_free(struct OrbiconfConfiguration *c);

/**
 * Writes `n`, `m`, `s`, `t`.
 *
 * # Safety
 * `c` must be a live handle; the four outputs must be writable.
 */
enum OrbiconfStatus orbiconf_configuration_params(const struct OrbiconfConfiguration *c,
                                                  size_t *n,
                                                  size_t *m,
                                                  size_t *s,
                                                  size_t *t);

/**
 * Automorphism group, giving up after `node_budget` search nodes.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum OrbiconfStatus orbiconf_automorphism_group(const struct OrbiconfConfiguration *c,
                                                uint64_t node_budget,
                                                struct OrbiconfGroup **out);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t orbiconf_group_order(const struct OrbiconfGroup *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
bool orbiconf_group_is_cyclic(const struct OrbiconfGroup *g);

/**
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void orbiconf_group_free(struct OrbiconfGroup *g);

/**
 * Checks a point map (`map[i]` is the image of cover point `i`) and
 * writes the covering degree.
 *
 * # Safety
 * Handles must be live, `map` must hold `len` values, `degree` writable.
 */
enum OrbiconfStatus orbiconf_verify_covering(const struct OrbiconfConfiguration *cover,
                                             const struct OrbiconfConfiguration *base,
                                             const size_t *map,
                                             size_t len,
                                             size_t *degree);

/**
 * Primality: `Yes` prime, `No` covers a smaller configuration, `Unknown`
 * when the budget ran out (the status is then `Inconclusive`). The regular
 * method only considers quotients by semiregular groups.
 *
 * # Safety
 * `c` must be a live handle and `verdict` writable.
 */
enum OrbiconfStatus orbiconf_is_prime(const struct OrbiconfConfiguration *c,
                                      enum OrbiconfPrimeMethod method,
                                      uint64_t node_budget,
                                      enum OrbiconfVerdict *verdict);

/**
 * Parses an orbiconfiguration file's text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum OrbiconfStatus orbiconf_orbi_parse(const char *text_ptr, struct OrbiconfOrbi **out);

/**
 * Orbit space of `c` under `g`.
 *
 * # Safety
 * Handles must be live, `g` a group on `c`, and `out` writable.
 */
enum OrbiconfStatus orbiconf_quotient(const struct OrbiconfConfiguration *c,
                                      const struct OrbiconfGroup *g,
                                      struct OrbiconfOrbi **out);

/**
 * `n` and `m` as reduced fractions.
 *
 * # Safety
 * `o` must be a live handle; outputs writable.
 */
enum OrbiconfStatus orbiconf_orbi_counts(const struct OrbiconfOrbi *o,
                                         int64_t *n_num,
                                         int64_t *n_den,
                                         int64_t *m_num,
                                         int64_t *m_den);

/**
 * Canonical text form; release with [`orbiconf_string_free`].
 *
 * # Safety
 * `o` must be a live handle and `name` a NUL-terminated string.
 */
enum OrbiconfStatus orbiconf_orbi_to_string(const struct OrbiconfOrbi *o,
                                            const char *name,
                                            char **out);

/**
 * Good (`Yes`), bad (`No`) or unknown within `max_degree`.
 *
 * # Safety
 * `o` must be a live handle and `verdict` writable.
 */
enum OrbiconfStatus orbiconf_goodbad(const struct OrbiconfOrbi *o,
                                     size_t max_degree,
                                     enum OrbiconfVerdict *verdict);

/**
 * # Safety
 * `o` must be null or a handle from this library, not yet freed.
 */
void orbiconf_orbi_free(struct OrbiconfOrbi *o);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void orbiconf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBICONF_H */
