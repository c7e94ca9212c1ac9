#ifndef KINKCHAIN_H
#define KINKCHAIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirrored from the library's error enum.
 */
typedef enum KcStatus {
  KcOk = 0,
  KcOutOfRange = 1,
  KcCapacity = 2,
  KcRegime = 3,
  KcNumerical = 4,
  KcInvariant = 5,
  KcResource = 6,
  KcConfig = 7,
  KcIo = 8,
  KcNullPointer = 100,
  KcPanic = 101,
} KcStatus;

/**
 * Opaque model-parameter handle.
 */
typedef struct KcParams KcParams;

/**
 * Opaque two-kink propagator handle (owns the eigendecomposition).
 */
typedef struct KcTwokinkPropagator KcTwokinkPropagator;

/**
 * Opaque evolved two-kink state handle.
 */
typedef struct KcTwokinkState KcTwokinkState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create model parameters; writes the handle into `out`.
 *
 * # Safety
 * `out` must be a valid pointer to a writable handle slot.
 */
enum KcStatus kc_params_new(double j0,
                            double g,
                            double h,
                            double j3,
                            uintptr_t length,
                            struct KcParams **out);

/**
 * # Safety
 * `params` must come from `kc_params_new` and not be freed twice.
 */
void kc_params_free(struct KcParams *params);

/**
 * Largest chain length accepted by the dense reference engine.
 */
uintptr_t kc_dense_limit(void);

/**
 * True iff the parameters conserve kink number (j3 == -g).
 *
 * # Safety
 * `params` must be a live handle.
 */
bool kc_params_kink_conserving(const struct KcParams *params);

/**
 * Build the two-kink propagator (diagonalizes the subspace Hamiltonian).
 *
 * # Safety
 * `params` must be a live handle; `out` a writable slot.
 */
enum KcStatus kc_twokink_propagator_new(const struct KcParams *params,
                                        struct KcTwokinkPropagator **out);

/**
 * # Safety
 * `prop` must come from `kc_twokink_propagator_new`; free once.
 */
void kc_twokink_propagator_free(struct KcTwokinkPropagator *prop);

/**
 * Evolve the domain-wall state |j, n> to time t.
 *
 * # Safety
 * `prop` must be a live handle; `out` a writable slot.
 */
enum KcStatus kc_twokink_evolve(const struct KcTwokinkPropagator *prop,
                                uintptr_t j,
                                uintptr_t n,
                                double t,
                                struct KcTwokinkState **out);

/**
 * # Safety
 * `state` must come from `kc_twokink_evolve`; free once.
 */
void kc_twokink_state_free(struct KcTwokinkState *state);

/**
 * Renyi-2 entropy of sites 1..=cut; writes into `out`.
 *
 * # Safety
 * `state` must be a live handle; `out` a writable double.
 */
enum KcStatus kc_twokink_renyi2(const struct KcTwokinkState *state, uintptr_t cut, double *out);

/**
 * Kink density on link (i, i+1); writes into `out`.
 *
 * # Safety
 * `state` must be a live handle; `out` a writable double.
 */
enum KcStatus kc_twokink_kink_density(const struct KcTwokinkState *state,
                                      uintptr_t link,
                                      double *out);

/**
 * <sigma^z_site>; writes into `out`.
 *
 * # Safety
 * `state` must be a live handle; `out` a writable double.
 */
enum KcStatus kc_twokink_sigma_z(const struct KcTwokinkState *state, uintptr_t site, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* KINKCHAIN_H */
