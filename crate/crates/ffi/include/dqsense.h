#ifndef DQSENSE_H
#define DQSENSE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Status codes.
 */
typedef enum DqStatus {
  DQ_STATUS_OK = 0,
  DQ_STATUS_NULL_POINTER = 1,
  DQ_STATUS_INVALID_ARGUMENT = 2,
  DQ_STATUS_NUMERICAL = 3,
  DQ_STATUS_PANIC = 4,
} DqStatus;

/**
 * Scheme selector, same order as the CLI tags.
 */
typedef enum DqScheme {
  DQ_SCHEME_TSU_DISTRIBUTED = 0,
  DQ_SCHEME_TSU_SEPARABLE = 1,
  DQ_SCHEME_CLASSICAL_DISTRIBUTED = 2,
  DQ_SCHEME_CLASSICAL_SEPARABLE = 3,
  DQ_SCHEME_MULTI_CLASSICAL = 4,
  DQ_SCHEME_MULTI_SEPARABLE = 5,
  DQ_SCHEME_MULTI_ENTANGLED = 6,
} DqScheme;

/**
 * Opaque Gaussian state handle.
 */
typedef struct DqState DqState;

/**
 * Configuration of any scheme. Two-phase schemes read `gain`, `alpha_sq`,
 * `eta`, `g`; multi-phase schemes read `m` and `n`.
 */
typedef struct DqParams {
  double gain;
  double alpha_sq;
  double eta;
  double g;
  uintptr_t m;
  double n;
} DqParams;

typedef struct DqOptimum {
  double gain;
  double alpha_sq;
  double lod;
  uintptr_t iterations;
} DqOptimum;

typedef struct DqMcResult {
  double empirical_lod;
  double standard_error;
  double analytic_lod;
  double z_score;
  uintptr_t samples;
  uint64_t seed;
} DqMcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *dq_last_error(void);

/**
 * Allocates the `n_modes`-mode vacuum.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DqStatus dq_state_vacuum(uintptr_t n_modes, struct DqState **out);

/**
 * Copies a state into a new handle.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum DqStatus dq_state_clone(const struct DqState *state, struct DqState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void dq_state_free(struct DqState *state);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum DqStatus dq_state_n_modes(const struct DqState *state, uintptr_t *out);

/**
 * Adds a coherent amplitude `re + i im` to one mode.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum DqStatus dq_state_displace(struct DqState *state, uintptr_t mode, double re, double im);

/**
 * # Safety
 * `state` must be a live handle.
 */
enum DqStatus dq_state_two_mode_squeeze(struct DqState *state,
                                        uintptr_t mode_a,
                                        uintptr_t mode_b,
                                        double gain);

/**
 * # Safety
 * `state` must be a live handle.
 */
enum DqStatus dq_state_single_mode_squeeze(struct DqState *state, uintptr_t mode, double r);

/**
 * # Safety
 * `state` must be a live handle.
 */
enum DqStatus dq_state_phase_shift(struct DqState *state, uintptr_t mode, double phi);

/**
 * # Safety
 * `state` must be a live handle.
 */
enum DqStatus dq_state_beam_splitter(struct DqState *state,
                                     uintptr_t mode_a,
                                     uintptr_t mode_b,
                                     double transmissivity,
                                     double psi);

/**
 * # Safety
 * `state` must be a live handle.
 */
enum DqStatus dq_state_loss(struct DqState *state, uintptr_t mode, double eta);

/**
 * Splits `mode` into `ways` equal outputs. The output mode indices are
 * written to `out_modes`, which must hold at least `ways` entries.
 *
 * # Safety
 * `state` must be a live handle and `out_modes` must point to `capacity`
 * writable entries.
 */
enum DqStatus dq_state_balanced_split(struct DqState *state,
                                      uintptr_t mode,
                                      uintptr_t ways,
                                      uintptr_t *out_modes,
                                      uintptr_t capacity);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum DqStatus dq_state_mean_photons(const struct DqState *state, uintptr_t mode, double *out);

/**
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum DqStatus dq_state_total_photons(const struct DqState *state, double *out);

/**
 * Closed-form LOD of any scheme.
 *
 * # Safety
 * `params` must be readable and `out` writable.
 */
enum DqStatus dq_lod(enum DqScheme scheme, const struct DqParams *params, double *out);

/**
 * Numerically optimised entangled M-phase network under the budget `m * n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum DqStatus dq_optimize_entangled(uintptr_t m, double n, struct DqOptimum *out);

/**
 * Range of g where the tSU distributed scheme beats its classical
 * counterpart. `*has_window` is 0 when there is none (G = 1).
 *
 * # Safety
 * All out pointers must be writable.
 */
enum DqStatus dq_advantage_window(double gain,
                                  double eta,
                                  double *g_lo,
                                  double *g_hi,
                                  int32_t *has_window);

/**
 * Actual SNR in dB from measured signal and noise-floor powers in dBm.
 *
 * # Safety
 * `out` must be writable.
 */
enum DqStatus dq_snr_correct(double measured_dbm, double noise_dbm, double *out);

/**
 * Monte Carlo LOD estimate of a scheme at its operating point.
 *
 * # Safety
 * `params` must be readable and `out` writable.
 */
enum DqStatus dq_mc_lod(enum DqScheme scheme,
                        const struct DqParams *params,
                        uintptr_t samples,
                        uint64_t seed,
                        struct DqMcResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DQSENSE_H */
