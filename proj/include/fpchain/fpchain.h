/*
 * fpchain C API
 *
 * Scattering by a finite chain of N identical, equally spaced cells in one
 * dimension (natural units hbar = m = 1, E = k^2/2, v = k).
 *
 * Conventions:
 *   - every function returns an fpc_status; outputs go through pointers
 *   - on failure fpc_last_error() holds a message for the calling thread
 *   - handles are opaque; each *_create / *_parse has a matching *_destroy
 *   - phases are principal values in (-pi, pi]; a phase is "undefined"
 *     (flag 0) when the amplitude's modulus is below 1e-300
 */
#ifndef FPCHAIN_FPCHAIN_H
#define FPCHAIN_FPCHAIN_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(FPCHAIN_BUILDING)
#    define FPC_API __declspec(dllexport)
#  else
#    define FPC_API __declspec(dllimport)
#  endif
#else
#  define FPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpc_status {
  FPC_OK = 0,
  FPC_ERR_INVALID_ARGUMENT = 1,
  FPC_ERR_UNDEFINED_PHASE = 2,
  FPC_ERR_AMBIGUOUS_BRANCH = 3,
  FPC_ERR_SINGULAR = 4,
  FPC_ERR_RESONANCE = 5,
  FPC_ERR_GRID = 6,
  FPC_ERR_COVERAGE = 7,
  FPC_ERR_BAND = 8,
  FPC_ERR_INTERNAL = 99
} fpc_status;

typedef enum fpc_band_class {
  FPC_BAND = 0,
  FPC_GAP = 1,
  FPC_EDGE = 2
} fpc_band_class;

typedef struct fpc_cell fpc_cell;
typedef struct fpc_chain fpc_chain;

typedef struct fpc_smatrix {
  double k;
  double t_re, t_im;
  double l_re, l_im;
  double r_re, r_im;
} fpc_smatrix;

typedef struct fpc_phases {
  double alpha_t, alpha_l, alpha_r;
  int has_t, has_l, has_r;
} fpc_phases;

typedef struct fpc_delays {
  double tau_t, tau_l, tau_r;
  int has_t, has_l, has_r;
} fpc_delays;

typedef struct fpc_band_verdict {
  double k;
  double z;
  fpc_band_class cls;
  double edge_tolerance;
} fpc_band_verdict;

typedef struct fpc_hartman_record {
  int n_cells;
  double tau_t;
  double traversal;
} fpc_hartman_record;

typedef struct fpc_asymptotic_fit {
  double alpha, beta;
  double slope_r, slope_t;
  double residual;
  int n_min, n_max;
  double l_modulus_defect;
  double step_defect_r;
  double beta_relation_residual;
} fpc_asymptotic_fit;

FPC_API const char* fpc_version(void);
FPC_API const char* fpc_last_error(void);
FPC_API const char* fpc_status_name(fpc_status status);

/* Cells: "delta:g=..", "barrier:V0=..,w=..", "piecewise:w1:V1,w2:V2,..". */
FPC_API fpc_status fpc_cell_parse(const char* text, fpc_cell** out);
FPC_API fpc_status fpc_cell_create_delta(double g, fpc_cell** out);
FPC_API fpc_status fpc_cell_create_barrier(double V0, double w, fpc_cell** out);
FPC_API fpc_status fpc_cell_create_piecewise(const double* widths, const double* heights,
                                             size_t count, fpc_cell** out);
FPC_API void fpc_cell_destroy(fpc_cell* cell);
FPC_API fpc_status fpc_cell_support_width(const fpc_cell* cell, double* out);
/* Writes the canonical text form (NUL-terminated, truncated to capacity);
 * *required receives the full length excluding the NUL. */
FPC_API fpc_status fpc_cell_describe(const fpc_cell* cell, char* buffer, size_t capacity,
                                     size_t* required);

/* Single cell at the origin: closed form, and via the transfer-matrix route. */
FPC_API fpc_status fpc_cell_smatrix(const fpc_cell* cell, double k, fpc_smatrix* out);
FPC_API fpc_status fpc_cell_smatrix_oracle(const fpc_cell* cell, double k, fpc_smatrix* out);

/* S-matrix algebra. */
FPC_API fpc_status fpc_displace(const fpc_smatrix* s, double a, fpc_smatrix* out);
FPC_API fpc_status fpc_compose(const fpc_smatrix* left, const fpc_smatrix* right,
                               fpc_smatrix* out);
FPC_API fpc_status fpc_unitarity_defect(const fpc_smatrix* s, double* out);
FPC_API fpc_status fpc_principal_phases(const fpc_smatrix* s, fpc_phases* out);
/* FPC_ERR_UNDEFINED_PHASE when an amplitude is below the floor. */
FPC_API fpc_status fpc_phase_relation_residual(const fpc_smatrix* s, double* out);

/* Chains: s^(n) for n = 1..n_cells at one k. */
FPC_API fpc_status fpc_chain_compute(const fpc_cell* cell, double a, int n_cells, double k,
                                     fpc_chain** out);
FPC_API fpc_status fpc_chain_compute_addleft(const fpc_cell* cell, double a, int n_cells,
                                             double k, fpc_chain** out);
FPC_API void fpc_chain_destroy(fpc_chain* chain);
FPC_API fpc_status fpc_chain_size(const fpc_chain* chain, int* out);
FPC_API fpc_status fpc_chain_entry(const fpc_chain* chain, int n, fpc_smatrix* out);
/* Phases of s^(n); alpha_t survives underflow of |t^(n)|. */
FPC_API fpc_status fpc_chain_phases(const fpc_chain* chain, int n, fpc_phases* out);
/* Natural log of |t^(n)|, finite even when |t^(n)| underflows. */
FPC_API fpc_status fpc_chain_log_abs_t(const fpc_chain* chain, int n, double* out);

/* Band structure and closed form. */
FPC_API fpc_status fpc_bloch_parameter(const fpc_cell* cell, double a, double k, double* out);
FPC_API fpc_status fpc_chebyshev_u(int n, double z, double* out);
FPC_API fpc_status fpc_chebyshev_transmission(const fpc_cell* cell, double a, int n_cells,
                                              double k, double* out);
FPC_API fpc_status fpc_band_classify(const fpc_cell* cell, double a, double k, double tol,
                                     fpc_band_verdict* out);

/* Time delays of the n-cell chain (n_cells = 1: the single cell), optionally
 * displaced rigidly by `offset`. fd_step <= 0 selects the default 1e-4. */
FPC_API fpc_status fpc_time_delays(const fpc_cell* cell, double a, int n_cells, double k,
                                   double offset, double fd_step, fpc_delays* out);

/* Fills records[0..n_max-1]. *in_gap is 1 when k is Gap-classified. */
FPC_API fpc_status fpc_hartman_scan(const fpc_cell* cell, double a, double k, int n_max,
                                    double fd_step, double tol, fpc_hartman_record* records,
                                    int* in_gap);

FPC_API fpc_status fpc_fit_asymptotics(const fpc_cell* cell, double a, double k, int n_max,
                                      double tol, fpc_asymptotic_fit* out);

FPC_API fpc_status fpc_wavepacket_average(const double* k, const double* transmission,
                                          size_t count, double k0, double sigma, double* out);
/* averaged[n-1], pointwise[n-1] for n = 1..n_max; samples <= 0 selects 4001. */
FPC_API fpc_status fpc_packet_scan(const fpc_cell* cell, double a, double k0, double sigma,
                                   int n_max, int samples, double* averaged, double* pointwise);

#ifdef __cplusplus
}
#endif

#endif /* FPCHAIN_FPCHAIN_H */
