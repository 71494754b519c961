#ifndef ASIANSPEC_ASIANSPEC_H
#define ASIANSPEC_ASIANSPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(ASIANSPEC_BUILDING_LIBRARY)
#define ASP_API __attribute__((visibility("default")))
#else
#define ASP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asp_status {
  ASP_OK = 0,
  ASP_ERR_INVALID_ARGUMENT = 1,
  ASP_ERR_DOMAIN = 2,
  ASP_ERR_POLE = 3,
  ASP_ERR_UNDERFLOW = 4,
  ASP_ERR_OVERFLOW = 5,
  ASP_ERR_CONVERGENCE = 6,
  ASP_ERR_TAIL_BOUND = 7,
  ASP_ERR_GRID_TOO_COARSE = 8,
  ASP_ERR_NULL_POINTER = 9,
  ASP_ERR_INTERNAL = 10
} asp_status;

typedef enum asp_kind { ASP_PUT = 0, ASP_CALL = 1 } asp_kind;

typedef struct asp_market {
  double spot;
  double strike;
  double rate;
  double vol;
  double expiry;
} asp_market;

/* R = r / sigma^2, tau = sigma^2 t, nu = 2R - 1, x = ln S0, k = K tau / (4 S0). */
typedef struct asp_dimensionless {
  double R;
  double tau;
  double nu;
  double x;
  double k;
} asp_dimensionless;

typedef struct asp_spectral_result {
  double value;
  double quad_error_estimate;
  long long n_integrand_evals;
  int n_discrete_terms;
} asp_spectral_result;

typedef struct asp_mc_result {
  double mean;
  double std_error;
  long long n_paths;
  uint64_t seed;
} asp_mc_result;

/* Opaque engine holding quadrature and Monte Carlo settings, the warnings of
   the last spectral price and the last error message. Not thread-safe; use
   one engine per thread. */
typedef struct asp_engine asp_engine;

ASP_API const char* asp_version(void);
ASP_API const char* asp_status_string(asp_status status);

ASP_API asp_status asp_engine_create(asp_engine** out);
ASP_API void asp_engine_destroy(asp_engine* engine);

/* u_max <= 0 selects the default cut-off for the given rel_tol. */
ASP_API asp_status asp_set_quadrature(asp_engine* engine, double u_max, double rel_tol);
ASP_API asp_status asp_set_mc(asp_engine* engine, long long n_paths, int n_steps, uint64_t seed, int antithetic,
                              int threads);
/* Diagnostics: compounded = 1 uses e^{+R tau} in the put prefactor;
   include_discrete = 0 drops the bound-state sum. */
ASP_API asp_status asp_set_put_variant(asp_engine* engine, int compounded, int include_discrete);

ASP_API asp_status asp_to_dimensionless(const asp_market* market, asp_dimensionless* out);

ASP_API asp_status asp_price_spectral(asp_engine* engine, const asp_market* market, asp_kind kind,
                                      asp_spectral_result* out);
/* (call - put - parity adjustment) / max(|call|, |put|, 1e-300), both legs priced spectrally. */
ASP_API asp_status asp_spectral_parity_residual(asp_engine* engine, const asp_market* market, double* out);

ASP_API asp_status asp_price_mc(asp_engine* engine, const asp_market* market, asp_kind kind, asp_mc_result* out);
/* Put, call and parity residual from one set of paths; parity may be NULL. */
ASP_API asp_status asp_price_mc_both(asp_engine* engine, const asp_market* market, asp_mc_result* put,
                                     asp_mc_result* call, asp_mc_result* parity);
ASP_API asp_status asp_mc_parity_residual(asp_engine* engine, const asp_market* market, asp_mc_result* out);

ASP_API size_t asp_warning_count(const asp_engine* engine);
ASP_API const char* asp_warning(const asp_engine* engine, size_t index);
ASP_API const char* asp_last_error(const asp_engine* engine);

#ifdef __cplusplus
}
#endif

#endif
