#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/kernel.hpp"

namespace asianspec {

struct MarketParams {
  double spot;
  double strike;
  double rate;
  double vol;
  double expiry;
};

// Reduced variables: R = r / sigma^2, tau = sigma^2 t, nu = 2R - 1,
// x = ln S0, k = K tau / (4 e^x).
struct DimensionlessParams {
  double R;
  double tau;
  double nu;
  double x;
  double k;

  double strike() const;
};

DimensionlessParams to_dimensionless(const MarketParams& m);

/// Number of bound-state terms n = 0 .. floor(-nu/2); zero for nu > 0.
int discrete_term_count(double nu);

/// (1 - e^{-R tau}) / (R tau) e^x - e^{-R tau} K, the call minus put value.
double parity_adjustment(const DimensionlessParams& dp);

/// (1 - e^{-y}) / y, continuous at y = 0.
double average_discount(double y);

double pricing_default_u_max(double tau, double rel_tol);

struct SpectralPrice {
  double value = 0.0;
  double quad_error_estimate = 0.0;
  long long n_integrand_evals = 0;
  int n_discrete_terms = 0;
  std::vector<std::string> warnings;
};

// Sign of R tau in the put prefactor. Compounded reproduces the literal
// e^{+R tau} misprint and exists only to demonstrate that it is wrong.
enum class PrefactorSign { Discounted, Compounded };

struct PutVariant {
  PrefactorSign sign = PrefactorSign::Discounted;
  bool include_discrete = true;
};

double pricing_kernel(const DimensionlessParams& dp, double xi, const QuadratureSpec& spec = {});

SpectralPrice put_price(const DimensionlessParams& dp, const QuadratureSpec& spec = {},
                        const PutVariant& variant = {});
SpectralPrice call_price(const DimensionlessParams& dp, const QuadratureSpec& spec = {},
                         const PutVariant& variant = {});

// I_P(nu, rho, k): int_0^{K tau} (K tau - xi) (2e^x/xi)^{(1-nu)/2} e^{-e^x/xi}
// W_{(1-nu)/2, rho/2}(2e^x/xi) dxi, with K tau = 4 k e^x.
Complex put_transform_closed_form(double nu, Complex rho, double k, double x);
Complex put_transform_quadrature(double nu, Complex rho, double k, double x, double rel_tol = 1e-11);

/// Largest relative gap between the bound-state summands of the put computed
/// from Whittaker functions and from their incomplete-gamma / Laguerre forms.
double discrete_terms_crosscheck(const DimensionlessParams& dp);

/// int_0^inf P dxi and int_0^inf xi P dxi from one set of kernel values,
/// by quadrature in ln xi.
std::array<double, 2> moment_integrals(const DimensionlessParams& dp, const QuadratureSpec& spec = {});

double moment_integral(const DimensionlessParams& dp, int order, const QuadratureSpec& spec = {});

/// E[int_0^tau e^{X}] = e^x (e^{R tau} - 1) / R.
double expected_average_integral(const DimensionlessParams& dp);

// Closed-form moments of P. Density is 4 e^x E[V^order], with V the time
// integral of e^X, which is what the put valuation implies. TauScaled is
// 4 tau e^x E[V^order].
enum class MomentNormalization { Density, TauScaled };

double moment_reference(const DimensionlessParams& dp, int order, MomentNormalization norm);

/// |moment_integral - moment_reference| / moment_reference.
double moment_check(const DimensionlessParams& dp, int order, const QuadratureSpec& spec = {},
                    MomentNormalization norm = MomentNormalization::TauScaled);

}  // namespace asianspec
