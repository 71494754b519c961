#pragma once

#include <complex>

namespace asianspec {

using Complex = std::complex<double>;

struct FunctionAccuracy {
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
};

void validate(const FunctionAccuracy& acc);

// A complex number stored as mantissa * exp(log_scale). Used where the
// magnitudes of Whittaker and Tricomi functions leave double range.
struct Scaled {
  Complex mantissa;
  double log_scale = 0.0;
  Complex value() const;
};

/// Principal branch of log Gamma. Throws ErrorCode::Pole at 0, -1, -2, ...
Complex log_gamma(Complex z);

/// 1/Gamma(z), entire; exactly zero at the poles of Gamma.
Complex rgamma(Complex z);

/// |Gamma((nu + i u)/2)|^2.
double gamma_weight(double nu, double u);

/// Modified Bessel function of the second kind of imaginary order, K_{iu}(z).
/// Symmetric in u. Throws ErrorCode::Underflow when the value leaves double range.
double bessel_k_imag(double u, double z, const FunctionAccuracy& acc = {});

/// exp(pi |u| / 2) K_{iu}(z); stays representable for large u.
double bessel_k_imag_scaled(double u, double z, const FunctionAccuracy& acc = {});

/// Tricomi confluent hypergeometric function U(a, b, z) for real z > 0.
Complex kummer_u(Complex a, Complex b, double z);
Scaled kummer_u_scaled(Complex a, Complex b, double z);

/// Kummer's function M(a, b, z) by its power series. Intended for moderate z.
Complex kummer_m(Complex a, Complex b, double z);

/// Whittaker function W_{kappa,mu}(z) = exp(-z/2) z^(mu+1/2) U(mu-kappa+1/2, 1+2mu, z).
Complex whittaker_w(double kappa, Complex mu, double z);
Scaled whittaker_w_scaled(double kappa, Complex mu, double z);

/// Generalized Laguerre polynomial L_n^alpha(z).
double laguerre(int n, double alpha, double z);

/// Upper incomplete gamma function Gamma(a, z) for z > 0.
double gamma_upper(double a, double z);

}  // namespace asianspec
