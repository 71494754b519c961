#pragma once

#include <functional>
#include <optional>

#include "core/specfun.hpp"

namespace asianspec {

struct BromwichSpec {
  double epsilon = 1.0;           // abscissa Re q of the integration line
  std::optional<double> t_span;   // half-length in Im q; unset picks one from xi and x
  int n_nodes = 2000;             // initial trapezoid nodes over [-t_span, t_span]
  double rel_tol = 1e-8;
};

void validate(const BromwichSpec& spec);

struct BromwichResult {
  Complex value;
  double truncation_estimate;  // contribution of the outer 10% of the line
  double refinement_change;    // last change under step halving
  long long n_evaluations;
};

/// Closed-form inverse Laplace transform of q^{-nu/2} K_rho(sqrt(8q) e^{x/2}) at xi.
Complex inv_laplace_bessel(double nu, Complex rho, double x, double xi);

/// (1/2 pi i) int e^{xi q} F(q) dq along Re q = epsilon, by the trapezoid rule.
BromwichResult bromwich_line(const std::function<Complex(Complex)>& transform, double xi,
                             double t_span, const BromwichSpec& spec);

/// Numerical inversion of the same transform as inv_laplace_bessel.
BromwichResult bromwich_oracle(double nu, Complex rho, double x, double xi, const BromwichSpec& spec = {});

/// K_rho(w) for Re w > 0 from int_0^inf exp(-w cosh t) cosh(rho t) dt.
Complex bessel_k_complex(Complex rho, Complex w);

}  // namespace asianspec
