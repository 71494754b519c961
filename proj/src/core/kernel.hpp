#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "core/quadrature.hpp"
#include "core/specfun.hpp"

namespace asianspec {

// Truncation and tolerance policy for integrals over the spectral variable u.
struct QuadratureSpec {
  std::optional<double> u_max;  // unset: chosen from tau and rel_tol
  double rel_tol = 1e-10;
  int max_panels = 4096;
  int panel_order = 20;
};

void validate(const QuadratureSpec& spec);

struct KernelPoint {
  double tau;
  double x;
  double x_prime;
  double q;
};

double kernel_default_u_max(double tau, double rel_tol);

/// Normalized eigenfunction psi_u(x) = sqrt(u sinh(pi u)) K_{iu}(sqrt(8q) e^{x/2}) / pi.
double eigenfunction(double u, double x, double q);

struct KernelValue {
  double value;
  double error_estimate;
  int n_panels;
};

/// Heat kernel of -1/2 d^2/dx^2 + q e^x by spectral quadrature.
KernelValue heat_kernel(const KernelPoint& p, const QuadratureSpec& spec = {});

// Fixed-grid evaluation, for callers that difference or integrate the kernel
// and need every evaluation to share one set of u nodes.
class SpectralGrid {
 public:
  SpectralGrid(double u_max, int n_panels, int order = 20);

  const std::vector<double>& nodes() const { return set_.x; }
  const std::vector<double>& weights() const { return set_.w; }
  double u_max() const { return u_max_; }

  /// exp(pi u / 2) K_{iu}(sqrt(8q) e^{x/2}) at every node.
  std::vector<double> scaled_bessel(double x, double q) const;

  /// Kernel value from two rows of scaled_bessel.
  double kernel(double tau, const std::vector<double>& left, const std::vector<double>& right) const;

 private:
  double u_max_;
  quad::NodeSet set_;
};

struct CompletenessGrid {
  double half_width = 3.0;  // x' ranges over [x - L, x + L]
  int n_panels = 12;
  int order = 20;
};

/// |int I(x,x') f(x') dx' - f(x)| where I is the tau -> 0 kernel truncated at u_max.
double completeness_defect(double x, double q, const std::function<double(double)>& f,
                           const CompletenessGrid& grid, const QuadratureSpec& spec);

}  // namespace asianspec
