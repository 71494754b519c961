#include "core/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace asianspec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAbsFloor = 1e-14;

double bessel_argument(double x, double q) { return std::sqrt(8.0 * q) * std::exp(0.5 * x); }

// u sinh(pi u) exp(-pi u) / pi^2: the spectral measure once both Bessel
// factors carry their exp(pi u / 2) scaling.
double spectral_measure(double u) { return u * (-std::expm1(-2.0 * kPi * u)) / (2.0 * kPi * kPi); }

// Rough count of radians per unit u swept by K_{iu}(z) up to u_max.
double bessel_phase_rate(double u_max, double z) {
  return std::abs(std::log(2.0 * (u_max + 1.0) / z)) + 1.0;
}

void check_point(const KernelPoint& p) {
  if (!std::isfinite(p.tau) || !std::isfinite(p.x) || !std::isfinite(p.x_prime) || !std::isfinite(p.q)) {
    fail(ErrorCode::InvalidArgument, "heat_kernel: non-finite argument");
  }
  if (!(p.tau > 0.0)) fail(ErrorCode::Domain, "heat_kernel: tau must be positive");
  if (!(p.q > 0.0)) fail(ErrorCode::Domain, "heat_kernel: q must be positive");
}

}  // namespace

void validate(const QuadratureSpec& spec) {
  if (spec.u_max && !(*spec.u_max > 0.0 && std::isfinite(*spec.u_max))) {
    fail(ErrorCode::InvalidArgument, "u_max must be positive");
  }
  if (!(spec.rel_tol > 0.0 && spec.rel_tol <= 1e-3)) fail(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1e-3]");
  if (spec.max_panels < 4) fail(ErrorCode::InvalidArgument, "max_panels must be at least 4");
  if (spec.panel_order < 8 || spec.panel_order > 64) {
    fail(ErrorCode::InvalidArgument, "panel_order must lie in [8, 64]");
  }
}

double kernel_default_u_max(double tau, double rel_tol) {
  return std::max(40.0, std::sqrt(8.0 * std::log(1.0 / rel_tol) / tau) + 10.0);
}

double eigenfunction(double u, double x, double q) {
  if (!(u > 0.0)) fail(ErrorCode::Domain, "eigenfunction: u must be positive");
  if (!(q > 0.0)) fail(ErrorCode::Domain, "eigenfunction: q must be positive");
  const double k = bessel_k_imag_scaled(u, bessel_argument(x, q));
  return std::sqrt(u * (-std::expm1(-2.0 * kPi * u)) * 0.5) * k / kPi;
}

SpectralGrid::SpectralGrid(double u_max, int n_panels, int order)
    : u_max_(u_max), set_(quad::composite_nodes(0.0, u_max, n_panels, order)) {}

std::vector<double> SpectralGrid::scaled_bessel(double x, double q) const {
  const double z = bessel_argument(x, q);
  std::vector<double> out(set_.x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bessel_k_imag_scaled(set_.x[i], z);
  return out;
}

double SpectralGrid::kernel(double tau, const std::vector<double>& left, const std::vector<double>& right) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < set_.x.size(); ++i) {
    const double u = set_.x[i];
    sum += set_.w[i] * std::exp(-u * u * tau / 8.0) * spectral_measure(u) * (left[i] * right[i]);
  }
  return sum;
}

KernelValue heat_kernel(const KernelPoint& p, const QuadratureSpec& spec) {
  validate(spec);
  check_point(p);
  const double u_max = spec.u_max.value_or(kernel_default_u_max(p.tau, spec.rel_tol));
  const double z1 = bessel_argument(p.x, p.q);
  const double z2 = bessel_argument(p.x_prime, p.q);

  auto integrate = [&](int n_panels) {
    const auto set = quad::composite_nodes(0.0, u_max, n_panels, spec.panel_order);
    double sum = 0.0;
    for (std::size_t i = 0; i < set.x.size(); ++i) {
      const double u = set.x[i];
      const double kk = bessel_k_imag_scaled(u, z1) * bessel_k_imag_scaled(u, z2);
      sum += set.w[i] * std::exp(-u * u * p.tau / 8.0) * spectral_measure(u) * kk;
    }
    return sum;
  };

  const double phase = u_max * (bessel_phase_rate(u_max, z1) + bessel_phase_rate(u_max, z2));
  int n = std::clamp(static_cast<int>(std::ceil(phase / 10.0)), 4, spec.max_panels);
  double coarse = integrate(n);
  double fine = 0.0;
  double diff = 0.0;
  for (;;) {
    if (2 * n > spec.max_panels) {
      fail(ErrorCode::Convergence, "heat_kernel: u-quadrature did not converge within max_panels");
    }
    fine = integrate(2 * n);
    diff = std::abs(fine - coarse);
    n *= 2;
    if (diff <= spec.rel_tol * std::abs(fine) + kAbsFloor) break;
    coarse = fine;
  }

  // Both scaled Bessel factors are bounded by about sqrt(2 pi / u) past u = z,
  // which leaves a Gaussian tail.
  const double tail = std::exp(-u_max * u_max * p.tau / 8.0) * 4.0 / (kPi * u_max * p.tau);
  if (tail > spec.rel_tol * std::abs(fine) + kAbsFloor) {
    fail(ErrorCode::TailBound, "heat_kernel: truncation tail " + std::to_string(tail) + " exceeds tolerance at u_max=" +
                                   std::to_string(u_max));
  }
  return {fine, diff + tail, n};
}

double completeness_defect(double x, double q, const std::function<double(double)>& f,
                           const CompletenessGrid& grid, const QuadratureSpec& spec) {
  validate(spec);
  if (!(q > 0.0)) fail(ErrorCode::Domain, "completeness_defect: q must be positive");
  if (!(grid.half_width > 0.0) || grid.n_panels < 1) {
    fail(ErrorCode::InvalidArgument, "completeness_defect: invalid x' grid");
  }
  const double u_max = spec.u_max.value_or(40.0);

  // The truncated kernel oscillates in x' with wavenumber up to u_max / 2.
  const double width = 2.0 * grid.half_width / grid.n_panels;
  if (width * u_max / 2.0 > 0.6 * grid.order) {
    fail(ErrorCode::GridTooCoarse, "completeness_defect: x' panels too wide for u_max=" + std::to_string(u_max));
  }

  const auto xs = quad::composite_nodes(x - grid.half_width, x + grid.half_width, grid.n_panels, grid.order);
  const double z_min = bessel_argument(x - grid.half_width, q);
  const double phase = 2.0 * u_max * bessel_phase_rate(u_max, z_min);
  const int n_u = std::clamp(static_cast<int>(std::ceil(phase / 10.0)), 4, spec.max_panels);
  const SpectralGrid ug(u_max, n_u, spec.panel_order);

  std::vector<double> fx(xs.x.size());
  double f_max = 0.0;
  for (std::size_t j = 0; j < fx.size(); ++j) {
    fx[j] = f(xs.x[j]);
    f_max = std::max(f_max, std::abs(fx[j]));
  }

  const std::vector<double> center = ug.scaled_bessel(x, q);
  std::vector<double> projected(ug.nodes().size(), 0.0);
  for (std::size_t j = 0; j < xs.x.size(); ++j) {
    if (std::abs(fx[j]) <= 1e-18 * f_max) continue;
    const std::vector<double> row = ug.scaled_bessel(xs.x[j], q);
    for (std::size_t i = 0; i < row.size(); ++i) projected[i] += xs.w[j] * fx[j] * row[i];
  }
  const double reconstructed = ug.kernel(0.0, center, projected);
  return std::abs(reconstructed - f(x));
}

}  // namespace asianspec
