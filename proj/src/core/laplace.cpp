#include "core/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"
#include "core/quadrature.hpp"

namespace asianspec {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

void validate(const BromwichSpec& spec) {
  if (!(spec.epsilon > 0.0 && std::isfinite(spec.epsilon))) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (spec.t_span && !(*spec.t_span > 0.0 && std::isfinite(*spec.t_span))) {
    fail(ErrorCode::InvalidArgument, "t_span must be positive");
  }
  if (spec.n_nodes < 200) fail(ErrorCode::InvalidArgument, "n_nodes must be at least 200");
  if (!(spec.rel_tol > 0.0 && spec.rel_tol <= 1e-3)) fail(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1e-3]");
}

Complex inv_laplace_bessel(double nu, Complex rho, double x, double xi) {
  if (!(xi > 0.0)) fail(ErrorCode::Domain, "inv_laplace_bessel: xi must be positive");
  const double ex = std::exp(x);
  const Scaled w = whittaker_w_scaled(0.5 * (1.0 - nu), 0.5 * rho, 2.0 * ex / xi);
  const double log_pref = -0.5 * std::log(8.0 * ex) + 0.5 * (nu - 1.0) * std::log(xi) - ex / xi;
  return Scaled{w.mantissa, w.log_scale + log_pref}.value();
}

Complex bessel_k_complex(Complex rho, Complex w) {
  if (!(w.real() > 0.0)) fail(ErrorCode::Domain, "bessel_k_complex: requires Re w > 0");
  const auto& rule = quad::gauss_legendre(20);
  auto integrand = [&](double t) {
    const double sh = std::sinh(0.5 * t);
    return std::exp(-2.0 * w * sh * sh) * std::cosh(rho * t);
  };
  auto log_envelope = [&](double t) {
    const double sh = std::sinh(0.5 * t);
    return -2.0 * w.real() * sh * sh + std::abs(rho.real()) * t;
  };
  auto rate = [&](double t) { return std::abs(w) * std::sinh(t) + std::abs(rho) + 1.0; };

  Complex sum = 0.0;
  double t = 0.0;
  double peak = 0.0;
  for (int panels = 0;; ++panels) {
    if (panels > 100000) fail(ErrorCode::Convergence, "bessel_k_complex: panel limit reached");
    double width = std::min(1.0, 4.0 * kPi / rate(t));
    width = std::min(width, 4.0 * kPi / rate(t + width));
    sum += quad::integrate_panel<Complex>(rule, t, t + width, integrand);
    t += width;
    const double level = log_envelope(t);
    peak = std::max(peak, level);
    const double slope = -w.real() * std::sinh(t) + std::abs(rho.real());
    if (slope < 0.0 && level < peak - 45.0) break;
  }
  return std::exp(-w) * sum;
}

BromwichResult bromwich_line(const std::function<Complex(Complex)>& transform, double xi, double t_span,
                             const BromwichSpec& spec) {
  validate(spec);
  if (!(xi > 0.0)) fail(ErrorCode::Domain, "bromwich_line: xi must be positive");
  if (!(t_span > 0.0)) fail(ErrorCode::InvalidArgument, "bromwich_line: t_span must be positive");

  // The branch point at q = 0 lies a distance epsilon from the line, so the
  // trapezoid error falls like exp(-2 pi epsilon / h).
  const double h0 = std::min(2.0 * t_span / spec.n_nodes, spec.epsilon / 3.0);
  long long n = static_cast<long long>(std::ceil(t_span / h0));
  double h = t_span / static_cast<double>(n);
  long long tail_index = static_cast<long long>(std::ceil(0.9 * static_cast<double>(n)));

  // When t_span sits on a half period of exp(i xi y), the outer window is made
  // a whole number of periods long and aligned with the nodes, so an
  // oscillating but convergent tail is not mistaken for a truncation error.
  const double half_periods = xi * t_span / kPi - 0.5;
  if (std::abs(half_periods - std::round(half_periods)) < 1e-9) {
    const long long per_half = std::max<long long>(1, static_cast<long long>(std::ceil(kPi / (xi * h0) / 2.0))) * 2;
    h = kPi / (xi * static_cast<double>(per_half));
    n = std::llround(t_span / h);
    const long long period_nodes = 2 * per_half;
    const long long periods = n / (10 * period_nodes);
    if (periods >= 1) tail_index = n - periods * period_nodes;
  }

  long long evals = 0;
  auto sample = [&](double y) {
    ++evals;
    const Complex q(spec.epsilon, y);
    return std::exp(Complex(0.0, xi * y)) * transform(q);
  };

  // Sums over the trapezoid nodes, split into the inner 90% and the outer 10%.
  Complex inner = 0.0;
  Complex outer = 0.0;
  auto accumulate = [&](long long j, double weight) {
    const double y = static_cast<double>(j) * h;
    const Complex v = weight * (sample(y) + sample(-y));
    if (j > tail_index) {
      outer += v;
    } else if (j == tail_index) {
      outer += 0.5 * v;
      inner += 0.5 * v;
    } else {
      inner += v;
    }
  };
  inner += sample(0.0);
  for (long long j = 1; j <= n; ++j) accumulate(j, j == n ? 0.5 : 1.0);

  const double scale = std::exp(xi * spec.epsilon) / (2.0 * kPi);
  Complex estimate = scale * h * (inner + outer);
  double change = 0.0;
  bool converged = false;
  for (int level = 0; level < 8; ++level) {
    n *= 2;
    h *= 0.5;
    tail_index *= 2;
    for (long long j = 1; j < n; j += 2) accumulate(j, 1.0);
    const Complex refined = scale * h * (inner + outer);
    change = std::abs(refined - estimate);
    estimate = refined;
    if (change <= spec.rel_tol * std::abs(estimate)) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorCode::Convergence, "bromwich_line: step halving did not converge");

  const double truncation = std::abs(scale * h * outer);
  if (truncation > 10.0 * spec.rel_tol * std::abs(estimate)) {
    fail(ErrorCode::TailBound, "bromwich_line: outer 10% of the line contributes " + std::to_string(truncation));
  }
  return {estimate, truncation, change, evals};
}

BromwichResult bromwich_oracle(double nu, Complex rho, double x, double xi, const BromwichSpec& spec) {
  validate(spec);
  if (!(xi > 0.0)) fail(ErrorCode::Domain, "bromwich_oracle: xi must be positive");
  // The Bessel factor decays like exp(-2 e^{x/2} sqrt|Im q|); the span is then
  // rounded up to a half period of exp(i xi Im q).
  double t_span = spec.t_span.value_or(std::max(400.0 / xi, 400.0 * std::exp(-x)));
  const double k = std::ceil(xi * t_span / kPi - 0.5);
  t_span = (k + 0.5) * kPi / xi;

  const double root = std::sqrt(8.0) * std::exp(0.5 * x);
  auto transform = [&](Complex q) {
    return std::exp(-0.5 * nu * std::log(q)) * bessel_k_complex(rho, root * std::sqrt(q));
  };
  return bromwich_line(transform, xi, t_span, spec);
}

}  // namespace asianspec
