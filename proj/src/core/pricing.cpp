#include "core/pricing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/quadrature.hpp"

namespace asianspec {
namespace {

constexpr double kPi = std::numbers::pi;

double log_sinh(double y) { return y + std::log1p(-std::exp(-2.0 * y)) - std::log(2.0); }

void check(const DimensionlessParams& dp) {
  if (!std::isfinite(dp.R) || !std::isfinite(dp.tau) || !std::isfinite(dp.nu) || !std::isfinite(dp.x) ||
      !std::isfinite(dp.k)) {
    fail(ErrorCode::InvalidArgument, "dimensionless parameters must be finite");
  }
  if (!(dp.tau > 0.0)) fail(ErrorCode::Domain, "tau must be positive");
  if (!(dp.k >= 0.0)) fail(ErrorCode::Domain, "k must be non-negative");
}

// Continuous-spectrum weight shared by the kernel and the put:
// exp(-(u^2 + nu^2) tau / 8) |Gamma((nu + iu)/2)|^2 sinh(pi u) u, in logs.
double log_spectral_weight(double u, double nu, double tau) {
  return -(u * u + nu * nu) * tau / 8.0 + 2.0 * log_gamma(Complex(0.5 * nu, 0.5 * u)).real() + log_sinh(kPi * u) +
         std::log(u);
}

// 2 (-nu - 2n) / (n! Gamma(-nu - n + 1)) e^{n (nu + n) tau / 2}; zero when -nu = 2n.
double discrete_coefficient(int n, double nu, double tau) {
  const double factor = -nu - 2.0 * n;
  if (factor == 0.0) return 0.0;
  return 2.0 * factor * std::exp(-std::lgamma(n + 1.0) - std::lgamma(-nu - n + 1.0) + n * (nu + n) * tau / 2.0);
}

struct SpectrumIntegral {
  double value = 0.0;
  double error = 0.0;
  double tail = 0.0;
  double l1 = 0.0;
  long long evals = 0;
};

// Panel edges on [0, u_max]. When nu/2 is close to a non-positive integer the
// gamma weight has a narrow peak at u = 0, so the first panels are graded.
std::vector<double> spectrum_edges(double nu, double u_max, double z, const QuadratureSpec& spec) {
  std::vector<double> edges{0.0};
  const double half = 0.5 * nu;
  if (half <= 0.25) {
    const double d = std::abs(half - std::round(half));
    if (d > 0.0 && d < 0.25) {
      for (double e = 2.0 * d; e < std::min(1.0, u_max); e *= 2.0) edges.push_back(e);
    }
  }
  const double start = edges.back();
  const double rate = 0.5 * std::abs(std::log((u_max + 1.0) / z)) + 1.0;
  const int n = std::clamp(static_cast<int>(std::ceil((u_max - start) * rate / 5.0)), 4, spec.max_panels / 4);
  for (int i = 1; i <= n; ++i) edges.push_back(start + (u_max - start) * i / n);
  return edges;
}

template <class F>
SpectrumIntegral integrate_spectrum(F&& f, std::vector<double> edges, double tau, double abs_floor,
                                    const QuadratureSpec& spec) {
  const auto& rule = quad::gauss_legendre(spec.panel_order);
  // Whittaker values carry relative errors near 1e-11, so when the integrand
  // cancels heavily the attainable accuracy is set by its L1 norm.
  auto tolerance = [&](double value, double l1) {
    return std::max({spec.rel_tol * std::abs(value), 1e-10 * l1, abs_floor});
  };
  SpectrumIntegral out;
  double last_panel_max = 0.0;
  auto run = [&](const std::vector<double>& e) {
    double sum = 0.0;
    double l1 = 0.0;
    last_panel_max = 0.0;
    for (std::size_t p = 0; p + 1 < e.size(); ++p) {
      const double half = 0.5 * (e[p + 1] - e[p]);
      const double mid = 0.5 * (e[p + 1] + e[p]);
      const bool last = p + 2 == e.size();
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = f(mid + half * rule.nodes[i]);
        ++out.evals;
        sum += rule.weights[i] * half * v;
        l1 += rule.weights[i] * half * std::abs(v);
        if (last) last_panel_max = std::max(last_panel_max, std::abs(v));
      }
    }
    out.l1 = l1;
    return sum;
  };

  double coarse = run(edges);
  if (out.l1 <= abs_floor) {
    // Negligible everywhere on the grid: the whole integral is below the floor.
    out.value = coarse;
    out.error = out.l1;
    return out;
  }
  for (;;) {
    if (2 * (edges.size() - 1) > static_cast<std::size_t>(spec.max_panels)) {
      fail(ErrorCode::Convergence, "spectral u-quadrature did not converge within max_panels");
    }
    std::vector<double> refined;
    refined.reserve(2 * edges.size());
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      refined.push_back(edges[p]);
      refined.push_back(0.5 * (edges[p] + edges[p + 1]));
    }
    refined.push_back(edges.back());
    edges = std::move(refined);
    const double fine = run(edges);
    out.error = std::abs(fine - coarse);
    out.value = fine;
    if (out.error <= tolerance(fine, out.l1)) break;
    coarse = fine;
  }

  // The integrand envelope decays like exp(pi u / 4 - u^2 tau / 8) beyond u_max.
  const double u_max = edges.back();
  const double slope = u_max * tau / 4.0 - kPi / 4.0;
  if (!(slope > 0.0)) {
    fail(ErrorCode::TailBound, "u_max too small: the Gaussian factor does not yet dominate");
  }
  out.tail = last_panel_max / slope;
  if (out.tail > tolerance(out.value, out.l1)) {
    std::ostringstream os;
    os << "spectral truncation tail " << out.tail << " exceeds tolerance at u_max=" << u_max;
    fail(ErrorCode::TailBound, os.str());
  }
  return out;
}

// Continuous and discrete parts of the pricing kernel at xi.
struct KernelParts {
  double continuous = 0.0;
  double discrete = 0.0;
  double error = 0.0;
};

// abs_tol is an extra absolute tolerance on the kernel value.
KernelParts pricing_kernel_parts(const DimensionlessParams& dp, double xi, const QuadratureSpec& spec,
                                 double abs_tol = 0.0) {
  check(dp);
  if (!(xi > 0.0)) fail(ErrorCode::Domain, "pricing_kernel: xi must be positive");
  const double z = 2.0 * std::exp(dp.x) / xi;
  KernelParts parts;
  // exp(-z/2) W(z) behaves like exp(-z) times a power of z, which underflows.
  if (z > 700.0) return parts;

  const double u_max = spec.u_max.value_or(pricing_default_u_max(dp.tau, spec.rel_tol));
  const double kappa = 0.5 * (1.0 - dp.nu);
  const double log_front = -0.5 * z + kappa * std::log(z);
  auto integrand = [&](double u) {
    const Scaled w = whittaker_w_scaled(kappa, Complex(0.0, 0.5 * u), z);
    return w.mantissa.real() * std::exp(w.log_scale + log_front + log_spectral_weight(u, dp.nu, dp.tau));
  };
  // Absolute floor: 1e-14 of the kernel's natural size e^x / xi.
  const double abs_floor = 2.0 * kPi * kPi * std::max(1e-14 * std::exp(dp.x) / xi, abs_tol);
  const SpectrumIntegral si = integrate_spectrum(integrand, spectrum_edges(dp.nu, u_max, z, spec), dp.tau, abs_floor, spec);
  parts.continuous = si.value / (2.0 * kPi * kPi);
  parts.error = (si.error + si.tail) / (2.0 * kPi * kPi);

  const int count = discrete_term_count(dp.nu);
  for (int n = 0; n < count; ++n) {
    const double coef = discrete_coefficient(n, dp.nu, dp.tau);
    if (coef == 0.0) continue;
    const Scaled w = whittaker_w_scaled(kappa, Complex(-0.5 * dp.nu - n, 0.0), z);
    parts.discrete += coef * w.mantissa.real() * std::exp(w.log_scale + log_front);
  }
  return parts;
}

// Bound-state summand of the put without its prefactor:
// (2k)^{(3+nu)/2} e^{-1/(4k)} W_{-(3+nu)/2, -nu/2-n}(1/(2k)), returned in logs.
Scaled put_discrete_whittaker(int n, double nu, double k) {
  const double z = 1.0 / (2.0 * k);
  const Scaled w = whittaker_w_scaled(-0.5 * (3.0 + nu), Complex(-0.5 * nu - n, 0.0), z);
  return {w.mantissa, w.log_scale + 0.5 * (3.0 + nu) * std::log(2.0 * k) - 0.25 / k};
}

// The same summand from the incomplete-gamma and Laguerre closed forms.
Scaled put_discrete_closed_form(int n, double nu, double k) {
  const double z = 1.0 / (2.0 * k);
  const double lz = std::log(z);
  const double front = 0.5 * (3.0 + nu) * std::log(2.0 * k) - 0.25 / k;
  if (n == 0) {
    // W = e^{-z/2} z^{(1-nu)/2} U(2, 1-nu, z) with
    // U(2, b, z) = e^z (z^{1-b} Gamma(b-1, z) - z^{2-b} Gamma(b-2, z)).
    const double bracket = std::exp(nu * lz) * gamma_upper(-nu, z) - std::exp((1.0 + nu) * lz) * gamma_upper(-nu - 1.0, z);
    return {Complex(bracket, 0.0), 0.5 * z + 0.5 * (1.0 - nu) * lz + front};
  }
  if (n == 1) {
    // W_{mu-1/2, mu}(z) = z^{1/2-mu} e^{z/2} Gamma(2 mu, z) with mu = -1 - nu/2.
    const double mu = -1.0 - 0.5 * nu;
    return {Complex(gamma_upper(2.0 * mu, z), 0.0), (0.5 - mu) * lz + 0.5 * z + front};
  }
  // W = (-1)^m m! z^{1/2 - nu/2 - n} e^{-z/2} L_m^{-nu-2n}(z), m = n - 2.
  const int m = n - 2;
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  return {Complex(sign * laguerre(m, -nu - 2.0 * n, z), 0.0),
          std::lgamma(m + 1.0) + (0.5 - 0.5 * nu - n) * lz - 0.5 * z + front};
}

}  // namespace

double DimensionlessParams::strike() const { return 4.0 * std::exp(x) * k / tau; }

DimensionlessParams to_dimensionless(const MarketParams& m) {
  if (!std::isfinite(m.spot) || !std::isfinite(m.strike) || !std::isfinite(m.rate) || !std::isfinite(m.vol) ||
      !std::isfinite(m.expiry)) {
    fail(ErrorCode::InvalidArgument, "market parameters must be finite");
  }
  if (!(m.vol > 0.0)) fail(ErrorCode::Domain, "vol must be positive");
  if (!(m.expiry > 0.0)) fail(ErrorCode::Domain, "expiry must be positive");
  if (!(m.spot > 0.0)) fail(ErrorCode::Domain, "spot must be positive");
  if (!(m.strike >= 0.0)) fail(ErrorCode::Domain, "strike must be non-negative");
  DimensionlessParams dp{};
  dp.R = m.rate / (m.vol * m.vol);
  dp.tau = m.vol * m.vol * m.expiry;
  dp.nu = 2.0 * dp.R - 1.0;
  dp.x = std::log(m.spot);
  dp.k = m.strike * dp.tau / (4.0 * m.spot);
  return dp;
}

int discrete_term_count(double nu) {
  if (nu > 0.0) return 0;
  return static_cast<int>(std::floor(-0.5 * nu)) + 1;
}

double average_discount(double y) {
  if (std::abs(y) < 1e-8) return 1.0 - y / 2.0 + y * y / 6.0;
  return -std::expm1(-y) / y;
}

double parity_adjustment(const DimensionlessParams& dp) {
  const double rt = dp.R * dp.tau;
  return average_discount(rt) * std::exp(dp.x) - std::exp(-rt) * dp.strike();
}

double pricing_default_u_max(double tau, double rel_tol) {
  // Solve u^2 tau / 8 - pi u / 4 = ln(1/rel_tol) + 20 for the envelope.
  const double level = std::log(1.0 / rel_tol) + 20.0;
  return std::max(40.0, (kPi + std::sqrt(kPi * kPi + 8.0 * tau * level)) / tau);
}

double pricing_kernel(const DimensionlessParams& dp, double xi, const QuadratureSpec& spec) {
  validate(spec);
  const KernelParts parts = pricing_kernel_parts(dp, xi, spec);
  return parts.continuous + parts.discrete;
}

SpectralPrice put_price(const DimensionlessParams& dp, const QuadratureSpec& spec, const PutVariant& variant) {
  validate(spec);
  check(dp);
  SpectralPrice out;
  out.n_discrete_terms = discrete_term_count(dp.nu);
  if (dp.tau < 0.05) {
    std::ostringstream os;
    os << "tau=" << dp.tau << " is below 0.05; spectral convergence is slow and u_max is raised accordingly";
    out.warnings.push_back(os.str());
  }
  if (dp.k == 0.0) return out;

  const double u_max = spec.u_max.value_or(pricing_default_u_max(dp.tau, spec.rel_tol));
  const double z = 1.0 / (2.0 * dp.k);
  const double kappa = -0.5 * (3.0 + dp.nu);
  const double log_front = -kappa * std::log(2.0 * dp.k) - 0.25 / dp.k;
  auto integrand = [&](double u) {
    const Scaled w = whittaker_w_scaled(kappa, Complex(0.0, 0.5 * u), z);
    return w.mantissa.real() * std::exp(w.log_scale + log_front + log_spectral_weight(u, dp.nu, dp.tau));
  };

  const double rt = variant.sign == PrefactorSign::Discounted ? -dp.R * dp.tau : dp.R * dp.tau;
  const double scale = std::exp(rt + dp.x);
  const double continuous_pref = scale / (2.0 * kPi * kPi * dp.tau);
  const double abs_floor = 1e-15 * (std::exp(dp.x) + dp.strike()) / continuous_pref;
  const SpectrumIntegral si = integrate_spectrum(integrand, spectrum_edges(dp.nu, u_max, z, spec), dp.tau, abs_floor, spec);
  double discrete = 0.0;
  if (variant.include_discrete) {
    for (int n = 0; n < out.n_discrete_terms; ++n) {
      const double coef = discrete_coefficient(n, dp.nu, dp.tau);
      if (coef == 0.0) continue;
      const Scaled w = put_discrete_whittaker(n, dp.nu, dp.k);
      discrete += coef * w.mantissa.real() * std::exp(w.log_scale);
    }
  }
  out.value = continuous_pref * si.value + scale / dp.tau * discrete;
  out.quad_error_estimate = continuous_pref * (si.error + si.tail);
  out.n_integrand_evals = si.evals;
  return out;
}

SpectralPrice call_price(const DimensionlessParams& dp, const QuadratureSpec& spec, const PutVariant& variant) {
  SpectralPrice out = put_price(dp, spec, variant);
  out.value += parity_adjustment(dp);
  return out;
}

double discrete_terms_crosscheck(const DimensionlessParams& dp) {
  check(dp);
  if (dp.nu > 0.0 || dp.k == 0.0) return 0.0;
  double worst = 0.0;
  const int count = discrete_term_count(dp.nu);
  for (int n = 0; n < count; ++n) {
    if (-dp.nu - 2.0 * n == 0.0) continue;
    const Scaled a = put_discrete_whittaker(n, dp.nu, dp.k);
    const Scaled b = put_discrete_closed_form(n, dp.nu, dp.k);
    const Complex ratio = a.mantissa / b.mantissa * std::exp(a.log_scale - b.log_scale);
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return worst;
}

Complex put_transform_closed_form(double nu, Complex rho, double k, double x) {
  if (!(k > 0.0)) fail(ErrorCode::Domain, "put_transform: k must be positive");
  const Scaled w = whittaker_w_scaled(-0.5 * (3.0 + nu), 0.5 * rho, 1.0 / (2.0 * k));
  const double log_front = std::log(4.0) + 2.0 * x + 0.5 * (3.0 + nu) * std::log(2.0 * k) - 0.25 / k;
  return Scaled{w.mantissa, w.log_scale + log_front}.value();
}

Complex put_transform_quadrature(double nu, Complex rho, double k, double x, double rel_tol) {
  if (!(k > 0.0)) fail(ErrorCode::Domain, "put_transform: k must be positive");
  const double ex = std::exp(x);
  const double strike_tau = 4.0 * k * ex;
  const double kappa = 0.5 * (1.0 - nu);
  // xi = K tau e^{-s}; the integrand dies once 2 e^x / xi passes about 1400.
  const double s_max = std::max(1.0, std::log(700.0 * strike_tau / ex));
  auto integrand = [&](double s) {
    const double xi = strike_tau * std::exp(-s);
    const double z = 2.0 * ex / xi;
    const Scaled w = whittaker_w_scaled(kappa, 0.5 * rho, z);
    return Scaled{w.mantissa, w.log_scale + kappa * std::log(z) - 0.5 * z}.value() * (strike_tau - xi) * xi;
  };
  const auto& rule = quad::gauss_legendre(20);
  auto integrate = [&](int panels) {
    Complex sum = 0.0;
    const double width = s_max / panels;
    for (int p = 0; p < panels; ++p) sum += quad::integrate_panel<Complex>(rule, p * width, (p + 1) * width, integrand);
    return sum;
  };
  int panels = 8;
  Complex coarse = integrate(panels);
  for (int level = 0; level < 8; ++level) {
    panels *= 2;
    const Complex fine = integrate(panels);
    if (std::abs(fine - coarse) <= rel_tol * std::abs(fine)) return fine;
    coarse = fine;
  }
  fail(ErrorCode::Convergence, "put_transform_quadrature did not converge");
}

std::array<double, 2> moment_integrals(const DimensionlessParams& dp, const QuadratureSpec& spec) {
  validate(spec);
  check(dp);
  // xi = e^s; the kernel sits near xi ~ e^x tau and decays on both log tails,
  // with a log-width of order sqrt(tau).
  const double centre = dp.x + std::log(dp.tau);
  const auto& rule = quad::gauss_legendre(20);
  const double negligible = std::max(1e-12, 1e-3 * spec.rel_tol);
  const double xi_peak = std::exp(centre);
  const double peak = std::abs(pricing_kernel(dp, xi_peak, spec));
  // Absolute accuracy needed of P(xi) so that xi P and xi^2 P stay below the
  // negligible fraction of the moments.
  auto kernel = [&](double xi) {
    const double ratio = std::min(1.0, xi_peak / xi);
    const KernelParts parts = pricing_kernel_parts(dp, xi, spec, negligible * peak * ratio * ratio);
    return parts.continuous + parts.discrete;
  };
  struct Sums {
    double m0 = 0.0, m1 = 0.0, l0 = 0.0, l1 = 0.0;
    void add(const Sums& o) {
      m0 += o.m0;
      m1 += o.m1;
      l0 += o.l0;
      l1 += o.l1;
    }
  };
  struct Panel {
    double a, b;
    Sums sums;
  };
  auto panel = [&](double a, double b) {
    Panel p{a, b, {}};
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double xi = std::exp(a + half * (rule.nodes[i] + 1.0));
      const double w = half * rule.weights[i] * xi * kernel(xi);
      p.sums.m0 += w;
      p.sums.m1 += w * xi;
      p.sums.l0 += std::abs(w);
      p.sums.l1 += std::abs(w) * xi;
    }
    return p;
  };
  auto total_of = [](const std::vector<Panel>& ps) {
    Sums t;
    for (const Panel& p : ps) t.add(p.sums);
    return t;
  };

  // Walk out from the peak one panel at a time and stop at the first panel
  // that is negligible for both moments.
  const double width = 3.0 * std::sqrt(dp.tau);
  std::vector<Panel> panels{panel(centre - width, centre), panel(centre, centre + width)};
  Sums total = total_of(panels);
  auto walk = [&](double from, double step, double limit) {
    for (double edge = from; (limit - edge) * step > 0.0; edge += step) {
      Panel p = panel(std::min(edge, edge + step), std::max(edge, edge + step));
      if (p.sums.l0 <= negligible * total.l0 && p.sums.l1 <= negligible * total.l1) break;
      total.add(p.sums);
      panels.push_back(p);
    }
  };
  walk(centre + width, width, centre + 8.0);
  walk(centre - width, -width, centre - 12.0);

  // Halve every panel that carries more than tol of either moment; the rest
  // cannot move the result by more than tol.
  const double tol = std::max(1e-9, 10.0 * spec.rel_tol);
  for (int level = 0; level < 5; ++level) {
    const Sums coarse = total_of(panels);
    std::vector<Panel> next;
    for (const Panel& p : panels) {
      if (p.sums.l0 <= tol * coarse.l0 && p.sums.l1 <= tol * coarse.l1) {
        next.push_back(p);
        continue;
      }
      const double mid = 0.5 * (p.a + p.b);
      next.push_back(panel(p.a, mid));
      next.push_back(panel(mid, p.b));
    }
    const Sums fine = total_of(next);
    if (std::abs(fine.m0 - coarse.m0) <= tol * std::abs(fine.m0) &&
        std::abs(fine.m1 - coarse.m1) <= tol * std::abs(fine.m1)) {
      return {fine.m0, fine.m1};
    }
    panels = std::move(next);
  }
  fail(ErrorCode::Convergence, "moment: outer xi-quadrature did not converge");
}

double moment_integral(const DimensionlessParams& dp, int order, const QuadratureSpec& spec) {
  if (order != 0 && order != 1) fail(ErrorCode::InvalidArgument, "moment: order must be 0 or 1");
  return moment_integrals(dp, spec)[order];
}

double expected_average_integral(const DimensionlessParams& dp) {
  return std::exp(dp.x) * dp.tau * average_discount(-dp.R * dp.tau);
}

double moment_reference(const DimensionlessParams& dp, int order, MomentNormalization norm) {
  double value = 4.0 * std::exp(dp.x);
  if (norm == MomentNormalization::TauScaled) value *= dp.tau;
  if (order == 1) value *= expected_average_integral(dp);
  return value;
}

double moment_check(const DimensionlessParams& dp, int order, const QuadratureSpec& spec, MomentNormalization norm) {
  const double exact = moment_reference(dp, order, norm);
  return std::abs(moment_integral(dp, order, spec) - exact) / exact;
}

}  // namespace asianspec
