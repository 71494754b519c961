#include "core/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/quadrature.hpp"

namespace asianspec {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLogMax = 709.0;
constexpr double kLogMin = -745.0;
constexpr Complex kI{0.0, 1.0};

bool is_gamma_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string fmt(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << z.real() << ',' << z.imag() << ')';
  return os.str();
}

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

Complex lanczos_log_gamma(Complex z) {
  const Complex w = z - 1.0;
  Complex series = kLanczos[0];
  for (int k = 1; k < 9; ++k) series += kLanczos[k] / (w + static_cast<double>(k));
  const Complex t = w + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (w + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(pi z) without overflow for large |Im z|.
Complex log_sin_pi(Complex z) {
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  if (z.imag() < 20.0) return std::log(std::sin(kPi * z));
  const Complex w = kPi * z;
  return -kI * w + std::log(Complex(0.0, 0.5)) + std::log(1.0 - std::exp(2.0 * kI * w));
}

// ---------------------------------------------------------------------------
// Tricomi U

Scaled conj(const Scaled& s) { return {std::conj(s.mantissa), s.log_scale}; }

Scaled normalize(Complex m, double e) {
  const double mag = std::abs(m);
  if (mag == 0.0 || !std::isfinite(mag)) return {m, e};
  const double shift = std::log(mag);
  return {m / mag, e + shift};
}

Complex pochhammer(Complex x, int n) {
  Complex p = 1.0;
  for (int i = 0; i < n; ++i) p *= x + static_cast<double>(i);
  return p;
}

// U(-m, b, z) is a polynomial of degree m.
Scaled kummer_u_polynomial(int m, Complex b, double z) {
  Complex sum = 0.0;
  double binom = 1.0;
  double zpow = 1.0;
  for (int k = 0; k <= m; ++k) {
    sum += binom * pochhammer(b + static_cast<double>(k), m - k) * zpow;
    binom = binom * (m - k) / (k + 1);
    zpow *= -z;
  }
  if (m % 2 == 1) sum = -sum;
  return normalize(sum, 0.0);
}

// Power series of M(a, b, z); returns the sum and the largest term seen.
Complex kummer_m_series(Complex a, Complex b, double z, double* max_term) {
  Complex term = 1.0;
  Complex sum = 1.0;
  double biggest = 1.0;
  int quiet = 0;
  for (int n = 0; n < 20000; ++n) {
    const Complex bn = b + static_cast<double>(n);
    if (std::abs(bn) == 0.0) fail(ErrorCode::Pole, "Kummer M: b is a non-positive integer");
    term *= (a + static_cast<double>(n)) * z / (bn * static_cast<double>(n + 1));
    sum += term;
    biggest = std::max(biggest, std::abs(term));
    if (std::abs(term) <= 1e-17 * std::abs(sum) || std::abs(term) == 0.0) {
      if (++quiet >= 2 && n > z) {
        if (max_term) *max_term = biggest;
        return sum;
      }
    } else {
      quiet = 0;
    }
  }
  fail(ErrorCode::Convergence, "Kummer M series did not converge at a=" + fmt(a) + " b=" + fmt(b));
}

// U through its connection formula with M; valid when b is not an integer.
Scaled kummer_u_via_m(Complex a, Complex b, double z) {
  const Complex one = 1.0;
  const double lz = std::log(z);
  bool have1 = !is_gamma_pole(a - b + one);
  bool have2 = !is_gamma_pole(a);
  Complex l1 = 0.0;
  Complex l2 = 0.0;
  if (have1) l1 = log_gamma(one - b) - log_gamma(a - b + one);
  if (have2) l2 = log_gamma(b - one) - log_gamma(a) + (one - b) * lz;
  double e = -std::numeric_limits<double>::infinity();
  if (have1) e = std::max(e, l1.real());
  if (have2) e = std::max(e, l2.real());
  Complex m = 0.0;
  if (have1) m += std::exp(l1 - e) * kummer_m_series(a, b, z, nullptr);
  if (have2) m += std::exp(l2 - e) * kummer_m_series(a - b + one, 2.0 - b, z, nullptr);
  return normalize(m, e);
}

// Gamma(a) U(a,b,z) = int_0^inf exp(-z t) t^(a-1) (1+t)^(b-a-1) dt, Re a > 0.
// The path runs from 0 towards the relevant saddle point and then parallel to
// the real axis, which keeps cancellation mild when Im b is large and z >= Im b.
Scaled kummer_u_contour(Complex a, Complex b, double z) {
  const Complex one = 1.0;
  const Complex am1 = a - one;
  const Complex c = b - a - one;
  constexpr double kBudget = 5.0;
  auto phi = [&](Complex t) { return -z * t + am1 * std::log(t) + c * std::log(one + t); };
  // Upper bound on |phi'(t)|, used to size the panels.
  // Panels are also kept narrower than the distance to the branch points at
  // t = 0 and t = -1 so the Gauss rule sees an analytic integrand.
  auto rate = [&](Complex t) {
    const double r0 = std::abs(t);
    const double r1 = std::abs(one + t);
    return std::max({z + std::abs(am1) / r0 + std::abs(c) / r1, kBudget / r0, kBudget / r1});
  };

  Complex ts = 0.0;
  if (b.imag() >= 2.0) {
    const Complex p = z - kI * b.imag();
    const Complex q = -kI * a.imag();
    const Complex disc = std::sqrt(p * p - 4.0 * z * q);
    const std::array<Complex, 2> roots = {(-p + disc) / (2.0 * z), (-p - disc) / (2.0 * z)};
    bool found = false;
    for (const Complex& r : roots) {
      if (r.imag() < -1e-12) continue;
      if (!found || r.imag() < ts.imag() - 1e-9 * (1.0 + ts.imag()) ||
          (std::abs(r.imag() - ts.imag()) <= 1e-9 * (1.0 + ts.imag()) && r.real() > ts.real())) {
        ts = r;
        found = true;
      }
    }
    if (!found) ts = 0.0;
  }

  const double small = 0.2 / (1.0 + std::abs(c) + z);
  const bool use_saddle = std::abs(ts) > small;
  const Complex dir = use_saddle ? ts / std::abs(ts) : Complex(1.0, 0.0);
  const Complex t_small = small * dir;

  double scale = use_saddle ? phi(ts).real() : phi(t_small).real();
  Complex acc = 0.0;

  auto add = [&](Complex contribution_log, Complex weight) {
    const double re = contribution_log.real();
    if (re - scale > 600.0) {
      acc *= std::exp(scale - re);
      scale = re;
    }
    if (re - scale < kLogMin) return;
    acc += std::exp(contribution_log - scale) * weight;
  };

  // Segment [0, t_small]: t^(a-1) integrated exactly against the Taylor series
  // of exp(-z t)(1+t)^c, whose coefficients obey
  // (k+1) g_{k+1} = (c - z - k) g_k - z g_{k-1}.
  {
    Complex g_prev = 0.0;
    Complex g = 1.0;
    Complex tpow = 1.0;
    Complex sum = 0.0;
    int quiet = 0;
    for (int k = 0; k < 400; ++k) {
      const Complex term = g * tpow / (a + static_cast<double>(k));
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
      const Complex g_next = ((c - z - static_cast<double>(k)) * g - z * g_prev) / static_cast<double>(k + 1);
      g_prev = g;
      g = g_next;
      tpow *= t_small;
    }
    add(a * std::log(t_small), sum);
  }

  const auto& rule = quad::gauss_legendre(20);
  int panels = 0;
  constexpr int kMaxPanels = 40000;

  auto panel = [&](auto&& point, double lo, double hi, Complex jac) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const Complex before = acc;
    const double scale_before = scale;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const Complex t = point(mid + half * rule.nodes[i]);
      add(phi(t), rule.weights[i] * half * jac);
    }
    if (++panels > kMaxPanels) {
      fail(ErrorCode::Convergence, "Tricomi U contour: panel limit at a=" + fmt(a) + " b=" + fmt(b));
    }
    return std::abs(acc - before * std::exp(scale_before - scale));
  };

  // Radial segment from t_small to the saddle.
  if (use_saddle) {
    auto point = [&](double r) { return r * dir; };
    double r = small;
    const double r_end = std::abs(ts);
    while (r < r_end) {
      double w = kBudget / rate(point(r));
      w = std::min(w, kBudget / rate(point(std::min(r + w, r_end))));
      const double r_next = std::min(r + w, r_end);
      panel(point, r, r_next, dir);
      r = r_next;
    }
  }

  // Horizontal ray towards +infinity.
  {
    const Complex origin = use_saddle ? ts : t_small;
    auto point = [&](double x) { return origin + x; };
    double x = 0.0;
    double running_max = phi(origin).real();
    const double settle = std::max(0.0, b.real() - 2.0) + 1.0;
    for (;;) {
      double w = kBudget / rate(point(x));
      w = std::min(w, kBudget / rate(point(x + w)));
      const double delta = panel(point, x, x + w, Complex(1.0, 0.0));
      x += w;
      const Complex t = point(x);
      const double level = phi(t).real();
      running_max = std::max(running_max, level);
      const double slope = (-z + am1 / t + c / (one + t)).real();
      if (z * x > settle && slope < 0.0 && level < running_max - 45.0 &&
          delta <= 1e-18 * std::abs(acc)) {
        break;
      }
    }
  }

  const Complex lg = log_gamma(a);
  return normalize(acc * std::exp(-kI * lg.imag()), scale - lg.real());
}

Scaled kummer_u_dispatch(Complex a, Complex b, double z) {
  if (b.imag() < 0.0 || (b.imag() == 0.0 && a.imag() < 0.0)) {
    return conj(kummer_u_dispatch(std::conj(a), std::conj(b), z));
  }
  if (is_gamma_pole(a)) {
    return kummer_u_polynomial(static_cast<int>(-a.real()), b, z);
  }
  if (b.imag() >= 2.0 && z < b.imag()) {
    return kummer_u_via_m(a, b, z);
  }
  if (a.real() >= 0.5) return kummer_u_contour(a, b, z);

  // Shift a into the half-plane where the integral converges, then run the
  // three-term recurrence in a downwards, the stable direction for U:
  // U(a-1) = (2a - b + z) U(a) - a (a - b + 1) U(a+1).
  const int m = static_cast<int>(std::ceil(0.5 - a.real()));
  const Complex top = a + static_cast<double>(m);
  const Scaled u0 = kummer_u_contour(top, b, z);
  const Scaled u1 = kummer_u_contour(top + 1.0, b, z);
  double e = std::max(u0.log_scale, u1.log_scale);
  Complex cur = u0.mantissa * std::exp(u0.log_scale - e);
  Complex next = u1.mantissa * std::exp(u1.log_scale - e);
  for (int j = 0; j < m; ++j) {
    const Complex aj = top - static_cast<double>(j);
    const Complex prev = (2.0 * aj - b + z) * cur - aj * (aj - b + 1.0) * next;
    next = cur;
    cur = prev;
    const double mag = std::max(std::abs(cur), std::abs(next));
    if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
      cur /= mag;
      next /= mag;
      e += std::log(mag);
    }
  }
  return normalize(cur, e);
}

}  // namespace

void validate(const FunctionAccuracy& acc) {
  if (!(acc.rel_tol > 0.0 && acc.rel_tol <= 1e-3)) {
    fail(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1e-3]");
  }
  if (!(acc.abs_floor >= 0.0)) fail(ErrorCode::InvalidArgument, "abs_floor must be non-negative");
}

Complex Scaled::value() const {
  if (mantissa == 0.0) return 0.0;
  const double mag = std::log(std::abs(mantissa)) + log_scale;
  if (mag > kLogMax) fail(ErrorCode::Overflow, "value exceeds double range");
  return mantissa * std::exp(log_scale);
}

Complex log_gamma(Complex z) {
  if (!finite(z)) fail(ErrorCode::InvalidArgument, "log_gamma: non-finite argument");
  if (is_gamma_pole(z)) fail(ErrorCode::Pole, "log_gamma: pole at " + fmt(z));
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  const int shift = static_cast<int>(std::ceil(0.5 - z.real()));
  if (shift <= 64) {
    Complex acc = lanczos_log_gamma(z + static_cast<double>(shift));
    for (int k = 0; k < shift; ++k) acc -= std::log(z + static_cast<double>(k));
    return acc;
  }
  return std::log(kPi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
}

Complex rgamma(Complex z) {
  if (is_gamma_pole(z)) return 0.0;
  return std::exp(-log_gamma(z));
}

double gamma_weight(double nu, double u) {
  const Complex z(0.5 * nu, 0.5 * std::abs(u));
  if (is_gamma_pole(z)) fail(ErrorCode::Pole, "gamma_weight: Gamma pole at nu=" + std::to_string(nu) + ", u=0");
  return std::exp(2.0 * log_gamma(z).real());
}

double bessel_k_imag_scaled(double u, double z, const FunctionAccuracy& acc) {
  validate(acc);
  if (!std::isfinite(u) || !std::isfinite(z)) fail(ErrorCode::InvalidArgument, "bessel_k_imag: non-finite argument");
  if (!(z > 0.0)) fail(ErrorCode::Domain, "bessel_k_imag: z must be positive");
  u = std::abs(u);

  // K_{iu}(z) = exp(-u theta) int_0^inf exp(-z cos(theta) cosh s) cos(u s - z sin(theta) sinh s) ds
  // for any theta in [0, pi/2). theta = asin(u/z) passes through the saddle;
  // for u >= z the path is kept a distance delta below pi/2.
  const double delta = u > 0.0 ? std::clamp(3.0 / u, 0.01, 0.2) : 0.2;
  double theta = kPi / 2 - delta;
  if (u < z) theta = std::min(theta, std::asin(u / z));
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double zc = z * ct;
  const double log_prefactor = u * (kPi / 2 - theta) - zc;
  if (log_prefactor < kLogMin + 40.0) {
    fail(ErrorCode::Underflow, "bessel_k_imag: K_{iu}(z) underflows for z=" + std::to_string(z));
  }

  const double s_max = std::min(30.0, std::acosh(1.0 + 42.0 / zc));
  auto integrand = [&](double s) {
    const double sh = std::sinh(0.5 * s);
    return std::exp(-2.0 * zc * sh * sh) * std::cos(u * s - z * st * std::sinh(s));
  };
  auto rate = [&](double s) {
    return std::abs(u - z * st * std::cosh(s)) + zc * std::sinh(s) + 1.0;
  };

  const auto& rule = quad::gauss_legendre(20);
  constexpr double kBudget = 4.0 * kPi;
  double sum = 0.0;
  double s = 0.0;
  while (s < s_max) {
    double w = std::min(1.0, kBudget / rate(s));
    w = std::min(w, kBudget / rate(std::min(s + w, s_max)));
    const double next = std::min(s + w, s_max);
    sum += quad::integrate_panel<double>(rule, s, next, integrand);
    s = next;
  }
  return std::exp(log_prefactor) * sum;
}

double bessel_k_imag(double u, double z, const FunctionAccuracy& acc) {
  const double scaled = bessel_k_imag_scaled(u, z, acc);
  const double log_mag = std::log(std::abs(scaled)) - 0.5 * kPi * std::abs(u);
  if (scaled != 0.0 && log_mag < kLogMin) {
    fail(ErrorCode::Underflow, "bessel_k_imag: K_{iu}(z) underflows for u=" + std::to_string(u));
  }
  return scaled * std::exp(-0.5 * kPi * std::abs(u));
}

Scaled kummer_u_scaled(Complex a, Complex b, double z) {
  if (!finite(a) || !finite(b) || !std::isfinite(z)) fail(ErrorCode::InvalidArgument, "kummer_u: non-finite argument");
  if (!(z > 0.0)) fail(ErrorCode::Domain, "kummer_u: z must be positive");
  return kummer_u_dispatch(a, b, z);
}

Complex kummer_u(Complex a, Complex b, double z) { return kummer_u_scaled(a, b, z).value(); }

Complex kummer_m(Complex a, Complex b, double z) {
  if (!finite(a) || !finite(b) || !std::isfinite(z)) fail(ErrorCode::InvalidArgument, "kummer_m: non-finite argument");
  return kummer_m_series(a, b, z, nullptr);
}

Scaled whittaker_w_scaled(double kappa, Complex mu, double z) {
  if (!std::isfinite(kappa)) fail(ErrorCode::InvalidArgument, "whittaker_w: non-finite kappa");
  const Scaled u = kummer_u_scaled(mu - kappa + 0.5, 1.0 + 2.0 * mu, z);
  const Complex lf = -0.5 * z + (mu + 0.5) * std::log(z);
  return {u.mantissa * std::exp(kI * lf.imag()), u.log_scale + lf.real()};
}

Complex whittaker_w(double kappa, Complex mu, double z) { return whittaker_w_scaled(kappa, mu, z).value(); }

double laguerre(int n, double alpha, double z) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "laguerre: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - z;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - z) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double gamma_upper_cf(double a, double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      const double log_v = -z + a * std::log(z) + std::log(h);
      if (log_v > kLogMax) fail(ErrorCode::Overflow, "gamma_upper overflows");
      return std::exp(log_v);
    }
  }
  fail(ErrorCode::Convergence, "gamma_upper continued fraction did not converge");
}

// Lower incomplete gamma by its power series.
double gamma_lower_series(double a, double z) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= z / (a + n);
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) return sum * std::exp(-z + a * std::log(z));
  }
  fail(ErrorCode::Convergence, "gamma_lower series did not converge");
}

// E_1(z) = Gamma(0, z) for small z.
double exp_integral_e1(double z) {
  constexpr double euler_gamma = 0.57721566490153286;
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < 1000; ++n) {
    term *= -z / n;
    const double add = term / n;
    sum += add;
    if (std::abs(add) < kEps * std::abs(sum)) break;
  }
  return -euler_gamma - std::log(z) - sum;
}

}  // namespace

double gamma_upper(double a, double z) {
  if (!std::isfinite(a) || !std::isfinite(z)) fail(ErrorCode::InvalidArgument, "gamma_upper: non-finite argument");
  if (!(z > 0.0)) fail(ErrorCode::Domain, "gamma_upper: z must be positive");
  if (z >= a + 1.0) return gamma_upper_cf(a, z);
  if (a > 0.0) {
    const double g = std::tgamma(a);
    if (!std::isfinite(g)) fail(ErrorCode::Overflow, "gamma_upper overflows for a=" + std::to_string(a));
    return g - gamma_lower_series(a, z);
  }
  // a <= 0 and z < 1: recur downwards from a positive (or zero) order.
  const int m = static_cast<int>(std::ceil(-a));
  const double top = a + m;
  double value = top == 0.0 ? exp_integral_e1(z) : (top + 1.0 <= z ? gamma_upper_cf(top, z)
                                                                  : std::tgamma(top) - gamma_lower_series(top, z));
  for (int j = 1; j <= m; ++j) {
    const double order = top - j;
    value = (value - std::exp(order * std::log(z) - z)) / order;
  }
  if (!std::isfinite(value)) fail(ErrorCode::Overflow, "gamma_upper overflows");
  return value;
}

}  // namespace asianspec
