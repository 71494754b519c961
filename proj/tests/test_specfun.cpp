#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/specfun.hpp"
#include "support.hpp"

using namespace asianspec;
using support::oracle;
using support::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("log_gamma special values") {
  CHECK(std::abs(log_gamma(Complex(1.0, 0.0))) < 1e-15);
  CHECK(std::abs(log_gamma(Complex(0.5, 0.0)).real() - std::log(std::sqrt(kPi))) < 1e-14);
  const double mod2 = std::exp(2.0 * log_gamma(Complex(1.0, 1.0)).real());
  CHECK(rel_err(mod2, kPi / std::sinh(kPi)) < 1e-13);
  CHECK(rel_err(mod2, 0.2720290) < 1e-6);
}

TEST_CASE("log_gamma poles raise Pole") {
  for (double z : {0.0, -1.0, -2.0, -7.0}) {
    try {
      log_gamma(Complex(z, 0.0));
      FAIL("expected a pole error at " << z);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Pole);
    }
  }
}

TEST_CASE("log_gamma against the recurrence and reflection") {
  for (double re : {-3.7, -0.4, 0.3, 2.2, 9.5}) {
    for (double im : {0.0, 0.7, 4.0, 25.0}) {
      const Complex z(re, im);
      const Complex shift = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
      // equal modulo 2 pi i
      const double wrapped = std::remainder(shift.imag(), 2.0 * kPi);
      CHECK(std::abs(shift.real()) < 1e-12);
      CHECK(std::abs(wrapped) < 1e-12);
    }
  }
}

TEST_CASE("gamma_weight") {
  CHECK(rel_err(gamma_weight(2.0, 0.0), 1.0) < 1e-14);
  CHECK(rel_err(gamma_weight(0.0, 2.0), kPi / std::sinh(kPi)) < 1e-13);
  CHECK(rel_err(gamma_weight(-0.6, 1.0), oracle("gamma_weight_m0.6_1")) < 1e-12);
  CHECK_THROWS_AS(gamma_weight(-2.0, 0.0), Error);
  CHECK_THROWS_AS(gamma_weight(0.0, 0.0), Error);
}

TEST_CASE("reflection |Gamma(iy)|^2 y sinh(pi y) = pi on [0.1, 30]") {
  double worst = 0.0;
  for (double y = 0.1; y <= 30.0; y += 0.05) {
    worst = std::max(worst, rel_err(gamma_weight(0.0, 2.0 * y) * y * std::sinh(kPi * y), kPi));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("bessel_k_imag examples") {
  CHECK(rel_err(bessel_k_imag(0.0, 1.0), 0.4210244382) < 1e-9);
  CHECK(rel_err(bessel_k_imag(0.0, 1.0), oracle("bessel_k_0_1")) < 1e-12);
  CHECK(bessel_k_imag(1.0, 1.0) == bessel_k_imag(-1.0, 1.0));
  CHECK(rel_err(bessel_k_imag(2.0, 3.0), oracle("bessel_k_i2_3")) < 1e-10);
}

TEST_CASE("bessel_k_imag against the mpmath table") {
  double worst = 0.0;
  for (const auto& row : support::read_rows("bessel_k_cases.txt")) {
    const double u = row[0], z = row[1], want = row[2];
    if (want == 0.0) continue;
    worst = std::max(worst, rel_err(bessel_k_imag(u, z), want));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("bessel_k_imag symmetry on u in [0, 40], z in [0.01, 50]") {
  for (double u : {0.0, 0.3, 4.0, 17.0, 40.0}) {
    for (double z : {0.01, 0.7, 5.0, 50.0}) {
      CHECK(bessel_k_imag(u, z) == bessel_k_imag(-u, z));
    }
  }
}

TEST_CASE("bessel_k_imag flags underflow") {
  CHECK_THROWS_AS(bessel_k_imag(1.0, 2000.0), Error);
}

TEST_CASE("kummer_u examples") {
  CHECK(rel_err(kummer_u(1.5, 2.5, 2.0).real(), std::pow(2.0, -1.5)) < 1e-12);
  CHECK(rel_err(kummer_u(1.0, 1.0, 1.0).real(), std::exp(1.0) * gamma_upper(0.0, 1.0)) < 1e-12);
  CHECK(rel_err(kummer_u(1.0, 1.0, 1.0).real(), oracle("kummer_u_1_1_1")) < 1e-12);
  CHECK(rel_err(kummer_u(0.3, 0.7, 0.01).real(), oracle("kummer_u_0.3_0.7_0.01")) < 1e-10);
}

TEST_CASE("whittaker_w examples") {
  CHECK(rel_err(whittaker_w(0.0, 0.5, 2.0).real(), std::exp(-1.0)) < 1e-12);
  // e^{1/2} Gamma(2, 1) = 2 e^{-1/2} = 1.2130613...
  CHECK(rel_err(whittaker_w(0.5, 1.0, 1.0).real(), 2.0 * std::exp(-0.5)) < 1e-12);
  const Complex w = whittaker_w(0.8, Complex(0.0, 0.5), 1.0);
  CHECK(std::abs(w.imag()) <= 1e-14);
  CHECK(rel_err(w.real(), oracle("whittaker_0.8_i0.5_1_re")) < 1e-10);
}

TEST_CASE("whittaker_w against the mpmath table") {
  double worst = 0.0;
  int n = 0;
  for (const auto& row : support::read_rows("whittaker_cases.txt")) {
    const double kappa = row[0], z = row[3];
    const Complex mu(row[1], row[2]);
    const Complex want(row[4], row[5]);
    if (want == 0.0) continue;
    const Scaled got = whittaker_w_scaled(kappa, mu, z);
    const double log_want = std::log(std::abs(want));
    const Complex ratio = got.mantissa * std::exp(got.log_scale - log_want) - want / std::abs(want);
    worst = std::max(worst, std::abs(ratio));
    ++n;
  }
  CHECK(n > 1300);
  CHECK(worst < 1e-10);
}

TEST_CASE("W_{0,1/2}(z) = exp(-z/2) on [0.1, 10]") {
  double worst = 0.0;
  for (double z = 0.1; z <= 10.0; z += 0.1) worst = std::max(worst, rel_err(whittaker_w(0.0, 0.5, z).real(), std::exp(-0.5 * z)));
  CHECK(worst < 1e-10);
}

TEST_CASE("W_{mu-1/2,mu}(z) = z^{1/2-mu} e^{z/2} Gamma(2mu, z)") {
  for (double mu : {0.5, 1.0, 1.7}) {
    for (double z : {0.5, 1.0, 4.0}) {
      const double want = std::pow(z, 0.5 - mu) * std::exp(0.5 * z) * gamma_upper(2.0 * mu, z);
      CHECK(rel_err(whittaker_w(mu - 0.5, mu, z).real(), want) < 1e-8);
    }
  }
}

TEST_CASE("W agrees with the M-function combination away from integer 2mu") {
  auto whittaker_m = [](double kappa, Complex mu, double z) {
    return std::exp(-0.5 * z) * std::pow(Complex(z, 0.0), mu + 0.5) * kummer_m(mu - kappa + 0.5, 1.0 + 2.0 * mu, z);
  };
  for (double kappa : {-1.3, 0.4, 1.1}) {
    for (Complex mu : {Complex(0.3, 0.0), Complex(0.0, 0.5), Complex(0.0, 2.0), Complex(0.85, 0.0)}) {
      for (double z : {0.2, 1.0, 3.5}) {
        const Complex m1 = std::exp(log_gamma(-2.0 * mu)) * rgamma(0.5 - kappa - mu) * whittaker_m(kappa, mu, z);
        const Complex m2 = std::exp(log_gamma(2.0 * mu)) * rgamma(0.5 - kappa + mu) * whittaker_m(kappa, -mu, z);
        const Complex want = m1 + m2;
        CHECK(std::abs(whittaker_w(kappa, mu, z) - want) <= 1e-10 * std::abs(want));
      }
    }
  }
}

TEST_CASE("laguerre") {
  CHECK(laguerre(0, 3.3, 7.0) == 1.0);
  CHECK(rel_err(laguerre(1, 0.5, 0.25), 1.25) < 1e-15);
  const double a = -0.6, z = 0.3;
  CHECK(rel_err(laguerre(2, a, z), z * z / 2.0 - (a + 2.0) * z + (a + 1.0) * (a + 2.0) / 2.0) < 1e-13);
  for (double alpha : {-2.4, 0.0, 1.5}) {
    for (double x : {-1.0, 0.4, 3.0}) {
      const double l3 = -x * x * x / 6.0 + (alpha + 3.0) * x * x / 2.0 - (alpha + 2.0) * (alpha + 3.0) * x / 2.0 +
                        (alpha + 1.0) * (alpha + 2.0) * (alpha + 3.0) / 6.0;
      CHECK(std::abs(laguerre(3, alpha, x) - l3) <= 1e-13 * std::max(1.0, std::abs(l3)));
    }
  }
}

TEST_CASE("gamma_upper") {
  CHECK(rel_err(gamma_upper(1.0, 1.0), std::exp(-1.0)) < 1e-14);
  CHECK(rel_err(gamma_upper(2.0, 1.0), 2.0 * std::exp(-1.0)) < 1e-14);
  CHECK(rel_err(gamma_upper(0.5, 0.25), std::sqrt(kPi) * std::erfc(0.5)) < 1e-13);
  CHECK(rel_err(gamma_upper(0.5, 0.25), oracle("gamma_upper_0.5_0.25")) < 1e-13);
}

TEST_CASE("gamma_upper recurrence on a in [0.1, 10], z in [0.1, 20]") {
  double worst = 0.0;
  for (double a = 0.1; a <= 10.0; a += 0.7) {
    for (double z = 0.1; z <= 20.0; z += 1.3) {
      const double lhs = gamma_upper(a + 1.0, z);
      const double rhs = a * gamma_upper(a, z) + std::pow(z, a) * std::exp(-z);
      worst = std::max(worst, rel_err(lhs, rhs));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("FunctionAccuracy validation") {
  CHECK_NOTHROW(validate(FunctionAccuracy{}));
  CHECK_THROWS_AS(validate(FunctionAccuracy{0.0, 1e-14}), Error);
  CHECK_THROWS_AS(validate(FunctionAccuracy{1e-2, 1e-14}), Error);
  CHECK_THROWS_AS(validate(FunctionAccuracy{1e-10, -1.0}), Error);
}
