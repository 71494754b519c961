#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/kernel.hpp"
#include "core/quadrature.hpp"
#include "support.hpp"

using namespace asianspec;
using support::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian(double y) { return std::exp(-y * y / 0.08); }

}  // namespace

TEST_CASE("eigenfunction") {
  CHECK(std::abs(eigenfunction(1e-12, 0.0, 1.0)) < 1e-13);
  CHECK(rel_err(eigenfunction(3.0, 0.4, 1.0), eigenfunction(3.0, 0.4 - std::log(2.5), 2.5)) < 1e-14);
  const double want = std::sqrt(std::sinh(kPi)) * bessel_k_imag(1.0, std::sqrt(8.0)) / kPi;
  CHECK(rel_err(eigenfunction(1.0, 0.0, 1.0), want) < 1e-12);
  CHECK_THROWS_AS(eigenfunction(0.0, 0.0, 1.0), Error);
}

TEST_CASE("heat kernel value and symmetry") {
  const KernelValue a = heat_kernel({0.5, 0.3, -0.2, 1.0});
  const KernelValue b = heat_kernel({0.5, -0.2, 0.3, 1.0});
  CHECK(rel_err(a.value, support::oracle("heat_kernel_0.5_0.3_m0.2_1")) < 1e-9);
  CHECK(a.value == b.value);
}

TEST_CASE("heat kernel positivity and symmetry grid") {
  for (double tau : {0.1, 1.0}) {
    for (double q : {0.5, 5.0}) {
      for (double x : {-2.0, 0.0, 2.0}) {
        for (double xp : {-2.0, 1.0}) {
          const KernelValue k1 = heat_kernel({tau, x, xp, q});
          const KernelValue k2 = heat_kernel({tau, xp, x, q});
          CHECK(k1.value == k2.value);
          CHECK(k1.value >= -1e-10 * std::max(1.0, std::abs(k1.value)));
        }
      }
    }
  }
}

TEST_CASE("heat kernel argument errors") {
  CHECK_THROWS_AS(heat_kernel({0.0, 0.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(heat_kernel({0.5, 0.0, 0.0, -1.0}), Error);
  QuadratureSpec short_cut;
  short_cut.u_max = 3.0;
  try {
    heat_kernel({0.5, 0.0, 0.0, 1.0}, short_cut);
    FAIL("expected TailBound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TailBound);
  }
  QuadratureSpec bad;
  bad.rel_tol = 0.1;
  CHECK_THROWS_AS(heat_kernel({0.5, 0.0, 0.0, 1.0}, bad), Error);
}

TEST_CASE("PDE residual by central differences") {
  // Every evaluation shares one u grid, so the differences see a smooth function.
  const double tau = 0.5, x = 0.0, xp = 0.1, q = 1.0;
  const double hx = 1e-3, ht = 1e-4;
  const SpectralGrid grid(40.0, 64);
  const auto right = grid.scaled_bessel(xp, q);
  const auto centre = grid.scaled_bessel(x, q);
  const auto plus = grid.scaled_bessel(x + hx, q);
  const auto minus = grid.scaled_bessel(x - hx, q);
  const double k0 = grid.kernel(tau, centre, right);
  const double dt = (grid.kernel(tau + ht, centre, right) - grid.kernel(tau - ht, centre, right)) / (2.0 * ht);
  const double dxx = (grid.kernel(tau, plus, right) - 2.0 * k0 + grid.kernel(tau, minus, right)) / (hx * hx);
  const double residual = -dt + 0.5 * dxx - q * std::exp(x) * k0;
  CHECK(std::abs(residual) / std::abs(dt) <= 1e-4);
  CHECK(rel_err(k0, heat_kernel({tau, x, xp, q}).value) < 1e-8);
}

TEST_CASE("Chapman-Kolmogorov semigroup over y in [-8, 4]") {
  const double t1 = 0.25, t2 = 0.25, x = 0.0, xp = 0.0, q = 1.0;
  const SpectralGrid grid(40.0, 64);
  const auto left = grid.scaled_bessel(x, q);
  const auto right = grid.scaled_bessel(xp, q);
  const auto ys = quad::composite_nodes(-8.0, 4.0, 12, 16);
  double integral = 0.0;
  for (std::size_t j = 0; j < ys.x.size(); ++j) {
    const auto mid = grid.scaled_bessel(ys.x[j], q);
    integral += ys.w[j] * grid.kernel(t1, left, mid) * grid.kernel(t2, mid, right);
  }
  const double direct = heat_kernel({t1 + t2, x, xp, q}).value;
  CHECK(rel_err(integral, direct) <= 1e-4);
}

TEST_CASE("completeness defect") {
  QuadratureSpec spec;
  const CompletenessGrid grid;
  CHECK(completeness_defect(0.0, 1.0, [](double) { return 0.0; }, grid, spec) == 0.0);

  double previous = INFINITY;
  for (double u_max : {10.0, 20.0, 40.0}) {
    spec.u_max = u_max;
    const double d = completeness_defect(0.0, 1.0, gaussian, grid, spec);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous <= 1e-3);

  spec.u_max = 20.0;
  const double d1 = completeness_defect(0.0, 1.0, gaussian, grid, spec);
  const double d3 = completeness_defect(0.0, 1.0, [](double y) { return 3.0 * gaussian(y); }, grid, spec);
  CHECK(d3 <= 3.0 * d1 + 1e-12);
}

TEST_CASE("completeness rejects a coarse x' grid") {
  QuadratureSpec spec;
  spec.u_max = 40.0;
  CompletenessGrid coarse;
  coarse.n_panels = 2;
  try {
    completeness_defect(0.0, 1.0, gaussian, coarse, spec);
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooCoarse);
  }
}
