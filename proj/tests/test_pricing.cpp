#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/pricing.hpp"
#include "support.hpp"

using namespace asianspec;
using support::oracle;
using support::rel_err;

namespace {

const MarketParams kBench{2.0, 2.0, 0.05, 0.5, 1.0};

MarketParams with_strike(MarketParams m, double strike) {
  m.strike = strike;
  return m;
}

}  // namespace

TEST_CASE("to_dimensionless") {
  const DimensionlessParams dp = to_dimensionless(kBench);
  CHECK(rel_err(dp.R, 0.2) < 1e-15);
  CHECK(rel_err(dp.tau, 0.25) < 1e-15);
  CHECK(rel_err(dp.nu, -0.6) < 1e-15);
  CHECK(rel_err(dp.x, std::log(2.0)) < 1e-15);
  CHECK(rel_err(dp.k, 0.0625) < 1e-15);
  CHECK(rel_err(dp.strike(), 2.0) < 1e-15);

  CHECK(to_dimensionless({2.0, 2.0, 0.125, 0.5, 1.0}).nu == 0.0);
  CHECK(to_dimensionless(with_strike(kBench, 0.0)).k == 0.0);
  CHECK_THROWS_AS(to_dimensionless({2.0, 2.0, 0.05, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(to_dimensionless({2.0, 2.0, 0.05, 0.5, -1.0}), Error);
  CHECK_THROWS_AS(to_dimensionless({-2.0, 2.0, 0.05, 0.5, 1.0}), Error);
  CHECK_THROWS_AS(to_dimensionless({2.0, -2.0, 0.05, 0.5, 1.0}), Error);
}

TEST_CASE("discrete_term_count") {
  CHECK(discrete_term_count(-0.6) == 1);
  CHECK(discrete_term_count(0.4) == 0);
  CHECK(discrete_term_count(0.0) == 1);
  CHECK(discrete_term_count(-2.0) == 2);
  CHECK(discrete_term_count(-4.6) == 3);
}

TEST_CASE("average_discount and parity adjustment") {
  CHECK(average_discount(0.0) == 1.0);
  CHECK(rel_err(average_discount(1e-12), 1.0 - 0.5e-12) < 1e-15);
  CHECK(rel_err(average_discount(0.05), (1.0 - std::exp(-0.05)) / 0.05) < 1e-14);
  const double adj = (1.0 - std::exp(-0.05)) / 0.05 * 2.0 - 2.0 * std::exp(-0.05);
  CHECK(rel_err(parity_adjustment(to_dimensionless(kBench)), adj) < 1e-14);
  CHECK(rel_err(adj, 0.0483642) < 1e-6);
}

TEST_CASE("pricing kernel value and sign") {
  const DimensionlessParams dp = to_dimensionless(kBench);
  CHECK(rel_err(pricing_kernel(dp, 1.0), oracle("pricing_kernel_bench_xi1")) < 1e-8);
  for (double xi : {0.05, 0.2, 1.0, 5.0}) CHECK(pricing_kernel(dp, xi) >= -1e-8);
  CHECK_THROWS_AS(pricing_kernel(dp, 0.0), Error);
}

TEST_CASE("pricing kernel moments") {
  const DimensionlessParams dp = to_dimensionless(kBench);
  const auto m = moment_integrals(dp);
  // 4 e^x and 4 e^x E[V]
  CHECK(rel_err(m[0], 8.0) <= 1e-4);
  CHECK(rel_err(m[1], 4.0 * 2.0 * 2.0 * (std::exp(0.05) - 1.0) / 0.2) <= 1e-4);
  CHECK(moment_check(dp, 0, {}, MomentNormalization::Density) <= 1e-4);
  CHECK(moment_reference(dp, 0, MomentNormalization::TauScaled) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(moment_reference(dp, 1, MomentNormalization::TauScaled) == doctest::Approx(1.0254219).epsilon(1e-7));
}

TEST_CASE("put and call at the benchmark") {
  const DimensionlessParams dp = to_dimensionless(kBench);
  const SpectralPrice put = put_price(dp);
  const SpectralPrice call = call_price(dp);
  CHECK(rel_err(put.value, oracle("put_bench")) < 1e-9);
  CHECK(put.quad_error_estimate < 1e-9);
  CHECK(put.n_discrete_terms == 1);
  CHECK(put.warnings.empty());
  CHECK(call.value - put.value - parity_adjustment(dp) == 0.0);
  CHECK(call.quad_error_estimate == put.quad_error_estimate);

  const DimensionlessParams other = to_dimensionless({2.0, 1.8, 0.09, 0.3, 1.0});
  CHECK(rel_err(put_price(other).value, oracle("put_1.8_0.09_0.3")) < 1e-9);
}

TEST_CASE("zero strike") {
  const DimensionlessParams dp = to_dimensionless(with_strike(kBench, 0.0));
  CHECK(put_price(dp).value == 0.0);
  CHECK(rel_err(call_price(dp).value, 2.0 * (1.0 - std::exp(-0.05)) / 0.05) < 1e-14);
  CHECK(rel_err(call_price(dp).value, 1.9508230) < 1e-7);
}

TEST_CASE("deep in the money put") {
  DimensionlessParams dp = to_dimensionless(kBench);
  dp.k = 50.0;
  const double strike = dp.strike();
  const double forward = std::exp(-dp.R * dp.tau) * strike - average_discount(dp.R * dp.tau) * std::exp(dp.x);
  CHECK(rel_err(put_price(dp).value, forward) <= 1e-3);
}

TEST_CASE("monotone in strike") {
  double last_put = -1.0, last_call = INFINITY;
  for (double strike : {1.6, 1.8, 2.0, 2.2, 2.4}) {
    const DimensionlessParams dp = to_dimensionless(with_strike(kBench, strike));
    const double p = put_price(dp).value;
    const double c = call_price(dp).value;
    CHECK(p > last_put);
    CHECK(c < last_call);
    last_put = p;
    last_call = c;
  }
}

TEST_CASE("discrete spectrum matters for nu < 0") {
  PutVariant continuous_only;
  continuous_only.include_discrete = false;
  auto gap = [&](const MarketParams& m) {
    const DimensionlessParams dp = to_dimensionless(m);
    return put_price(dp).value - put_price(dp, {}, continuous_only).value;
  };
  CHECK(gap(kBench) > 1e-5);
  CHECK(gap({2.0, 2.0, 0.02, 0.5, 4.0}) > 4e-2);
  CHECK(gap({2.0, 1.8, 0.09, 0.3, 1.0}) == 0.0);
}

TEST_CASE("printed prefactor sign inflates the put") {
  const DimensionlessParams dp = to_dimensionless(kBench);
  PutVariant compounded;
  compounded.sign = PrefactorSign::Compounded;
  const double ratio = put_price(dp, {}, compounded).value / put_price(dp).value;
  CHECK(rel_err(ratio, std::exp(2.0 * dp.R * dp.tau)) < 1e-12);
}

TEST_CASE("small tau warning") {
  const DimensionlessParams dp = to_dimensionless({2.0, 2.0, 0.01, 0.2, 1.0});
  CHECK(dp.tau < 0.05);
  CHECK(put_price(dp).warnings.size() == 1);
}

TEST_CASE("put transform closed form against quadrature") {
  for (double nu : {-0.6, 0.0, 0.5}) {
    for (Complex rho : {Complex(0.5, 0.0), Complex(0.0, 1.0)}) {
      for (double k : {0.03, 0.0625, 0.5}) {
        const Complex closed = put_transform_closed_form(nu, rho, k, std::log(2.0));
        const Complex direct = put_transform_quadrature(nu, rho, k, std::log(2.0));
        CHECK(std::abs(closed - direct) <= 1e-8 * std::abs(direct));
      }
    }
  }
}

TEST_CASE("bound-state crosscheck") {
  DimensionlessParams dp = to_dimensionless(kBench);
  CHECK(discrete_terms_crosscheck(dp) <= 1e-10);
  dp.nu = 0.4;
  CHECK(discrete_terms_crosscheck(dp) == 0.0);
  for (double nu : {-1.2, -2.0, -2.5}) {
    dp.nu = nu;
    CHECK(discrete_terms_crosscheck(dp) <= 1e-10);
  }
}

TEST_CASE("QuadratureSpec validation") {
  const DimensionlessParams dp = to_dimensionless(kBench);
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(put_price(dp, bad), Error);
  QuadratureSpec short_cut;
  short_cut.u_max = 3.0;
  try {
    put_price(dp, short_cut);
    FAIL("expected TailBound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TailBound);
  }
}
