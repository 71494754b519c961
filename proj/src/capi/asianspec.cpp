#include "asianspec/asianspec.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/mc.hpp"
#include "core/pricing.hpp"

struct asp_engine {
  asianspec::QuadratureSpec quad;
  asianspec::MCConfig mc;
  asianspec::PutVariant variant;
  std::vector<std::string> warnings;
  std::string last_error;
};

namespace {

using asianspec::ErrorCode;

asp_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return ASP_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return ASP_ERR_DOMAIN;
    case ErrorCode::Pole: return ASP_ERR_POLE;
    case ErrorCode::Underflow: return ASP_ERR_UNDERFLOW;
    case ErrorCode::Overflow: return ASP_ERR_OVERFLOW;
    case ErrorCode::Convergence: return ASP_ERR_CONVERGENCE;
    case ErrorCode::TailBound: return ASP_ERR_TAIL_BOUND;
    case ErrorCode::GridTooCoarse: return ASP_ERR_GRID_TOO_COARSE;
  }
  return ASP_ERR_INTERNAL;
}

template <class F>
asp_status guarded(asp_engine* engine, F&& f) {
  if (engine == nullptr) return ASP_ERR_NULL_POINTER;
  engine->last_error.clear();
  try {
    f();
    return ASP_OK;
  } catch (const asianspec::Error& e) {
    engine->last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    engine->last_error = e.what();
    return ASP_ERR_INTERNAL;
  } catch (...) {
    engine->last_error = "unknown failure";
    return ASP_ERR_INTERNAL;
  }
}

asianspec::MarketParams to_market(const asp_market& m) {
  return {m.spot, m.strike, m.rate, m.vol, m.expiry};
}

asp_mc_result to_result(const asianspec::MCEstimate& e) {
  return {e.mean, e.std_error, e.n_paths, e.seed};
}

}  // namespace

extern "C" {

const char* asp_version(void) { return "0.1.0"; }

const char* asp_status_string(asp_status status) {
  switch (status) {
    case ASP_OK: return "ok";
    case ASP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ASP_ERR_DOMAIN: return "domain error";
    case ASP_ERR_POLE: return "pole";
    case ASP_ERR_UNDERFLOW: return "underflow";
    case ASP_ERR_OVERFLOW: return "overflow";
    case ASP_ERR_CONVERGENCE: return "convergence failure";
    case ASP_ERR_TAIL_BOUND: return "tail bound exceeded";
    case ASP_ERR_GRID_TOO_COARSE: return "grid too coarse";
    case ASP_ERR_NULL_POINTER: return "null pointer";
    case ASP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

asp_status asp_engine_create(asp_engine** out) {
  if (out == nullptr) return ASP_ERR_NULL_POINTER;
  *out = new (std::nothrow) asp_engine();
  return *out == nullptr ? ASP_ERR_INTERNAL : ASP_OK;
}

void asp_engine_destroy(asp_engine* engine) { delete engine; }

asp_status asp_set_quadrature(asp_engine* engine, double u_max, double rel_tol) {
  return guarded(engine, [&] {
    asianspec::QuadratureSpec spec = engine->quad;
    spec.rel_tol = rel_tol;
    spec.u_max.reset();
    if (std::isnan(u_max)) asianspec::fail(ErrorCode::InvalidArgument, "u_max must be a number");
    if (u_max > 0.0) spec.u_max = u_max;
    asianspec::validate(spec);
    engine->quad = spec;
  });
}

asp_status asp_set_mc(asp_engine* engine, long long n_paths, int n_steps, uint64_t seed, int antithetic,
                      int threads) {
  return guarded(engine, [&] {
    const asianspec::MCConfig cfg{n_paths, n_steps, seed, antithetic != 0, threads};
    asianspec::validate(cfg);
    engine->mc = cfg;
  });
}

asp_status asp_set_put_variant(asp_engine* engine, int compounded, int include_discrete) {
  return guarded(engine, [&] {
    engine->variant.sign =
        compounded != 0 ? asianspec::PrefactorSign::Compounded : asianspec::PrefactorSign::Discounted;
    engine->variant.include_discrete = include_discrete != 0;
  });
}

asp_status asp_to_dimensionless(const asp_market* market, asp_dimensionless* out) {
  if (market == nullptr || out == nullptr) return ASP_ERR_NULL_POINTER;
  try {
    const auto dp = asianspec::to_dimensionless(to_market(*market));
    *out = {dp.R, dp.tau, dp.nu, dp.x, dp.k};
    return ASP_OK;
  } catch (const asianspec::Error& e) {
    return status_of(e.code());
  } catch (...) {
    return ASP_ERR_INTERNAL;
  }
}

asp_status asp_price_spectral(asp_engine* engine, const asp_market* market, asp_kind kind,
                              asp_spectral_result* out) {
  if (market == nullptr || out == nullptr) return ASP_ERR_NULL_POINTER;
  return guarded(engine, [&] {
    engine->warnings.clear();
    const auto dp = asianspec::to_dimensionless(to_market(*market));
    const auto price = kind == ASP_CALL ? asianspec::call_price(dp, engine->quad, engine->variant)
                                        : asianspec::put_price(dp, engine->quad, engine->variant);
    engine->warnings = price.warnings;
    *out = {price.value, price.quad_error_estimate, price.n_integrand_evals, price.n_discrete_terms};
  });
}

asp_status asp_spectral_parity_residual(asp_engine* engine, const asp_market* market, double* out) {
  if (market == nullptr || out == nullptr) return ASP_ERR_NULL_POINTER;
  return guarded(engine, [&] {
    engine->warnings.clear();
    const auto dp = asianspec::to_dimensionless(to_market(*market));
    const auto put = asianspec::put_price(dp, engine->quad, engine->variant);
    const auto call = asianspec::call_price(dp, engine->quad, engine->variant);
    engine->warnings = put.warnings;
    const double scale = std::max({std::abs(call.value), std::abs(put.value), 1e-300});
    *out = (call.value - put.value - asianspec::parity_adjustment(dp)) / scale;
  });
}

asp_status asp_price_mc(asp_engine* engine, const asp_market* market, asp_kind kind, asp_mc_result* out) {
  if (market == nullptr || out == nullptr) return ASP_ERR_NULL_POINTER;
  return guarded(engine, [&] {
    const auto kd = kind == ASP_CALL ? asianspec::OptionKind::Call : asianspec::OptionKind::Put;
    *out = to_result(asianspec::estimate(to_market(*market), kd, engine->mc));
  });
}

asp_status asp_price_mc_both(asp_engine* engine, const asp_market* market, asp_mc_result* put,
                             asp_mc_result* call, asp_mc_result* parity) {
  if (market == nullptr || put == nullptr || call == nullptr) return ASP_ERR_NULL_POINTER;
  return guarded(engine, [&] {
    const auto all = asianspec::estimate_all(to_market(*market), engine->mc);
    *put = to_result(all.put);
    *call = to_result(all.call);
    if (parity != nullptr) *parity = to_result(all.parity);
  });
}

asp_status asp_mc_parity_residual(asp_engine* engine, const asp_market* market, asp_mc_result* out) {
  if (market == nullptr || out == nullptr) return ASP_ERR_NULL_POINTER;
  return guarded(engine, [&] { *out = to_result(asianspec::parity_residual(to_market(*market), engine->mc)); });
}

size_t asp_warning_count(const asp_engine* engine) { return engine == nullptr ? 0 : engine->warnings.size(); }

const char* asp_warning(const asp_engine* engine, size_t index) {
  if (engine == nullptr || index >= engine->warnings.size()) return nullptr;
  return engine->warnings[index].c_str();
}

const char* asp_last_error(const asp_engine* engine) {
  return engine == nullptr ? "null engine" : engine->last_error.c_str();
}

}  // extern "C"
