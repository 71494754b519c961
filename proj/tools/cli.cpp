#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "asianspec/asianspec.h"

namespace asianspec::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Request {
  asp_market market{};
  std::string kind = "put";
  std::string method = "spectral";
  std::optional<double> u_max;
  double rel_tol = 1e-10;
  long long paths = 2'000'000;
  int steps = 252;
  std::uint64_t seed = 42;
  std::string output = "json";
  bool parity_check = false;
};

struct Report {
  std::optional<double> value;
  std::optional<double> quad_error;
  std::optional<double> mc_mean;
  std::optional<double> mc_stderr;
  std::optional<double> parity_spectral;
  std::optional<double> parity_mc;
  std::optional<double> parity_mc_stderr;
  std::vector<std::string> warnings;
};

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

int exit_code(asp_status s) {
  switch (s) {
    case ASP_OK: return 0;
    case ASP_ERR_INVALID_ARGUMENT:
    case ASP_ERR_DOMAIN:
    case ASP_ERR_NULL_POINTER: return 2;
    case ASP_ERR_POLE:
    case ASP_ERR_UNDERFLOW:
    case ASP_ERR_OVERFLOW:
    case ASP_ERR_CONVERGENCE:
    case ASP_ERR_TAIL_BOUND:
    case ASP_ERR_GRID_TOO_COARSE: return 3;
    case ASP_ERR_INTERNAL: break;
  }
  return 1;
}

class Engine {
 public:
  Engine() {
    if (asp_engine_create(&e_) != ASP_OK) throw Failure(1, "could not create engine");
  }
  ~Engine() { asp_engine_destroy(e_); }
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void check(asp_status s, const char* what) const {
    if (s == ASP_OK) return;
    throw Failure(exit_code(s), std::string(what) + ": " + asp_status_string(s) + ": " + asp_last_error(e_));
  }
  asp_engine* get() const { return e_; }

 private:
  asp_engine* e_ = nullptr;
};

void validate(const Request& r) {
  auto require = [](bool ok, const char* field, const char* rule, double got) {
    if (ok) return;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", got);
    throw Failure(2, std::string("invalid --") + field + ": " + rule + " (got " + buf + ")");
  };
  const auto& m = r.market;
  require(std::isfinite(m.spot) && m.spot > 0.0, "spot", "must be positive", m.spot);
  require(std::isfinite(m.strike) && m.strike >= 0.0, "strike", "must be non-negative", m.strike);
  require(std::isfinite(m.rate), "rate", "must be finite", m.rate);
  require(std::isfinite(m.vol) && m.vol > 0.0, "vol", "must be positive", m.vol);
  require(std::isfinite(m.expiry) && m.expiry > 0.0, "expiry", "must be positive", m.expiry);
  if (r.u_max) require(std::isfinite(*r.u_max) && *r.u_max > 0.0, "umax", "must be positive", *r.u_max);
  require(r.rel_tol > 0.0 && r.rel_tol <= 1e-3, "rel-tol", "must lie in (0, 1e-3]", r.rel_tol);
  if (r.method != "spectral") {
    require(r.paths >= 1000 && r.paths % 2 == 0, "paths", "must be an even number of at least 1000",
            static_cast<double>(r.paths));
    require(r.steps >= 50, "steps", "must be at least 50", r.steps);
  }
}

Report price(const Request& r) {
  Engine engine;
  Report rep;
  const asp_kind kind = r.kind == "call" ? ASP_CALL : ASP_PUT;
  const bool spectral = r.method != "mc";
  const bool mc = r.method != "spectral";

  if (spectral || r.parity_check) {
    engine.check(asp_set_quadrature(engine.get(), r.u_max.value_or(0.0), r.rel_tol), "quadrature");
  }
  if (spectral) {
    asp_spectral_result res{};
    engine.check(asp_price_spectral(engine.get(), &r.market, kind, &res), "spectral price");
    rep.value = res.value;
    rep.quad_error = res.quad_error_estimate;
    for (std::size_t i = 0; i < asp_warning_count(engine.get()); ++i) rep.warnings.emplace_back(asp_warning(engine.get(), i));
  }
  if (r.parity_check) {
    double residual = 0.0;
    engine.check(asp_spectral_parity_residual(engine.get(), &r.market, &residual), "parity check");
    rep.parity_spectral = residual;
    if (!spectral) {
      for (std::size_t i = 0; i < asp_warning_count(engine.get()); ++i) {
        rep.warnings.emplace_back(asp_warning(engine.get(), i));
      }
    }
  }
  if (mc) {
    engine.check(asp_set_mc(engine.get(), r.paths, r.steps, r.seed, 1, 0), "mc config");
    asp_mc_result put{}, call{}, parity{};
    engine.check(asp_price_mc_both(engine.get(), &r.market, &put, &call, &parity), "mc price");
    const asp_mc_result& chosen = kind == ASP_CALL ? call : put;
    rep.mc_mean = chosen.mean;
    rep.mc_stderr = chosen.std_error;
    rep.parity_mc = parity.mean;
    rep.parity_mc_stderr = parity.std_error;
  }
  return rep;
}

Json number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string text_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", *v);
  return buf;
}

Json to_json(const Request& r, const asp_dimensionless& dp, const Report& rep) {
  Json j;
  j["inputs"] = {{"spot", r.market.spot},   {"strike", r.market.strike}, {"rate", r.market.rate},
                 {"vol", r.market.vol},     {"expiry", r.market.expiry}, {"kind", r.kind},
                 {"umax", number(r.u_max)}, {"rel_tol", r.rel_tol},      {"paths", r.paths},
                 {"steps", r.steps},        {"seed", r.seed}};
  j["dimensionless"] = {{"R", dp.R}, {"tau", dp.tau}, {"nu", dp.nu}, {"x", dp.x}, {"k", dp.k}};
  j["method"] = r.method;
  j["value"] = number(rep.value);
  j["quad_error_estimate"] = number(rep.quad_error);
  j["mc_mean"] = number(rep.mc_mean);
  j["mc_stderr"] = number(rep.mc_stderr);
  if (rep.value && rep.mc_mean) {
    const double diff = *rep.value - *rep.mc_mean;
    j["difference"] = diff;
    j["within_3_sigma"] = std::abs(diff) <= 3.0 * *rep.mc_stderr;
  }
  j["parity_residual"] = {{"spectral", number(rep.parity_spectral)},
                          {"mc", number(rep.parity_mc)},
                          {"mc_stderr", number(rep.parity_mc_stderr)}};
  j["warnings"] = rep.warnings;
  return j;
}

void write_csv(std::ostream& out, const Json& j) {
  out << "spot,strike,rate,vol,expiry,kind,method,value,quad_error_estimate,mc_mean,mc_stderr,difference,"
         "within_3_sigma,parity_spectral,parity_mc,parity_mc_stderr,warnings\n";
  auto num = [](const Json& v) { return v.is_null() ? std::string() : text_number(v.get<double>()); };
  const Json& in = j["inputs"];
  const Json& pr = j["parity_residual"];
  std::string warnings;
  for (const auto& w : j["warnings"]) warnings += (warnings.empty() ? "" : "; ") + w.get<std::string>();
  out << num(in["spot"]) << ',' << num(in["strike"]) << ',' << num(in["rate"]) << ',' << num(in["vol"]) << ','
      << num(in["expiry"]) << ',' << in["kind"].get<std::string>() << ',' << j["method"].get<std::string>() << ','
      << num(j["value"]) << ',' << num(j["quad_error_estimate"]) << ',' << num(j["mc_mean"]) << ','
      << num(j["mc_stderr"]) << ',' << (j.contains("difference") ? num(j["difference"]) : "") << ','
      << (j.contains("within_3_sigma") ? (j["within_3_sigma"].get<bool>() ? "true" : "false") : "") << ','
      << num(pr["spectral"]) << ',' << num(pr["mc"]) << ',' << num(pr["mc_stderr"]) << ",\"" << warnings << "\"\n";
}

void write_text(std::ostream& out, const Json& j) {
  auto line = [&](const char* label, const Json& v) {
    if (v.is_null()) return;
    out << label << std::string(22 - std::string(label).size(), ' ');
    if (v.is_boolean()) {
      out << (v.get<bool>() ? "yes" : "no");
    } else {
      out << text_number(v.get<double>());
    }
    out << '\n';
  };
  out << "asian " << j["inputs"]["kind"].get<std::string>() << ", method " << j["method"].get<std::string>() << '\n';
  line("spectral value", j["value"]);
  line("quad error estimate", j["quad_error_estimate"]);
  line("mc mean", j["mc_mean"]);
  line("mc stderr", j["mc_stderr"]);
  if (j.contains("difference")) {
    line("difference", j["difference"]);
    line("within 3 sigma", j["within_3_sigma"]);
  }
  line("parity (spectral)", j["parity_residual"]["spectral"]);
  line("parity (mc)", j["parity_residual"]["mc"]);
  line("parity (mc stderr)", j["parity_residual"]["mc_stderr"]);
  for (const auto& w : j["warnings"]) out << "warning: " << w.get<std::string>() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Request r;
  CLI::App app{"Continuously monitored arithmetic Asian option pricer"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.add_option("--spot", r.market.spot, "Initial spot S0")->required();
  app.add_option("--strike", r.market.strike, "Strike K")->required();
  app.add_option("--rate", r.market.rate, "Risk-free rate r")->required();
  app.add_option("--vol", r.market.vol, "Volatility sigma")->required();
  app.add_option("--expiry", r.market.expiry, "Maturity t in years")->required();
  app.add_option("--kind", r.kind, "put or call")->check(CLI::IsMember({"put", "call"}));
  app.add_option("--method", r.method, "spectral, mc or both")->check(CLI::IsMember({"spectral", "mc", "both"}));
  app.add_option("--umax", r.u_max, "Spectral cut-off (default: chosen from rel-tol)");
  app.add_option("--rel-tol", r.rel_tol, "Relative tolerance of the spectral quadrature");
  app.add_option("--paths", r.paths, "Monte Carlo paths (antithetic pairs count twice)");
  app.add_option("--steps", r.steps, "Monte Carlo time steps");
  app.add_option("--seed", r.seed, "Monte Carlo seed");
  app.add_option("--output", r.output, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_flag("--parity-check", r.parity_check, "Price put and call spectrally and report the parity residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    validate(r);
    asp_dimensionless dp{};
    if (asp_status s = asp_to_dimensionless(&r.market, &dp); s != ASP_OK) {
      throw Failure(exit_code(s), std::string("invalid market parameters: ") + asp_status_string(s));
    }
    const Json j = to_json(r, dp, price(r));
    if (r.output == "csv") {
      write_csv(out, j);
    } else if (r.output == "text") {
      write_text(out, j);
    } else {
      out << j.dump(2) << '\n';
    }
  } catch (const Failure& f) {
    err << "error: " << f.message() << '\n';
    return f.code();
  }
  return 0;
}

}  // namespace asianspec::cli
