#include "core/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "core/error.hpp"

namespace asianspec {
namespace {

constexpr long long kBlock = 4096;

// Running mean and sum of squared deviations, merged in a fixed order.
struct Moments {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

// Standard normals for one path: block j of the stream (seed, path) yields
// four 32-bit words, i.e. two 64-bit uniforms and two Box-Muller normals.
class PathNormals {
 public:
  PathNormals(std::uint64_t seed, std::uint64_t path)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_lo_(static_cast<std::uint32_t>(path)),
        path_hi_(static_cast<std::uint32_t>(path >> 32)) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto w = philox4x32({block_, 0u, path_lo_, path_hi_}, key_);
    ++block_;
    const double u1 = to_unit(w[0], w[1]);
    const double u2 = to_unit(w[2], w[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  // 53 random bits mapped into (0, 1].
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t path_lo_;
  std::uint32_t path_hi_;
  std::uint32_t block_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct Simulation {
  const MarketParams& m;
  const MCConfig& cfg;
  double drift;
  double diffusion;

  Simulation(const MarketParams& market, const MCConfig& config)
      : m(market), cfg(config) {
    const double dt = m.expiry / cfg.n_steps;
    drift = (m.rate - 0.5 * m.vol * m.vol) * dt;
    diffusion = m.vol * std::sqrt(dt);
  }

  // Trapezoidal averages of S along the path driven by +Z and by -Z.
  void averages(std::uint64_t index, double& plus, double& minus) const {
    PathNormals normals(cfg.seed, index);
    double xp = 0.0;
    double xm = 0.0;
    double sum_p = 0.5;
    double sum_m = 0.5;
    for (int i = 1; i <= cfg.n_steps; ++i) {
      const double z = diffusion * normals.next();
      xp += drift + z;
      xm += drift - z;
      const double w = i == cfg.n_steps ? 0.5 : 1.0;
      sum_p += w * std::exp(xp);
      sum_m += w * std::exp(xm);
    }
    plus = m.spot * sum_p / cfg.n_steps;
    minus = m.spot * sum_m / cfg.n_steps;
  }
};

// Runs f(sample index, moments) over all samples in fixed blocks and merges
// the per-block moments in block order, so threads do not change the result.
template <class F>
std::vector<Moments> run_blocks(long long n_samples, int width, int threads, F&& f) {
  const long long n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<std::vector<Moments>> per_block(static_cast<std::size_t>(n_blocks), std::vector<Moments>(width));
  std::atomic<long long> next{0};
  auto worker = [&] {
    for (;;) {
      const long long b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const long long end = std::min(n_samples, (b + 1) * kBlock);
      for (long long i = b * kBlock; i < end; ++i) f(i, per_block[static_cast<std::size_t>(b)]);
    }
  };
  const int n_threads = static_cast<int>(std::min<long long>(threads, n_blocks));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<Moments> total(width);
  for (const auto& block : per_block) {
    for (int j = 0; j < width; ++j) total[j].merge(block[j]);
  }
  return total;
}

int thread_count(const MCConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void check_market(const MarketParams& m) {
  if (!std::isfinite(m.spot) || !std::isfinite(m.strike) || !std::isfinite(m.rate) || !std::isfinite(m.vol) ||
      !std::isfinite(m.expiry)) {
    fail(ErrorCode::InvalidArgument, "market parameters must be finite");
  }
  if (!(m.spot > 0.0)) fail(ErrorCode::Domain, "spot must be positive");
  if (!(m.strike >= 0.0)) fail(ErrorCode::Domain, "strike must be non-negative");
  if (!(m.vol > 0.0)) fail(ErrorCode::Domain, "vol must be positive");
  if (!(m.expiry > 0.0)) fail(ErrorCode::Domain, "expiry must be positive");
}

// Sample columns: 0 put, 1 call, 2 parity residual. With antithetic pairs a
// sample is the mean over the pair.
std::vector<Moments> simulate(const MarketParams& m, const MCConfig& cfg) {
  validate(cfg);
  check_market(m);
  const Simulation sim(m, cfg);
  const double discount = std::exp(-m.rate * m.expiry);
  const double adjustment = average_discount(m.rate * m.expiry) * m.spot - discount * m.strike;
  auto payoffs = [&](double a, double& put, double& call, double& parity) {
    put = discount * std::max(m.strike - a, 0.0);
    call = discount * std::max(a - m.strike, 0.0);
    parity = call - put - adjustment;
  };

  if (cfg.antithetic) {
    return run_blocks(cfg.n_paths / 2, 3, thread_count(cfg), [&](long long i, std::vector<Moments>& acc) {
      double a_plus = 0.0;
      double a_minus = 0.0;
      sim.averages(static_cast<std::uint64_t>(i), a_plus, a_minus);
      double p1, c1, d1, p2, c2, d2;
      payoffs(a_plus, p1, c1, d1);
      payoffs(a_minus, p2, c2, d2);
      acc[0].add(0.5 * (p1 + p2));
      acc[1].add(0.5 * (c1 + c2));
      acc[2].add(0.5 * (d1 + d2));
    });
  }
  return run_blocks(cfg.n_paths, 3, thread_count(cfg), [&](long long i, std::vector<Moments>& acc) {
    double a_plus = 0.0;
    double unused = 0.0;
    sim.averages(static_cast<std::uint64_t>(i), a_plus, unused);
    double p, c, d;
    payoffs(a_plus, p, c, d);
    acc[0].add(p);
    acc[1].add(c);
    acc[2].add(d);
  });
}

MCEstimate to_estimate(const Moments& mo, const MCConfig& cfg) {
  return {mo.mean, mo.std_error(), cfg.n_paths, cfg.seed};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2511F53;
  constexpr std::uint64_t kM1 = 0xCD9E8D57;
  constexpr std::uint32_t kW0 = 0x9E3779B9;
  constexpr std::uint32_t kW1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

void validate(const MCConfig& cfg) {
  if (cfg.n_paths < 1000) fail(ErrorCode::InvalidArgument, "n_paths must be at least 1000");
  if (cfg.antithetic && cfg.n_paths % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "n_paths must be even with antithetic sampling");
  }
  if (cfg.n_steps < 50) fail(ErrorCode::InvalidArgument, "n_steps must be at least 50");
  if (cfg.threads < 0) fail(ErrorCode::InvalidArgument, "threads must be non-negative");
}

MCEstimate estimate(const MarketParams& m, OptionKind kind, const MCConfig& cfg) {
  const auto mo = simulate(m, cfg);
  return to_estimate(mo[kind == OptionKind::Put ? 0 : 1], cfg);
}

MCTriple estimate_all(const MarketParams& m, const MCConfig& cfg) {
  const auto mo = simulate(m, cfg);
  return {to_estimate(mo[0], cfg), to_estimate(mo[1], cfg), to_estimate(mo[2], cfg)};
}

MCEstimate parity_residual(const MarketParams& m, const MCConfig& cfg) {
  return to_estimate(simulate(m, cfg)[2], cfg);
}

}  // namespace asianspec
