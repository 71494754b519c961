#pragma once

#include <array>
#include <cstdint>

#include "core/pricing.hpp"

namespace asianspec {

enum class OptionKind { Put, Call };

struct MCConfig {
  long long n_paths = 2'000'000;  // antithetic pairs count as two paths
  int n_steps = 252;
  std::uint64_t seed = 42;
  bool antithetic = true;
  int threads = 0;  // 0 uses the hardware concurrency
};

void validate(const MCConfig& cfg);

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long n_paths = 0;
  std::uint64_t seed = 0;
};

struct MCTriple {
  MCEstimate put;
  MCEstimate call;
  MCEstimate parity;
};

/// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

MCEstimate estimate(const MarketParams& m, OptionKind kind, const MCConfig& cfg);

/// Put, call and parity residual from the same simulated averages.
MCTriple estimate_all(const MarketParams& m, const MCConfig& cfg);

/// (call - put) - [(1 - e^{-rt}) / (rt) S0 - e^{-rt} K] on common paths, with
/// its standard error.
MCEstimate parity_residual(const MarketParams& m, const MCConfig& cfg);

}  // namespace asianspec
