#include "core/quadrature.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <numbers>

#include "core/error.hpp"

namespace asianspec::quad {
namespace {

constexpr int kMaxOrder = 128;

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 2 || order > kMaxOrder) {
    fail(ErrorCode::InvalidArgument, "Gauss-Legendre order out of range: " + std::to_string(order));
  }
  static std::array<std::unique_ptr<GaussLegendreRule>, kMaxOrder + 1> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(order));
  return *slot;
}

NodeSet composite_nodes(double lo, double hi, int n_panels, int order) {
  const auto& rule = gauss_legendre(order);
  NodeSet set;
  set.x.reserve(static_cast<std::size_t>(n_panels) * order);
  set.w.reserve(static_cast<std::size_t>(n_panels) * order);
  const double width = (hi - lo) / n_panels;
  for (int p = 0; p < n_panels; ++p) {
    const double a = lo + p * width;
    const double half = 0.5 * width;
    const double mid = a + half;
    for (int i = 0; i < order; ++i) {
      set.x.push_back(mid + half * rule.nodes[i]);
      set.w.push_back(half * rule.weights[i]);
    }
  }
  return set;
}

}  // namespace asianspec::quad
