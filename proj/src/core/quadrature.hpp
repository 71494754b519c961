#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace asianspec::quad {

// Nodes and weights on [-1, 1]; orders 2..128 are supported and cached.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int order);

// Integrates f over [lo, hi] with one application of the rule.
template <class T, class F>
T integrate_panel(const GaussLegendreRule& rule, double lo, double hi, F&& f) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  T acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

// Composite rule over n equal panels.
template <class T, class F>
T integrate_panels(const GaussLegendreRule& rule, double lo, double hi, int n_panels, F&& f) {
  const double width = (hi - lo) / n_panels;
  T acc{};
  for (int p = 0; p < n_panels; ++p) {
    acc += integrate_panel<T>(rule, lo + p * width, lo + (p + 1) * width, f);
  }
  return acc;
}

// Flattened composite-rule nodes: absolute abscissae with their weights.
struct NodeSet {
  std::vector<double> x;
  std::vector<double> w;
};

NodeSet composite_nodes(double lo, double hi, int n_panels, int order);

}  // namespace asianspec::quad
