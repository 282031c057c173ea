#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace recoherence {

struct QuadratureRule {
  std::vector<double> nodes;   // on [-1, 1]
  std::vector<double> weights; // sum to 2
};

// Gauss-Legendre nodes and weights by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

struct PanelNodes {
  std::vector<double> t;
  std::vector<double> w;
};

// Composite rule: `panels` equal subintervals of [a, b], `points`-point
// Gauss-Legendre on each.
inline PanelNodes panel_nodes(double a, double b, int panels, int points) {
  if (panels < 1) throw std::invalid_argument("panel_nodes: panels must be >= 1");
  const QuadratureRule rule = gauss_legendre(points);
  PanelNodes out;
  out.t.reserve(static_cast<std::size_t>(panels) * points);
  out.w.reserve(static_cast<std::size_t>(panels) * points);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int k = 0; k < points; ++k) {
      out.t.push_back(lo + 0.5 * h * (rule.nodes[k] + 1.0));
      out.w.push_back(0.5 * h * rule.weights[k]);
    }
  }
  return out;
}

template <typename F>
double panel_integrate(F&& f, double a, double b, int panels, int points) {
  const PanelNodes pn = panel_nodes(a, b, panels, points);
  double sum = 0.0;
  for (std::size_t i = 0; i < pn.t.size(); ++i) sum += pn.w[i] * f(pn.t[i]);
  return sum;
}

} // namespace recoherence
