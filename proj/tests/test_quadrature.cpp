#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "recoherence/quadrature.hpp"

using namespace recoherence;
using Catch::Approx;

TEST_CASE("gauss-legendre weights sum to the interval length") {
  for (int n : {1, 2, 3, 5, 8, 12, 20, 48}) {
    const QuadratureRule rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    double total = 0.0;
    for (double w : rule.weights) total += w;
    CHECK(total == Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("gauss-legendre nodes are symmetric and inside (-1, 1)") {
  const QuadratureRule rule = gauss_legendre(9);
  for (int i = 0; i < 9; ++i) {
    CHECK(rule.nodes[i] == Approx(-rule.nodes[8 - i]).margin(1e-15));
    CHECK(std::abs(rule.nodes[i]) < 1.0);
  }
}

TEST_CASE("degree 2n-1 polynomials integrate exactly") {
  const int n = 6;
  const QuadratureRule rule = gauss_legendre(n);
  for (int k = 0; k <= 2 * n - 1; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += rule.weights[i] * std::pow(rule.nodes[i], k);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(acc == Approx(exact).margin(1e-14));
  }
}

TEST_CASE("panel rule integrates a smooth function to machine precision") {
  const double got =
      panel_integrate([](double x) { return std::exp(x); }, -1.0, 2.0, 4, 12);
  CHECK(got == Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("panel nodes partition the interval") {
  const PanelNodes pn = panel_nodes(0.0, 1.0, 5, 3);
  REQUIRE(pn.t.size() == 15);
  double total = 0.0;
  for (double w : pn.w) total += w;
  CHECK(total == Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 1; i < pn.t.size(); ++i) CHECK(pn.t[i] > pn.t[i - 1]);
}

TEST_CASE("two-point panels converge at fourth order") {
  auto err = [](int panels) {
    return std::abs(panel_integrate([](double x) { return std::sin(x); }, 0.0,
                                    1.0, panels, 2) -
                    (1.0 - std::cos(1.0)));
  };
  const double order = std::log2(err(8) / err(16));
  CHECK(order > 3.5);
  CHECK(order < 4.5);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS(panel_nodes(0.0, 1.0, 0, 3), std::invalid_argument);
}
