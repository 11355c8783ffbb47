#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "ssr/energy_grid.hpp"

using namespace ssr;
using Catch::Approx;

namespace {

// Quadrature oracle for moments of the truncated thermal distribution
// eps^2 exp(-eps) on [0, eps_max] (composite Simpson, independent of the
// grid construction).
double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double truncated_moment(double eps_max, int k) {
  auto w = [](double e) { return e * e * std::exp(-e); };
  const double z = simpson(w, 0.0, eps_max);
  return simpson([&](double e) { return std::pow(e, k) * w(e); }, 0.0, eps_max) / z;
}

}  // namespace

TEST_CASE("energy grid moments", "[grid]") {
  const EnergyClassGrid g = build_energy_grid(200, 12.0);

  SECTION("mean epsilon is 3 within 1%") {
    REQUIRE(g.mean_epsilon() == Approx(3.0).epsilon(0.01));
  }

  SECTION("variance is 3 within 3%") {
    REQUIRE(g.variance_epsilon() == Approx(3.0).epsilon(0.03));
  }

  SECTION("grid moments match the quadrature oracle") {
    const double m1 = truncated_moment(12.0, 1);
    const double m2 = truncated_moment(12.0, 2);
    REQUIRE(g.mean_epsilon() == Approx(m1).epsilon(1e-3));
    REQUIRE(g.variance_epsilon() == Approx(m2 - m1 * m1).epsilon(5e-3));
  }
}

TEST_CASE("energy grid construction", "[grid]") {
  SECTION("weights are normalized to 1e-12 for any grid") {
    for (std::size_t n : {2u, 7u, 50u, 200u, 1000u}) {
      const EnergyClassGrid g = build_energy_grid(n, 12.0);
      double sum = 0.0;
      for (double w : g.weights) sum += w;
      REQUIRE(sum == Approx(1.0).margin(1e-12));
    }
  }

  SECTION("epsilons strictly increasing and positive") {
    const EnergyClassGrid g = build_energy_grid(64, 9.0);
    REQUIRE(g.epsilons.front() > 0.0);
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g.epsilons[i] > g.epsilons[i - 1]);
  }

  SECTION("degenerate two-class grid still normalized and monotone") {
    const EnergyClassGrid g = build_energy_grid(2, 12.0);
    REQUIRE(g.size() == 2);
    REQUIRE(g.weights[0] + g.weights[1] == Approx(1.0).margin(1e-12));
    REQUIRE(g.epsilons[1] > g.epsilons[0]);
  }

  SECTION("resolution errors") {
    REQUIRE_THROWS_AS(build_energy_grid(1, 12.0), input_error);
    REQUIRE_THROWS_AS(build_energy_grid(100, 2.5), input_error);
    REQUIRE_THROWS_AS(build_energy_grid(100, 0.0), input_error);
  }
}
