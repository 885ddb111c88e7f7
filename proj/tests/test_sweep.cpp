#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "romslab/error.hpp"
#include "romslab/sweep.hpp"

using namespace romslab;

TEST_CASE("single-cell pure absorber matches the closed form") {
  const auto m = make_uniform_medium(0, 1, 1, 1.0, 0.0, 0.0);
  const std::vector<double> s{1.0};
  const auto psi = sweep_direction(m, 0.5, s, 0.0);
  const double exact = 1.0 - (1.0 - std::exp(-2.0)) / 2.0;
  CHECK(psi.cell_avg[0] == doctest::Approx(exact).epsilon(1e-15));
  CHECK(psi.cell_avg[0] == doctest::Approx(0.567668).epsilon(1e-6));
  CHECK(psi.edge_values[0] == 0.0);
  CHECK(psi.edge_values[1] == doctest::Approx(1.0 - std::exp(-2.0)));
}

TEST_CASE("first cell of a ten-cell absorber") {
  const auto m = make_uniform_medium(0, 1, 10, 1.0, 0.0, 0.0);
  const std::vector<double> s(10, 1.0);
  const auto psi = sweep_direction(m, 0.5, s, 0.0);
  const double oracle = oracle::integrate([](double x) { return 1.0 - std::exp(-2.0 * x); }, 0.0, 0.1) / 0.1;
  CHECK(psi.cell_avg[0] == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(psi.cell_avg[0] == doctest::Approx(0.093654).epsilon(1e-5));
}

TEST_CASE("zero source and inflow give zero flux") {
  const auto m = make_uniform_medium(0, 1, 5, 2.0, 0.0, 0.0);
  const std::vector<double> s(5, 0.0);
  for (double mu : {0.3, -0.7}) {
    const auto psi = sweep_direction(m, mu, s, 0.0);
    for (double v : psi.cell_avg) CHECK(v == 0.0);
    for (double v : psi.edge_values) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(sweep_direction(m, 0.0, s, 0.0), Error);
}

TEST_CASE("multi-cell sweeps agree with the analytic solution in both directions") {
  const double sigma = 1.7, q = 0.4, inflow = 0.9;
  const auto m = make_uniform_medium(0, 2, 16, sigma, 0.0, 0.0);
  const std::vector<double> s(16, q);
  for (double mu : {0.05, 0.4, 1.0}) {
    const auto fwd = sweep_direction(m, mu, s, inflow);
    const auto bwd = sweep_direction(m, -mu, s, inflow);
    for (std::size_t i = 0; i < 16; ++i) {
      const double x0 = 0.125 * i, x1 = x0 + 0.125;
      CHECK(fwd.cell_avg[i] == doctest::Approx(oracle::absorber_cell_average(sigma, q, inflow, mu, 0.0, x0, x1)).epsilon(1e-12));
      // Backward march enters at x = 2: mirror coordinates.
      CHECK(bwd.cell_avg[i] ==
            doctest::Approx(oracle::absorber_cell_average(sigma, q, inflow, mu, 0.0, 2.0 - x1, 2.0 - x0)).epsilon(1e-12));
    }
    CHECK(fwd.edge_values[0] == inflow);
    CHECK(bwd.edge_values[16] == inflow);
  }
}

TEST_CASE("escape factor Taylor branch is continuous") {
  CHECK(escape_factor(1e-8) == doctest::Approx(1.0 - 0.5e-8).epsilon(1e-15));
  const double below = escape_factor(std::nextafter(1e-6, 0.0));
  const double above = escape_factor(1e-6);
  CHECK(std::abs(below - above) < 1e-14);
  CHECK(escape_factor(2.0) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("grazing directions stay accurate for thin cells") {
  // tau = 1e-8: cell average equals inflow to first order.
  const auto m = make_uniform_medium(0, 1e-8, 1, 1.0, 0.0, 0.0);
  const std::vector<double> s{0.0};
  const auto psi = sweep_direction(m, 1.0, s, 1.0);
  CHECK(psi.cell_avg[0] == doctest::Approx(1.0 - 0.5e-8).epsilon(1e-15));
}

TEST_CASE("apply_A examples") {
  const auto m = make_uniform_medium(0, 1, 1, 1.0, 0.5, 0.0);  // sigma_r = 1
  CHECK(apply_A(m, 0.5, ScalarFlux{{1.0}})[0] == doctest::Approx(0.567668).epsilon(1e-6));
  CHECK(apply_A(m, 0.5, ScalarFlux{{0.0}})[0] == 0.0);
  const auto absorber = make_uniform_medium(0, 1, 1, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(apply_A(absorber, 0.5, ScalarFlux{{1.0}}), Error);
}

TEST_CASE("boundary term closed form") {
  const auto m = make_uniform_medium(0, 1, 10, 1.0, 0.0, 0.0);
  const BoundarySpec one{ConstantInflow{1.0}, ConstantInflow{0.0}};
  const std::vector<double> zero(10, 0.0);
  const auto psi = sweep_direction(m, 0.5, zero, 1.0);
  CHECK(psi.edge_values[5] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(psi.edge_values[5] == doctest::Approx(0.367879).epsilon(1e-6));
  const auto b = boundary_term(m, 0.5, one);
  for (std::size_t i = 0; i < 10; ++i) {
    // (|mu| / (sigma h)) (e^{-tau_entry} - e^{-tau_exit})
    const double exact = 0.5 / 0.1 * (std::exp(-0.2 * i) - std::exp(-0.2 * (i + 1)));
    CHECK(b[i] == doctest::Approx(exact).epsilon(1e-13));
  }
  const BoundarySpec vacuum{};
  for (double v : boundary_term(m, 0.5, vacuum).values) CHECK(v == 0.0);
  const BoundarySpec linear{LinearInflow{1.0, 0.0}, ConstantInflow{0.0}};
  const auto bl = boundary_term(m, 0.5, linear);
  for (std::size_t i = 0; i < 10; ++i) CHECK(bl[i] == doctest::Approx(0.5 * b[i]).epsilon(1e-15));
  // Left data never reaches mu < 0.
  for (double v : boundary_term(m, -0.5, one).values) CHECK(v == 0.0);
}

TEST_CASE("A_mu is non-expansive in L2(sigma_t)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_medium(rng, 20);
    double mu = 0.001 + u(rng);
    if (u(rng) < 0.5) mu = -mu;
    ScalarFlux phi;
    for (std::size_t i = 0; i < m.cells(); ++i) phi.values.push_back(g(rng));
    CHECK(weighted_l2_norm(apply_A(m, mu, phi), m) <= weighted_l2_norm(phi, m) + 1e-12);
  }
}

TEST_CASE("refining the grid reproduces coarse cell averages") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = oracle::random_medium(rng, 8);
    const std::size_t factor = 2 + trial % 4;
    const auto fine = m.refined(factor);
    std::vector<double> s(m.cells()), sf;
    for (std::size_t i = 0; i < m.cells(); ++i) {
      s[i] = u(rng);
      for (std::size_t k = 0; k < factor; ++k) sf.push_back(s[i]);
    }
    const double mu = (trial % 2 ? -1.0 : 1.0) * (0.02 + u(rng));
    const double inflow = u(rng);
    const auto coarse = sweep_direction(m, mu, s, inflow);
    const auto refined = sweep_direction(fine, mu, sf, inflow);
    for (std::size_t i = 0; i < m.cells(); ++i) {
      double avg = 0.0;
      for (std::size_t k = 0; k < factor; ++k) avg += refined.cell_avg[i * factor + k] * fine.grid().width(i * factor + k);
      avg /= m.grid().width(i);
      CHECK(std::abs(avg - coarse.cell_avg[i]) <= 1e-12 * std::max(1.0, std::abs(coarse.cell_avg[i])));
      CHECK(std::abs(refined.edge_values[i * factor] - coarse.edge_values[i]) <= 1e-12);
    }
  }
}

TEST_CASE("nonnegative data give nonnegative fluxes") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = oracle::random_medium(rng, 15);
    std::vector<double> s(m.cells());
    for (double& v : s) v = u(rng) < 0.3 ? 0.0 : u(rng);
    const double mu = (trial % 2 ? -1.0 : 1.0) * (1e-3 + u(rng));
    const auto psi = sweep_direction(m, mu, s, u(rng));
    for (double v : psi.cell_avg) CHECK(v >= 0.0);
    for (double v : psi.edge_values) CHECK(v >= 0.0);
  }
}

TEST_CASE("optical depths") {
  const auto m = make_medium(SpatialGrid({0.0, 0.5, 2.0}), {2.0, 1.0}, {0.0, 0.0}, {0.0, 0.0});
  const auto tau = optical_depth(m, -0.25);
  CHECK(tau[0] == doctest::Approx(4.0));
  CHECK(tau[1] == doctest::Approx(6.0));
}
