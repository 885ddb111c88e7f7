#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "romslab/error.hpp"
#include "romslab/medium.hpp"

using namespace romslab;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected romslab::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("make_medium derives lambda and sigma_r") {
  const auto m = make_medium(SpatialGrid::uniform(0, 1, 2), {1, 1}, {0.3, 0.5}, {1, 1});
  CHECK(m.lambda() == doctest::Approx(0.5));
  CHECK(m.sigma_r()[0] == doctest::Approx(0.6));
  CHECK(m.sigma_r()[1] == doctest::Approx(1.0));
  CHECK_FALSE(m.pure_absorber());
}

TEST_CASE("pure absorber has no sigma_r") {
  const auto m = make_medium(SpatialGrid::uniform(0, 1, 2), {1, 1}, {0, 0}, {1, 1});
  CHECK(m.lambda() == 0.0);
  CHECK(m.pure_absorber());
  CHECK(code_of([&] { (void)m.sigma_r(); }) == ErrorCode::PureAbsorber);
}

TEST_CASE("make_medium rejects inadmissible data") {
  const auto g1 = SpatialGrid::uniform(0, 1, 1);
  CHECK(code_of([&] { make_medium(g1, {1.0}, {1.0}, {0.0}); }) == ErrorCode::LambdaAtLeastOne);
  CHECK(code_of([&] { make_medium(g1, {0.0}, {0.0}, {0.0}); }) == ErrorCode::NonPositiveSigmaT);
  CHECK(code_of([&] { make_medium(g1, {1.0}, {-0.1}, {0.0}); }) == ErrorCode::NegativeData);
  CHECK(code_of([&] { make_medium(g1, {1.0}, {0.1}, {-1.0}); }) == ErrorCode::NegativeData);
  CHECK(code_of([&] { make_medium(g1, {1.0, 1.0}, {0.1}, {0.0}); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([&] { SpatialGrid({0.0, 0.5, 0.5}); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([&] { SpatialGrid({0.0}); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("admissible random media give lambda < 1 and sigma_r <= sigma_t") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_medium(rng);
    CHECK(m.lambda() >= 0.0);
    CHECK(m.lambda() < 1.0);
    for (std::size_t i = 0; i < m.cells(); ++i) CHECK(m.sigma_r()[i] <= m.sigma_t()[i]);
  }
}

TEST_CASE("weighted L2 norm examples") {
  const auto unit = make_uniform_medium(0, 1, 4, 1.0, 0.0, 0.0);
  CHECK(weighted_l2_norm(ScalarFlux{{1, 1, 1, 1}}, unit) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(weighted_l2_norm(ScalarFlux{{2, 2, 2, 2}}, unit) == doctest::Approx(2.0).epsilon(1e-15));
  const auto thick = make_uniform_medium(0, 1, 2, 4.0, 0.0, 0.0);
  CHECK(weighted_l2_norm(ScalarFlux{{1, 0}}, thick) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(weighted_l2_norm(ScalarFlux{{0, 0}}, thick) == 0.0);
  CHECK(code_of([&] { weighted_l2_norm(ScalarFlux{{1, 2, 3}}, thick); }) == ErrorCode::GridMismatch);
}

TEST_CASE("weighted L2 norm is a norm on random pairs") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = oracle::random_medium(rng);
    ScalarFlux a, b, sum, scaled;
    const double c = g(rng);
    for (std::size_t i = 0; i < m.cells(); ++i) {
      a.values.push_back(g(rng));
      b.values.push_back(g(rng));
      sum.values.push_back(a[i] + b[i]);
      scaled.values.push_back(c * a[i]);
    }
    CHECK(weighted_l2_norm(sum, m) <= weighted_l2_norm(a, m) + weighted_l2_norm(b, m) + 1e-14);
    CHECK(weighted_l2_norm(scaled, m) == doctest::Approx(std::abs(c) * weighted_l2_norm(a, m)).epsilon(1e-13));
  }
}

TEST_CASE("boundary evaluation examples") {
  BoundarySpec constant{ConstantInflow{1.0}, ConstantInflow{0.0}};
  CHECK(eval_boundary(constant, Side::Left, 0.7) == 1.0);
  BoundarySpec linear{LinearInflow{1.0, 0.0}, ConstantInflow{0.0}};
  CHECK(eval_boundary(linear, Side::Left, 0.25) == doctest::Approx(0.25));
  BoundarySpec table{TabulatedInflow{{0.1, 1.0}, {0.0, 0.9}}, ConstantInflow{0.0}};
  CHECK(eval_boundary(table, Side::Left, 0.55) == doctest::Approx(0.45).epsilon(1e-14));
  // Clamped outside the table.
  CHECK(eval_boundary(table, Side::Left, 0.05) == 0.0);
  CHECK(code_of([&] { eval_boundary(table, Side::Left, -0.3); }) == ErrorCode::WrongHalf);
  CHECK(code_of([&] { eval_boundary(table, Side::Right, 0.3); }) == ErrorCode::WrongHalf);
  CHECK(code_of([&] { inflow_value(table, 0.0); }) == ErrorCode::ZeroMu);
  CHECK(inflow_value(table, -0.5) == 0.0);
}

TEST_CASE("boundary validation rejects malformed tables") {
  BoundarySpec unsorted{TabulatedInflow{{0.5, 0.2}, {1.0, 2.0}}, ConstantInflow{}};
  CHECK(code_of([&] { validate_boundary(unsorted); }) == ErrorCode::InvalidBoundary);
  BoundarySpec ragged{TabulatedInflow{{0.1, 0.2}, {1.0}}, ConstantInflow{}};
  CHECK(code_of([&] { validate_boundary(ragged); }) == ErrorCode::InvalidBoundary);
  BoundarySpec negative{ConstantInflow{-1.0}, ConstantInflow{}};
  CHECK_NOTHROW(validate_boundary(negative));
  CHECK(code_of([&] { validate_boundary(negative, true); }) == ErrorCode::NegativeData);
}

TEST_CASE("tabulated boundary is Lipschitz with the largest table slope") {
  const TabulatedInflow t{{0.1, 0.3, 0.6, 1.0}, {0.0, 0.8, 0.5, 1.3}};
  const double lip = lipschitz_constant(t);
  CHECK(lip == doctest::Approx(4.0));
  double worst = 0.0;
  const int points = 20000;
  for (int i = 0; i < points; ++i) {
    const double a = 0.01 + 0.99 * i / points;
    const double b = a + 1e-4;
    worst = std::max(worst, std::abs(evaluate(t, b) - evaluate(t, a)) / (b - a));
  }
  CHECK(worst <= lip * (1.0 + 1e-9));
  CHECK(worst >= lip * 0.999);
}

TEST_CASE("grid refinement and medium refinement") {
  const auto m = make_medium(SpatialGrid({0.0, 0.3, 1.0}), {1.0, 2.0}, {0.5, 0.2}, {1.0, 0.0});
  const auto r = m.refined(3);
  CHECK(r.cells() == 6);
  CHECK(r.grid().edges()[3] == doctest::Approx(0.3));
  CHECK(r.sigma_t()[4] == 2.0);
  CHECK(r.lambda() == m.lambda());
}
