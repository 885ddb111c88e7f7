#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "romslab/error.hpp"
#include "romslab/operator_lab.hpp"

using namespace romslab;

namespace {

DenseOperator make_op(Eigen::MatrixXd a, Eigen::VectorXd w) { return DenseOperator{std::move(a), std::move(w), "test"}; }

double random_mu(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double mu = 0.005 + 0.995 * u(rng);
  return u(rng) < 0.5 ? -mu : mu;
}

}  // namespace

TEST_CASE("assemble_A single cell") {
  const auto m = make_uniform_medium(0, 1, 1, 1.0, 0.5, 0.0);
  const auto a = assemble_A(m, 0.5);
  CHECK(a.entries(0, 0) == doctest::Approx(0.567668).epsilon(1e-6));
  CHECK(a.weight(0) == 1.0);
  QuadratureSet pair;
  pair.ordinates = {-0.5, 0.5};
  pair.weights = {0.5, 0.5};
  CHECK(assemble_T(m, pair).entries(0, 0) == doctest::Approx(a.entries(0, 0)).epsilon(1e-15));
  const auto absorber = make_uniform_medium(0, 1, 1, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(assemble_A(absorber, 0.5), Error);
}

TEST_CASE("assemble_A is causal") {
  const auto m = make_medium(SpatialGrid::uniform(0, 1, 7), {1, 2, 3, 1, 2, 3, 1}, {0.5, 0.5, 1, 0.5, 1, 1, 0.2},
                             std::vector<double>(7, 0.0));
  const auto fwd = assemble_A(m, 0.3).entries;
  const auto bwd = assemble_A(m, -0.3).entries;
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) {
      CHECK(fwd(i, j) == 0.0);
      CHECK(bwd(j, i) == 0.0);
    }
    CHECK(fwd(i, i) > 0.0);
  }
}

TEST_CASE("weighted norm examples") {
  Eigen::VectorXd w(3);
  w << 0.3, 2.0, 5.0;
  CHECK(weighted_norm(make_op(Eigen::MatrixXd::Identity(3, 3), w)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weighted_norm(make_op(Eigen::MatrixXd::Zero(3, 3), w)) == 0.0);
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 0, 0;
  Eigen::VectorXd w2(2);
  w2 << 4, 1;
  // D^{1/2} A D^{-1/2} has the single off-diagonal entry sqrt(4)/sqrt(1) = 2.
  const double expect = oracle::singular_2x2(0, 2, 0, 0);
  CHECK(expect == doctest::Approx(2.0));
  CHECK(weighted_norm(make_op(a, w2)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("weighted norm matches a full SVD") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 17;
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      w(i) = u(rng);
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    }
    CHECK(weighted_norm(make_op(a, w)) == doctest::Approx(oracle::svd_norm(a, w)).epsilon(1e-9));
    const double p = 2.0 + trial;
    CHECK(oracle::singular_2x2(1, p, 0, 1) == doctest::Approx(oracle::svd_norm((Eigen::Matrix2d() << 1, p, 0, 1).finished(),
                                                                                Eigen::Vector2d::Ones()))
                                                 .epsilon(1e-12));
  }
}

TEST_CASE("weighted norm copes with clustered top singular values") {
  // Orthogonal matrix scaled to have three nearly equal leading singular values.
  const int n = 30;
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Random(n, n)).householderQ();
  Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(n, 0.01, 0.2);
  s(n - 1) = 0.2207520;
  s(n - 2) = 0.2207499;
  s(n - 3) = 0.2206861;
  Eigen::MatrixXd a = q * s.asDiagonal() * q.transpose().reverse();
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  CHECK(weighted_norm(make_op(a, w)) == doctest::Approx(0.2207520).epsilon(1e-10));
  // And on an actual small-delta ROM perturbation.
  const auto m = make_uniform_medium(0, 1, 40, 1.0, 0.5, 0.0);
  const auto ref = assemble_T(m, reference_gauss(0.001, 512));
  const auto part = build_partition(8, 0.001);
  for (std::uint64_t k = 100; k < 120; ++k) {
    const auto t = assemble_T(m, rom_sample(part, 11, k));
    const DenseOperator d{t.entries - ref.entries, t.weight, "delta"};
    CHECK(weighted_norm(d) == doctest::Approx(oracle::svd_norm(d.entries, d.weight)).epsilon(1e-9));
  }
}

TEST_CASE("weighted norm rejects malformed operators") {
  CHECK_THROWS_AS(weighted_norm(make_op(Eigen::MatrixXd::Identity(2, 3), Eigen::VectorXd::Ones(2))), Error);
  CHECK_THROWS_AS(weighted_norm(make_op(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2))), Error);
}

TEST_CASE("A_mu and T have weighted norm at most one") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_medium(rng, 16);
    CHECK(weighted_norm(assemble_A(m, random_mu(rng))) <= 1.0 + 1e-10);
    const auto p = build_partition(2 * (1 + trial % 8), 0.01);
    CHECK(weighted_norm(assemble_T(m, dom_quadrature(p, DomRule::midpoint()))) <= 1.0 + 1e-10);
    CHECK(weighted_norm(assemble_T(m, dom_quadrature(p, DomRule::gauss(1 + trial % 5)))) <= 1.0 + 1e-10);
    CHECK(weighted_norm(assemble_T(m, rom_sample(p, 2, trial))) <= 1.0 + 1e-10);
  }
}

TEST_CASE("weighted adjoint") {
  std::mt19937_64 rng(4);
  const auto m = oracle::random_medium(rng, 9);
  const auto a = assemble_A(m, 0.37);
  const Eigen::MatrixXd star = a.adjoint();
  const Eigen::VectorXd f = Eigen::VectorXd::Random(a.entries.rows());
  const Eigen::VectorXd g = Eigen::VectorXd::Random(a.entries.rows());
  const auto inner = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return (x.array() * y.array() * a.weight.array()).sum(); };
  CHECK(inner(a.entries * f, g) == doctest::Approx(inner(f, star * g)).epsilon(1e-12));
}

TEST_CASE("A_mu is Lipschitz in mu") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = oracle::random_medium(rng, 10);
    const double mu = (trial % 2 ? -1.0 : 1.0) * u(rng);
    const double h = 1e-5;
    const auto a0 = assemble_A(m, mu);
    const auto a1 = assemble_A(m, mu + h);
    const DenseOperator d{(a1.entries - a0.entries) / h, a0.weight, "fd"};
    const double bound = (1.0 + m.max_sigma_t_over_sigma_r()) / std::abs(mu) + 0.1;
    CHECK(weighted_norm(d) <= bound);
  }
}

TEST_CASE("trace of A*A: analytic value, bound, symmetry and refinement") {
  const double mu = 0.5;
  const double analytic = (1.0 / (2.0 * mu)) * (1.0 - (mu / 2.0) * (1.0 - std::exp(-2.0 / mu)));
  CHECK(analytic == doctest::Approx(0.754579).epsilon(1e-6));
  const auto m400 = make_uniform_medium(0, 1, 400, 1.0, 0.5, 0.0);
  const double t400 = trace_AstarA(m400, mu);
  CHECK(std::abs(t400 - analytic) <= 0.01 * analytic);
  CHECK(t400 <= trace_bound(m400, mu));
  CHECK(trace_bound(m400, mu) == doctest::Approx(2.0));
  const auto a = assemble_A(m400, mu);
  CHECK(std::abs(trace_AstarA(a) - trace_AAstar(a)) <= 1e-10);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_medium(rng, 12);
    const double mu_t = random_mu(rng);
    const auto op = assemble_A(m, mu_t);
    CHECK(trace_AstarA(op) <= trace_bound(m, mu_t) * (1.0 + 1e-12));
    CHECK(std::abs(trace_AstarA(op) - trace_AAstar(op)) <= 1e-10 * std::max(1.0, trace_AstarA(op)));
  }
  const auto base = make_medium(SpatialGrid({0.0, 0.4, 1.0}), {2.0, 0.5}, {1.0, 0.25}, {0.0, 0.0});
  const double coarse = trace_AstarA(base.refined(100), 0.3);
  const double fine = trace_AstarA(base.refined(200), 0.3);
  CHECK(std::abs(fine - coarse) <= 0.02 * fine);
}

TEST_CASE("reference T converges under Gauss refinement") {
  const auto m = make_uniform_medium(0, 1, 20, 1.0, 0.5, 0.0);
  const auto a = assemble_T(m, reference_gauss(0.05, 256)).entries;
  const auto b = assemble_T(m, reference_gauss(0.05, 512)).entries;
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
  const auto ref = reference_T(m, 0.05);
  CHECK(ref.order >= 512);
  CHECK(ref.last_change < 1e-11);
}

TEST_CASE("ROM iteration operator is unbiased and its error decays") {
  const auto m = make_uniform_medium(0, 1, 8, 1.0, 0.5, 0.0);
  const auto ref = reference_T(m, 0.05);
  const auto s8 = delta_T_stats(m, build_partition(8, 0.05), 31, 10000, ref.op);
  for (Eigen::Index i = 0; i < s8.mean_delta.size(); ++i) {
    CHECK(std::abs(s8.mean_delta(i)) <= 4.0 * s8.se_delta(i) + 1e-15);
  }
  CHECK(s8.mean_sq_norm >= s8.mean_norm * s8.mean_norm - 3.0 * s8.se_mean_sq);

  const auto s16 = delta_T_stats(m, build_partition(16, 0.05), 31, 2000, ref.op);
  const auto s32 = delta_T_stats(m, build_partition(32, 0.05), 31, 2000, ref.op);
  const double ratio = s32.mean_sq_norm / s16.mean_sq_norm;
  CHECK(ratio >= 0.125 * 0.5);
  CHECK(ratio <= 0.125 * 2.2);

  const double c = 8.0 * s8.max_norm;
  const auto s64 = delta_T_stats(m, build_partition(64, 0.05), 31, 2000, ref.op);
  CHECK(s64.max_norm <= c / 64.0);
}

TEST_CASE("operator statistics do not depend on the thread count") {
  const auto m = make_uniform_medium(0, 1, 10, 1.0, 0.5, 0.0);
  const auto ref = reference_T(m, 0.05);
  const auto p = build_partition(8, 0.05);
  const auto a = delta_T_stats(m, p, 5, 600, ref.op, 1);
  const auto b = delta_T_stats(m, p, 5, 600, ref.op, 4);
  CHECK(a.mean_sq_norm == b.mean_sq_norm);
  CHECK(a.max_norm == b.max_norm);
  CHECK(a.mean_delta == b.mean_delta);
}

TEST_CASE("boundary propagator statistics") {
  const auto m = make_uniform_medium(0, 1, 20, 1.0, 0.5, 0.0);
  const BoundarySpec one{ConstantInflow{1.0}, ConstantInflow{0.0}};
  const auto p = build_partition(8, 0.05);
  const auto s = delta_b_stats(m, one, p, 17, 4000);
  CHECK(s.mean_sq_norm > 0.0);
  for (Eigen::Index i = 0; i < s.mean_delta.size(); ++i) CHECK(std::abs(s.mean_delta(i)) <= 4.0 * s.se_delta(i));

  const auto zero = delta_b_stats(m, BoundarySpec::vacuum(), p, 17, 50);
  CHECK(zero.mean_sq_norm == 0.0);
  CHECK(zero.max_norm == 0.0);

  // The reference boundary term equals the closed-form velocity average.
  const auto ref = reference_boundary_term(m, one, 0.05);
  const double x1 = 0.05;
  const auto integrand = [&](double mu) { return mu / x1 * (1.0 - std::exp(-x1 / mu)); };
  const double exact = oracle::integrate(integrand, 0.05, 1.0, 1e-14) / (2.0 * 0.95);
  CHECK(ref.b[0] == doctest::Approx(exact).epsilon(1e-11));
}
