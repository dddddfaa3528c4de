#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gsr/norms.hpp"
#include "gsr/parallel.hpp"
#include "gsr/rng.hpp"
#include "gsr/sensing.hpp"
#include "gsr/solver.hpp"

using namespace gsr;

namespace {

GroupStructure random_overlapping_structure(int p, int m, Rng& rng) {
  std::vector<std::vector<int>> groups;
  std::vector<char> covered(static_cast<std::size_t>(p), 0);
  for (int g = 0; g < m; ++g) {
    const int size = 2 + static_cast<int>(rng.below(4));
    auto idx = rng.sample_indices(p, size);
    for (int i : idx) covered[static_cast<std::size_t>(i)] = 1;
    groups.push_back(std::move(idx));
  }
  // patch uncovered coordinates into the last group so signals can live anywhere
  for (int i = 0; i < p; ++i)
    if (!covered[static_cast<std::size_t>(i)]) groups.back().push_back(i);
  return make_group_structure(p, std::move(groups));
}

}  // namespace

TEST_CASE("block soft threshold closed form") {
  Vec v(2);
  v << 3, 4;
  const Vec shrunk = block_soft_threshold(v, 2.5);
  CHECK(shrunk[0] == doctest::Approx(1.5));
  CHECK(shrunk[1] == doctest::Approx(2.0));

  CHECK(block_soft_threshold(v, 5.0).norm() == 0.0);
  CHECK(block_soft_threshold(v, 6.0).norm() == 0.0);
  CHECK(block_soft_threshold(v, 0.0) == v);
  CHECK(block_soft_threshold(Vec::Zero(3), 1.0).norm() == 0.0);
  CHECK_THROWS_AS(block_soft_threshold(v, -1.0), std::invalid_argument);
}

TEST_CASE("lambda = 0 on a square invertible system solves least squares") {
  const auto g = make_scenario(Scenario::Disjoint, 2, 5);
  const auto e = gaussian_matrix(10, 10, 17);
  Rng rng(3);
  Vec x_star(10);
  for (int i = 0; i < 10; ++i) x_star[i] = rng.uniform(-1.0, 1.0);
  const Observation obs = measure(e, x_star);

  SolverConfig cfg;
  cfg.max_iter = 5000;
  const auto sp = solve_group_lasso(e, obs, g, 0.0, cfg);
  CHECK(sp.residual <= 1e-8);

  const auto ad = admm_oracle(e, obs, g, 0.0, cfg);
  CHECK(ad.residual <= 1e-8);
}

TEST_CASE("large lambda yields the zero solution") {
  const auto g = make_group_structure(6, {{0, 1, 2}, {2, 3}, {3, 4, 5}});
  const auto e = gaussian_matrix(8, 6, 5);
  Rng rng(6);
  Vec x(6);
  for (int i = 0; i < 6; ++i) x[i] = rng.uniform(-1.0, 1.0);
  const Observation obs = measure(e, x);

  Vec phity(6);
  kernels::matvec_transpose(e.matrix, obs.y, phity);
  const double lambda = 1.01 * dual_atomic_norm(phity, g);

  CHECK(solve_group_lasso(e, obs, g, lambda).x_hat.norm() == 0.0);
  CHECK(admm_oracle(e, obs, g, lambda).x_hat.norm() <= 1e-9);

  const double lam_inf = 1.01 * phity.lpNorm<Eigen::Infinity>();
  CHECK(lasso_solve(e, obs, lam_inf).x_hat.norm() == 0.0);
}

TEST_CASE("proximal gradient and ADMM reach the same objective") {
  Rng rng(2025);
  for (int inst = 0; inst < 6; ++inst) {
    const int p = 12 + static_cast<int>(rng.below(18));
    const int m = 3 + static_cast<int>(rng.below(5));
    const auto g = random_overlapping_structure(p, m, rng);
    const int n = std::max(p / 2, 4);
    const auto e = gaussian_matrix(n, p, 100 + static_cast<std::uint64_t>(inst));
    Vec x(p);
    for (int i = 0; i < p; ++i) x[i] = rng.uniform(-1.0, 1.0);
    const Observation obs = measure(e, x);

    Vec phity(p);
    kernels::matvec_transpose(e.matrix, obs.y, phity);
    const double lambda = 0.1 * dual_atomic_norm(phity, g);

    SolverConfig cfg;
    cfg.max_iter = 20000;
    const auto sp = solve_group_lasso(e, obs, g, lambda, cfg);
    const auto ad = admm_oracle(e, obs, g, lambda, cfg);
    REQUIRE(sp.converged);
    REQUIRE(ad.converged);
    const double fo = sp.objective_trace.back();
    const double fa = ad.objective_trace.back();
    CHECK(std::abs(fo - fa) <= 1e-6 * std::max(1.0, std::abs(fa)));
  }
}

TEST_CASE("lasso_solve equals solve_group_lasso on singleton groups") {
  Rng rng(88);
  for (int inst = 0; inst < 10; ++inst) {
    const int p = 8 + static_cast<int>(rng.below(10));
    const int n = p / 2 + 2;
    const auto e = gaussian_matrix(n, p, 200 + static_cast<std::uint64_t>(inst));
    Vec x(p);
    for (int i = 0; i < p; ++i) x[i] = rng.uniform(-1.0, 1.0);
    const Observation obs = measure(e, x);
    const double lambda = 0.3;

    const auto direct = lasso_solve(e, obs, lambda);
    const auto viaGroups = solve_group_lasso(e, obs, singleton_groups(p), lambda);
    CHECK((direct.x_hat - viaGroups.x_hat).norm() <= 1e-12);
  }
}

TEST_CASE("lasso cross-checks against the ADMM oracle") {
  const auto e = gaussian_matrix(12, 20, 9);
  Rng rng(10);
  Vec x = Vec::Zero(20);
  for (int i = 0; i < 5; ++i) x[static_cast<int>(rng.below(20))] = rng.uniform(-1.0, 1.0);
  const Observation obs = measure(e, x);
  const double lambda = 0.2;

  SolverConfig cfg;
  cfg.max_iter = 20000;
  const auto sp = lasso_solve(e, obs, lambda, cfg);
  const auto ad = admm_oracle(e, obs, singleton_groups(20), lambda, cfg);
  CHECK(std::abs(sp.objective_trace.back() - ad.objective_trace.back()) <=
        1e-6 * std::max(1.0, ad.objective_trace.back()));
}

TEST_CASE("identity measurements recover the signal exactly") {
  const auto g = make_scenario(Scenario::Disjoint, 3, 4);
  MeasurementEnsemble id;
  id.n = id.p = g.p;
  id.matrix = RowMat::Identity(g.p, g.p);
  const auto a = random_active_set(g, 2, 4);
  const Vec x_star = sample_signal(a, ValueLaw::Uniform01, 5);
  const Observation obs = measure(id, x_star);

  const auto res = recover(id, obs, g, {}, RecoveryMode::Exact, &x_star);
  CHECK(res.relative_error <= 1e-8);
}

TEST_CASE("monotone variant keeps the objective trace non-increasing") {
  const auto g = make_scenario(Scenario::Chain, 5, 4, {.overlap = 1});
  const auto e = gaussian_matrix(10, g.p, 12);
  const auto a = random_active_set(g, 2, 13);
  const Observation obs = measure(e, sample_signal(a, ValueLaw::UniformSym, 14));

  SolverConfig cfg;
  cfg.nonmonotone_window = 1;
  const auto res = solve_group_lasso(e, obs, g, 0.05, cfg);
  for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
    CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12);
}

TEST_CASE("x_hat is exactly the collapse of the latent iterate") {
  const auto g = make_scenario(Scenario::Chain, 6, 5, {.overlap = 2});
  const auto rep = replicate(g);
  const auto e = gaussian_matrix(15, g.p, 21);
  const auto a = random_active_set(g, 2, 22);
  const Observation obs = measure(e, sample_signal(a, ValueLaw::Uniform01, 23));

  const auto res = solve_group_lasso(e, obs, g, 0.1);
  CHECK(res.x_hat == rep.collapse(res.latents));
}

TEST_CASE("recovery is scale equivariant") {
  const auto g = make_scenario(Scenario::Disjoint, 10, 4);
  const auto e = gaussian_matrix(25, g.p, 31);  // above the (10, 1, 4) bound
  const auto a = random_active_set(g, 1, 32);
  const Vec x_star = sample_signal(a, ValueLaw::Uniform01, 33);
  const Observation obs = measure(e, x_star);

  Observation scaled;
  const double c = 7.5;
  scaled.y = c * obs.y;

  const auto r1 = recover(e, obs, g);
  const auto r2 = recover(e, scaled, g);
  CHECK((r2.x_hat - c * r1.x_hat).norm() <= 1e-6 * c * std::max(1.0, r1.x_hat.norm()));
}

TEST_CASE("noisy mode applies the discrepancy principle") {
  const auto g = make_scenario(Scenario::Disjoint, 5, 4);
  const auto a = random_active_set(g, 2, 41);
  const Vec x_star = sample_signal(a, ValueLaw::Uniform01, 42);
  const auto e = gaussian_matrix(3 * g.p, g.p, 43);  // overdetermined, robust regime
  const Vec clean = (e.matrix * x_star).eval();
  const double delta = 0.01 * clean.norm();
  const Observation obs = measure(e, x_star, delta, 44);

  const auto res = recover(e, obs, g, {}, RecoveryMode::Noisy, &x_star);
  CHECK(res.feasible);
  CHECK(res.residual <= delta);
  // Corollary-style error bound with eps = 0.5: ||x_hat - x*|| <= 2 delta / eps
  CHECK((res.x_hat - x_star).norm() <= 2.0 * delta / 0.5);
}

TEST_CASE("iteration caps are flagged, not thrown") {
  const auto g = make_scenario(Scenario::Disjoint, 4, 4);
  const auto e = gaussian_matrix(10, g.p, 51);
  const auto a = random_active_set(g, 2, 52);
  const Observation obs = measure(e, sample_signal(a, ValueLaw::Uniform01, 53));

  SolverConfig cfg;
  cfg.max_iter = 1;
  cfg.rel_tol = 1e-16;
  const auto res = solve_group_lasso(e, obs, g, 1e-6, cfg);
  CHECK_FALSE(res.converged);

  cfg.admm_max_iter = 1;
  const auto oracle = admm_oracle(e, obs, g, 1e-6, cfg);
  CHECK_FALSE(oracle.converged);
}

TEST_CASE("support of an exact recovery stays inside the union support") {
  const auto g = make_scenario(Scenario::Disjoint, 8, 5);
  const auto a = random_active_set(g, 2, 61);
  const Vec x_star = sample_signal(a, ValueLaw::Uniform01, 62);
  const auto e = gaussian_matrix(30, g.p, 63);
  const Observation obs = measure(e, x_star);

  const auto res = recover(e, obs, g, {}, RecoveryMode::Exact, &x_star);
  REQUIRE(res.relative_error <= 1e-4);

  const auto support = union_support(a);
  const std::set<int> s(support.begin(), support.end());
  const double thresh = 1e-6 * res.x_hat.lpNorm<Eigen::Infinity>();
  for (int i = 0; i < g.p; ++i)
    if (std::abs(res.x_hat[i]) > thresh) CHECK(s.count(i) == 1);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.lambda_decay = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.alpha_min = cfg.alpha_max;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.nonmonotone_window = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
