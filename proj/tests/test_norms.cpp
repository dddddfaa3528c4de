#include <doctest.h>

#include <cmath>
#include <functional>

#include "gsr/norms.hpp"
#include "gsr/rng.hpp"

using namespace gsr;

namespace {

// Test-side oracle: golden-section minimization on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  while (b - a > 1e-12) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return f((a + b) / 2.0);
}

Vec random_supported(const GroupStructure& g, const std::vector<int>& support,
                     Rng& rng) {
  Vec v = Vec::Zero(g.p);
  for (int i : support) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

TEST_CASE("dual norm special cases") {
  // singleton groups -> sup norm
  const auto singles = make_group_structure(3, {{0}, {1}, {2}});
  Vec u(3);
  u << -7, 2, 5;
  CHECK(dual_atomic_norm(u, singles) == 7.0);

  // one full group -> euclidean norm
  const auto full = make_group_structure(3, {{0, 1, 2}});
  CHECK(dual_atomic_norm(u, full) == doctest::Approx(u.norm()));

  // overlapping toy case
  const auto g = make_group_structure(2, {{0}, {1}, {0, 1}});
  Vec v(2);
  v << 3, 4;
  CHECK(dual_atomic_norm(v, g) == doctest::Approx(5.0));

  CHECK_THROWS_AS(dual_atomic_norm(u, g), std::invalid_argument);

  // zero iff u vanishes on the cover
  const auto partial = make_group_structure(3, {{0, 1}});
  Vec w = Vec::Zero(3);
  w[2] = 9.0;
  CHECK(dual_atomic_norm(w, partial) == 0.0);
}

TEST_CASE("atomic norm on partitions is the sum of group norms") {
  const auto g = make_scenario(Scenario::Disjoint, 6, 5);
  Rng rng(21);
  Vec x(g.p);
  for (int i = 0; i < g.p; ++i) x[i] = rng.uniform(-1.0, 1.0);

  double expected = 0.0;
  for (const auto& grp : g.groups) {
    double s = 0.0;
    for (int i : grp) s += x[i] * x[i];
    expected += std::sqrt(s);
  }
  const auto res = atomic_norm(x, g);
  CHECK(res.value == doctest::Approx(expected).epsilon(1e-12));

  // iterative route agrees with the closed form
  const auto admm = atomic_norm_admm(x, g, 1e-10);
  CHECK(admm.converged);
  CHECK(admm.value == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("atomic norm of a single-group vector is its euclidean norm") {
  const auto g = make_group_structure(5, {{0, 1, 2}, {2, 3, 4}});
  Vec x = Vec::Zero(5);
  x[0] = 3.0;
  x[1] = -4.0;
  const auto res = atomic_norm(x, g, 1e-10);
  CHECK(res.value == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("two-group overlap matches the one-dimensional oracle") {
  // groups {0,1}, {1,2}, x = (1,1,1): the only freedom is the split t of the
  // shared coordinate, minimize sqrt(1+t^2) + sqrt(1+(1-t)^2).
  const auto g = make_group_structure(3, {{0, 1}, {1, 2}});
  Vec x = Vec::Ones(3);

  const double oracle = golden_min(
      [](double t) {
        return std::sqrt(1.0 + t * t) + std::sqrt(1.0 + (1.0 - t) * (1.0 - t));
      },
      0.0, 1.0);
  CHECK(oracle == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));

  const auto res = atomic_norm(x, g, 1e-10);
  CHECK(res.value == doctest::Approx(oracle).epsilon(1e-7));

  // optimal split is t = 1/2
  const auto& latents = res.decomposition.latents;
  CHECK(latents[0][1] == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(latents[1][0] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("decomposition reconstructs the input") {
  const auto g = make_group_structure(4, {{0, 1, 2}, {1, 2, 3}});
  Rng rng(5);
  Vec x(4);
  for (int i = 0; i < 4; ++i) x[i] = rng.uniform(-1.0, 1.0);
  const auto res = atomic_norm(x, g, 1e-10);
  CHECK((res.decomposition.sum() - x).norm() <= 1e-10 * x.norm());
  CHECK(res.decomposition.value == doctest::Approx(res.value));
}

TEST_CASE("support outside the cover is rejected") {
  const auto g = make_group_structure(4, {{0, 1}});
  Vec x = Vec::Zero(4);
  x[3] = 1.0;
  CHECK_THROWS_AS(atomic_norm(x, g), std::invalid_argument);
}

TEST_CASE("duality inequality on random pairs") {
  const auto g = make_group_structure(6, {{0, 1, 2}, {2, 3}, {3, 4, 5}, {1, 4}});
  const auto support = g.cover();
  Rng rng(99);
  for (int t = 0; t < 500; ++t) {
    const Vec x = random_supported(g, support, rng);
    Vec u(g.p);
    for (int i = 0; i < g.p; ++i) u[i] = rng.uniform(-1.0, 1.0);
    const double lhs = x.dot(u);
    const double rhs = atomic_norm(x, g, 1e-8).value * dual_atomic_norm(u, g);
    CHECK(lhs <= rhs + 1e-6 * std::max(1.0, rhs));
  }
}

TEST_CASE("positive homogeneity and triangle inequality") {
  const auto g = make_group_structure(5, {{0, 1, 2}, {2, 3, 4}});
  const auto support = g.cover();
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const Vec x = random_supported(g, support, rng);
    const Vec y = random_supported(g, support, rng);
    const double c = rng.uniform(0.0, 5.0);

    const double nx = atomic_norm(x, g).value;
    const double ny = atomic_norm(y, g).value;
    const double ncx = atomic_norm((c * x).eval(), g).value;
    const double nxy = atomic_norm((x + y).eval(), g).value;

    CHECK(ncx == doctest::Approx(c * nx).epsilon(1e-6));
    CHECK(nxy <= nx + ny + 1e-6 * std::max(1.0, nx + ny));
  }
}

TEST_CASE("norm-ball bound: ||v|| <= sqrt(k) * dual norm for supported v") {
  Rng rng(13);
  for (auto kind : {Scenario::Disjoint, Scenario::Chain, Scenario::NearComplete}) {
    ScenarioParams params;
    params.overlap = 2;
    const auto g = make_scenario(kind, 8, 5, params);
    for (int t = 0; t < 200; ++t) {
      const int k = 1 + static_cast<int>(rng.below(8));
      const auto a = random_active_set(g, k, 1000 + static_cast<std::uint64_t>(t));
      const Vec v = random_supported(g, union_support(a), rng);
      CHECK(v.norm() <= std::sqrt(double(k)) * dual_atomic_norm(v, g) + 1e-12);
    }
  }
}

TEST_CASE("unit atoms have dual norm at most one") {
  const auto g = make_group_structure(6, {{0, 1, 2}, {2, 3}, {3, 4, 5}});
  Rng rng(31);
  for (int m = 0; m < g.num_groups(); ++m) {
    for (int t = 0; t < 50; ++t) {
      Vec a = Vec::Zero(g.p);
      for (int i : g.groups[m]) a[i] = rng.gaussian();
      const double nrm = a.norm();
      if (nrm == 0.0) continue;
      a /= nrm;
      CHECK(dual_atomic_norm(a, g) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("decomposition value dominates the norm-ball lower bound") {
  // value >= ||x|| / sqrt(#nonzero latents)
  const auto g = make_group_structure(5, {{0, 1, 2}, {1, 2, 3}, {3, 4}});
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    Vec x = Vec::Zero(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.uniform(-1.0, 1.0);
    const auto res = atomic_norm(x, g, 1e-9);
    int active_latents = 0;
    for (const auto& v : res.decomposition.latents)
      active_latents += v.norm() > 1e-10 ? 1 : 0;
    if (active_latents == 0) continue;
    CHECK(res.value >= x.norm() / std::sqrt(double(active_latents)) - 1e-7);
  }
}
