#include <doctest.h>

#include <cmath>

#include "gsr/bounds.hpp"
#include "gsr/groups.hpp"

using namespace gsr;

TEST_CASE("group bound reproduces the benchmark figures") {
  const auto b1 = group_bound(100, 5, 20);
  CHECK(b1.raw >= 379.5);
  CHECK(b1.raw <= 381.5);
  CHECK(b1.measurements == 381);

  const auto b2 = group_bound(100, 5, 40);
  CHECK(b2.raw >= 620.0);
  CHECK(b2.raw <= 640.0);
  CHECK(b2.raw == doctest::Approx(636.41).epsilon(1e-3));

  const auto b3 = group_bound(16382, 47, 2);
  CHECK(b3.raw >= 1680.0);
  CHECK(b3.raw <= 1695.0);
  CHECK(b3.raw == doctest::Approx(1685.52).epsilon(1e-3));
}

TEST_CASE("group bound edge cases and errors") {
  // log term vanishes when M - k <= 1
  CHECK(group_bound(5, 5, 3).raw == doctest::Approx(5.0 * 3.0 + 15.0));
  CHECK(group_bound(5, 4, 3).raw == doctest::Approx(4.0 * 3.0 + 12.0));

  CHECK_THROWS_AS(group_bound(5, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(group_bound(5, 6, 3), std::invalid_argument);
  CHECK_THROWS_AS(group_bound(5, 2, 0), std::invalid_argument);

  CHECK(group_bound(1, 1, 1).measurements == 2);  // raw = 2, ceil >= 1
}

TEST_CASE("group bound is monotone in k and B") {
  // Monotonicity in k holds in the sparse regime k <= M/2; near k = M the
  // collapsing log factor makes the formula dip (e.g. (12,11,6) < (12,10,6)).
  for (int m : {8, 12, 30, 101})
    for (int b : {1, 6, 20})
      for (int k = 1; k < m / 2; ++k)
        CHECK(group_bound(m, k + 1, b).raw >= group_bound(m, k, b).raw);
  for (int b = 1; b < 30; ++b)
    CHECK(group_bound(12, 4, b + 1).raw >= group_bound(12, 4, b).raw);
}

TEST_CASE("disjoint structures tie the kB term to the union support") {
  const int m = 30, k = 4, b = 7;
  const auto g = make_scenario(Scenario::Disjoint, m, b);
  const auto a = random_active_set(g, k, 3);
  CHECK(static_cast<int>(union_support(a).size()) == k * b);
  CHECK(group_bound(m, k, b).raw ==
        doctest::Approx(chisq_max_bound(m - k, b) * k + k * b));
}

TEST_CASE("noisy bound scales the exact bound by (1-eps)^-2") {
  const auto base = group_bound(100, 5, 20);
  const auto noisy = noisy_bound(100, 5, 20, 0.5);
  CHECK(noisy.raw == doctest::Approx(4.0 * base.raw).epsilon(1e-12));
  CHECK(noisy.raw * 0.25 == doctest::Approx(base.raw).epsilon(1e-12));
  CHECK(noisy.raw == doctest::Approx(1522.01).epsilon(1e-3));

  CHECK(noisy_bound(100, 5, 20, 1e-9).raw == doctest::Approx(base.raw).epsilon(1e-6));
  CHECK(noisy_bound(100, 5, 20, 0.9).raw ==
        doctest::Approx(100.0 * base.raw).epsilon(1e-9));

  CHECK_THROWS_AS(noisy_bound(100, 5, 20, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(noisy_bound(100, 5, 20, 1.0), std::invalid_argument);
}

TEST_CASE("lasso bound values") {
  CHECK(lasso_bound(200, 4000).raw == doctest::Approx(3305.34).epsilon(1e-3));
  CHECK(lasso_bound(44, 139).raw == doctest::Approx(405.30).epsilon(1e-3));
  CHECK(lasso_bound(100, 2000).raw == doctest::Approx(1517.47).epsilon(1e-3));

  CHECK_THROWS_AS(lasso_bound(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(lasso_bound(10, 10), std::invalid_argument);
}

TEST_CASE("chi-squared maximum bound") {
  CHECK(chisq_max_bound(1, 1) == doctest::Approx(1.0));
  for (int d : {1, 2, 20, 40}) CHECK(chisq_max_bound(1, d) == doctest::Approx(double(d)));
  CHECK(chisq_max_bound(95, 20) == doctest::Approx(56.1007).epsilon(1e-4));
  CHECK_THROWS_AS(chisq_max_bound(0, 1), std::invalid_argument);
}

TEST_CASE("bound report serializes its inputs") {
  const auto rep = group_bound(10, 2, 4);
  const auto text = rep.to_json();
  CHECK(text.find("\"kind\":\"group\"") != std::string::npos);
  CHECK(text.find("\"measurements\"") != std::string::npos);
  CHECK(text.find("\"raw\"") != std::string::npos);
}
