#include <doctest.h>

#include <algorithm>
#include <set>

#include "gsr/groups.hpp"
#include "gsr/rng.hpp"

using namespace gsr;

TEST_CASE("scenario dimensions match the benchmark configurations") {
  CHECK(make_scenario(Scenario::Disjoint, 100, 40).p == 4000);
  CHECK(make_scenario(Scenario::Chain, 100, 40, {.overlap = 20}).p == 2020);
  CHECK(make_scenario(Scenario::NearComplete, 100, 40).p == 139);
}

TEST_CASE("chain dimension formula holds on a parameter grid") {
  for (int m : {1, 2, 5, 17})
    for (int b : {1, 3, 8})
      for (int ov = 0; ov < b; ++ov) {
        const auto g = make_scenario(Scenario::Chain, m, b, {.overlap = ov});
        CHECK(g.p == m * b - (m - 1) * ov);
        CHECK(g.max_group_size() == b);
      }
}

TEST_CASE("scenario group sizes are all B") {
  for (auto kind : {Scenario::Disjoint, Scenario::Chain, Scenario::NearComplete,
                    Scenario::Alternating, Scenario::RandomOverlap}) {
    ScenarioParams params;
    params.overlap = 3;
    params.seed = 9;
    const auto g = make_scenario(kind, 12, 7, params);
    CHECK(g.num_groups() == 12);
    for (const auto& grp : g.groups) CHECK(grp.size() == 7);
  }
}

TEST_CASE("alternating scenario splits into two disjoint families") {
  const auto g = make_scenario(Scenario::Alternating, 10, 5);
  std::set<int> even_cover, odd_cover;
  for (int m = 0; m < g.num_groups(); ++m) {
    auto& target = m % 2 == 0 ? even_cover : odd_cover;
    target.insert(g.groups[m].begin(), g.groups[m].end());
  }
  for (int i : even_cover) CHECK(odd_cover.count(i) == 0);
  // each family is near_complete: any two same-parity groups share B-1 indices
  std::vector<int> shared;
  std::set_intersection(g.groups[0].begin(), g.groups[0].end(), g.groups[2].begin(),
                        g.groups[2].end(), std::back_inserter(shared));
  CHECK(shared.size() == 4);
}

TEST_CASE("random_overlap keeps the first half disjoint and is seeded") {
  ScenarioParams params;
  params.seed = 77;
  const auto g1 = make_scenario(Scenario::RandomOverlap, 10, 4, params);
  const auto g2 = make_scenario(Scenario::RandomOverlap, 10, 4, params);
  CHECK(g1.groups == g2.groups);
  CHECK(g1.p == 5 * 4);
  std::set<int> seen;
  for (int m = 0; m < 5; ++m)
    for (int i : g1.groups[m]) CHECK(seen.insert(i).second);
  params.seed = 78;
  const auto g3 = make_scenario(Scenario::RandomOverlap, 10, 4, params);
  CHECK(g1.groups != g3.groups);
}

TEST_CASE("scenario parameter errors") {
  CHECK_THROWS_AS(make_scenario(Scenario::Disjoint, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario(Scenario::Chain, 3, 4, {.overlap = 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_scenario(Scenario::Chain, 3, 4, {.overlap = -1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_scenario(Scenario::Disjoint, 3, 0), std::invalid_argument);
}

TEST_CASE("structure validation and warnings") {
  CHECK_THROWS_AS(make_group_structure(4, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_group_structure(4, {{}}), std::invalid_argument);
  CHECK_THROWS_AS(make_group_structure(4, {{4}}), std::invalid_argument);
  CHECK_THROWS_AS(make_group_structure(0, {{0}}), std::invalid_argument);

  // duplicate groups are permitted but flagged; uncovered indices likewise
  const auto g = make_group_structure(5, {{0, 1}, {1, 0}, {3}});
  const auto warnings = structure_warnings(g);
  REQUIRE(warnings.size() == 2);
  CHECK(warnings[0].find("duplicates") != std::string::npos);
  CHECK(warnings[1].find("covered by no group") != std::string::npos);
}

TEST_CASE("union support sizes") {
  const auto none = make_scenario(Scenario::Disjoint, 4, 3);
  CHECK(union_support(make_active_set(none, {})).empty());

  const auto disjoint = make_scenario(Scenario::Disjoint, 100, 40);
  const auto a1 = random_active_set(disjoint, 5, 11);
  CHECK(union_support(a1).size() == 200);

  const auto nc = make_scenario(Scenario::NearComplete, 100, 40);
  const auto a2 = random_active_set(nc, 5, 11);
  CHECK(union_support(a2).size() == 44);
}

TEST_CASE("union support is monotone in the active set") {
  const auto g = make_scenario(Scenario::Chain, 9, 5, {.overlap = 2});
  std::vector<int> active;
  std::size_t prev = 0;
  for (int m = 0; m < 9; m += 2) {
    active.push_back(m);
    const auto s = union_support(make_active_set(g, active));
    CHECK(s.size() >= prev);
    prev = s.size();
  }
}

TEST_CASE("sample_signal is deterministic and respects law and support") {
  const auto g = make_scenario(Scenario::Chain, 10, 6, {.overlap = 2});
  const auto a = random_active_set(g, 3, 5);
  const auto s = union_support(a);

  const Vec x1 = sample_signal(a, ValueLaw::Uniform01, 42);
  const Vec x2 = sample_signal(a, ValueLaw::Uniform01, 42);
  CHECK(x1 == x2);

  std::set<int> supp(s.begin(), s.end());
  int nonzero = 0;
  for (int i = 0; i < g.p; ++i) {
    if (x1[i] != 0.0) {
      ++nonzero;
      CHECK(supp.count(i) == 1);
      CHECK(x1[i] >= 0.0);
      CHECK(x1[i] <= 1.0);
    }
  }
  CHECK(nonzero <= a.k() * g.max_group_size());

  const Vec xs = sample_signal(a, ValueLaw::UniformSym, 43);
  for (int i : s) {
    CHECK(xs[i] >= -1.0);
    CHECK(xs[i] <= 1.0);
  }

  const Vec zero = sample_signal(make_active_set(g, {}), ValueLaw::Uniform01, 1);
  CHECK(zero.norm() == 0.0);
}

TEST_CASE("replication expands to the sum of group sizes") {
  const auto chain = make_scenario(Scenario::Chain, 100, 40, {.overlap = 20});
  const auto rep_chain = replicate(chain);
  CHECK(rep_chain.p_tilde == 4000);
  CHECK(rep_chain.p == 2020);

  const auto nc = make_scenario(Scenario::NearComplete, 100, 40);
  const auto rep_nc = replicate(nc);
  CHECK(rep_nc.p_tilde == 4000);
  CHECK(rep_nc.p == 139);
}

TEST_CASE("replicated blocks partition the expanded space") {
  const auto g = make_scenario(Scenario::Chain, 7, 5, {.overlap = 2});
  const auto rep = replicate(g);
  CHECK(rep.num_blocks() == 7);
  CHECK(rep.block_offset.front() == 0);
  CHECK(rep.block_offset.back() == rep.p_tilde);
  for (int j = 0; j < rep.p_tilde; ++j) {
    CHECK(rep.source[j] >= 0);
    CHECK(rep.source[j] < g.p);
  }
}

TEST_CASE("collapse of lifted latents reproduces the latent sum exactly") {
  Rng rng(314);
  for (auto kind : {Scenario::Disjoint, Scenario::Chain, Scenario::NearComplete}) {
    ScenarioParams params;
    params.overlap = 2;
    const auto g = make_scenario(kind, 8, 5, params);
    const auto rep = replicate(g);

    // random per-group latents written into their blocks
    Vec xt(rep.p_tilde);
    for (int j = 0; j < rep.p_tilde; ++j) xt[j] = rng.uniform(-2.0, 2.0);

    Vec expected = Vec::Zero(g.p);
    for (int m = 0; m < g.num_groups(); ++m) {
      const auto& grp = g.groups[m];
      for (std::size_t t = 0; t < grp.size(); ++t)
        expected[grp[t]] += xt[rep.block_offset[m] + static_cast<int>(t)];
    }
    CHECK(rep.collapse(xt) == expected);
  }
}

TEST_CASE("disjoint replication restricted to the cover is a bijection") {
  const auto g = make_group_structure(6, {{0, 1}, {3, 4}});  // 2, 5 uncovered
  const auto rep = replicate(g);
  CHECK(rep.p_tilde == 4);
  Vec x(6);
  x << 1, 2, 0, 4, 5, 0;
  const Vec xt = rep.lift(x);
  const Vec back = rep.collapse(xt);
  for (int i : {0, 1, 3, 4}) CHECK(back[i] == x[i]);
  for (int i : {2, 5}) CHECK(back[i] == 0.0);
}

TEST_CASE("group structure JSON round trip") {
  const auto g = make_scenario(Scenario::Chain, 5, 4, {.overlap = 1});
  const auto back = group_structure_from_json(to_json(g));
  CHECK(back.p == g.p);
  CHECK(back.groups == g.groups);

  CHECK_THROWS(group_structure_from_json("{\"p\": 2}"));
}

TEST_CASE("active set validation") {
  const auto g = make_scenario(Scenario::Disjoint, 4, 2);
  CHECK_THROWS_AS(make_active_set(g, {4}), std::invalid_argument);
  CHECK_THROWS_AS(random_active_set(g, 5, 0), std::invalid_argument);
  const auto a = random_active_set(g, 2, 123);
  CHECK(a.k() == 2);
  const auto b = random_active_set(g, 2, 123);
  CHECK(a.active == b.active);
}

TEST_CASE("scenario tags round trip") {
  for (auto kind : {Scenario::Disjoint, Scenario::Chain, Scenario::NearComplete,
                    Scenario::Alternating, Scenario::RandomOverlap})
    CHECK(scenario_from_tag(scenario_tag(kind)) == kind);
  CHECK_THROWS_AS(scenario_from_tag("bogus"), std::invalid_argument);
}
