#include "gsr/groups.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "gsr/rng.hpp"

namespace gsr {

int GroupStructure::max_group_size() const {
  std::size_t b = 0;
  for (const auto& g : groups) b = std::max(b, g.size());
  return static_cast<int>(b);
}

bool GroupStructure::is_disjoint() const {
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  for (const auto& g : groups)
    for (int i : g) {
      if (seen[static_cast<std::size_t>(i)]) return false;
      seen[static_cast<std::size_t>(i)] = 1;
    }
  return true;
}

std::vector<char> GroupStructure::covered_mask() const {
  std::vector<char> mask(static_cast<std::size_t>(p), 0);
  for (const auto& g : groups)
    for (int i : g) mask[static_cast<std::size_t>(i)] = 1;
  return mask;
}

std::vector<int> GroupStructure::cover() const {
  const auto mask = covered_mask();
  std::vector<int> out;
  for (int i = 0; i < p; ++i)
    if (mask[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

GroupStructure make_group_structure(int p, std::vector<std::vector<int>> groups) {
  if (p < 1) throw std::invalid_argument("group structure: p must be >= 1");
  if (groups.empty()) throw std::invalid_argument("group structure: M must be >= 1");
  for (auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("group structure: empty group");
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.front() < 0 || g.back() >= p)
      throw std::invalid_argument("group structure: index out of range");
  }
  GroupStructure out;
  out.p = p;
  out.groups = std::move(groups);
  return out;
}

std::vector<std::string> structure_warnings(const GroupStructure& g) {
  std::vector<std::string> out;
  std::map<std::vector<int>, int> seen;
  for (int i = 0; i < g.num_groups(); ++i) {
    auto [it, inserted] = seen.emplace(g.groups[static_cast<std::size_t>(i)], i);
    if (!inserted)
      out.push_back("group " + std::to_string(i) + " duplicates group " +
                    std::to_string(it->second));
  }
  const auto mask = g.covered_mask();
  int uncovered = 0;
  for (char c : mask) uncovered += c == 0;
  if (uncovered > 0)
    out.push_back(std::to_string(uncovered) +
                  " coordinate(s) covered by no group (forced to zero in recovery)");
  return out;
}

std::string to_json(const GroupStructure& g) {
  nlohmann::json j;
  j["p"] = g.p;
  j["groups"] = g.groups;
  return j.dump();
}

GroupStructure group_structure_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return make_group_structure(j.at("p").get<int>(),
                              j.at("groups").get<std::vector<std::vector<int>>>());
}

Scenario scenario_from_tag(const std::string& tag) {
  if (tag == "disjoint") return Scenario::Disjoint;
  if (tag == "chain") return Scenario::Chain;
  if (tag == "near_complete") return Scenario::NearComplete;
  if (tag == "alternating") return Scenario::Alternating;
  if (tag == "random_overlap") return Scenario::RandomOverlap;
  throw std::invalid_argument("unknown scenario tag: " + tag);
}

std::string scenario_tag(Scenario kind) {
  switch (kind) {
    case Scenario::Disjoint: return "disjoint";
    case Scenario::Chain: return "chain";
    case Scenario::NearComplete: return "near_complete";
    case Scenario::Alternating: return "alternating";
    case Scenario::RandomOverlap: return "random_overlap";
  }
  throw std::logic_error("unreachable");
}

namespace {

std::vector<std::vector<int>> near_complete_family(int M, int B, int index_offset,
                                                   int* family_dim) {
  // B-1 shared indices, then one private index per group.
  std::vector<int> shared(static_cast<std::size_t>(B - 1));
  for (int i = 0; i < B - 1; ++i) shared[static_cast<std::size_t>(i)] = index_offset + i;
  std::vector<std::vector<int>> groups;
  groups.reserve(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    auto g = shared;
    g.push_back(index_offset + B - 1 + m);
    groups.push_back(std::move(g));
  }
  *family_dim = B - 1 + M;
  return groups;
}

}  // namespace

GroupStructure make_scenario(Scenario kind, int M, int B, const ScenarioParams& params) {
  if (M < 1) throw std::invalid_argument("scenario: M must be >= 1");
  if (B < 1) throw std::invalid_argument("scenario: B must be >= 1");

  switch (kind) {
    case Scenario::Disjoint: {
      std::vector<std::vector<int>> groups(static_cast<std::size_t>(M));
      for (int m = 0; m < M; ++m) {
        auto& g = groups[static_cast<std::size_t>(m)];
        g.resize(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) g[static_cast<std::size_t>(i)] = m * B + i;
      }
      return make_group_structure(M * B, std::move(groups));
    }
    case Scenario::Chain: {
      if (params.overlap < 0 || params.overlap >= B)
        throw std::invalid_argument("scenario: chain overlap must be in [0, B)");
      const int stride = B - params.overlap;
      const int p = (M - 1) * stride + B;
      std::vector<std::vector<int>> groups(static_cast<std::size_t>(M));
      for (int m = 0; m < M; ++m) {
        auto& g = groups[static_cast<std::size_t>(m)];
        g.resize(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) g[static_cast<std::size_t>(i)] = m * stride + i;
      }
      return make_group_structure(p, std::move(groups));
    }
    case Scenario::NearComplete: {
      int p = 0;
      auto groups = near_complete_family(M, B, 0, &p);
      return make_group_structure(p, std::move(groups));
    }
    case Scenario::Alternating: {
      // Even-indexed and odd-indexed groups form two near_complete families
      // on disjoint index ranges.
      const int n_even = (M + 1) / 2;
      const int n_odd = M - n_even;
      int dim_even = 0;
      auto family_even = near_complete_family(n_even, B, 0, &dim_even);
      std::vector<std::vector<int>> groups(static_cast<std::size_t>(M));
      for (int j = 0; j < n_even; ++j)
        groups[static_cast<std::size_t>(2 * j)] = std::move(family_even[static_cast<std::size_t>(j)]);
      int p = dim_even;
      if (n_odd > 0) {
        int dim_odd = 0;
        auto family_odd = near_complete_family(n_odd, B, dim_even, &dim_odd);
        for (int j = 0; j < n_odd; ++j)
          groups[static_cast<std::size_t>(2 * j + 1)] = std::move(family_odd[static_cast<std::size_t>(j)]);
        p += dim_odd;
      }
      return make_group_structure(p, std::move(groups));
    }
    case Scenario::RandomOverlap: {
      const int n_disjoint = (M + 1) / 2;
      const int p = n_disjoint * B;
      std::vector<std::vector<int>> groups(static_cast<std::size_t>(M));
      for (int m = 0; m < n_disjoint; ++m) {
        auto& g = groups[static_cast<std::size_t>(m)];
        g.resize(static_cast<std::size_t>(B));
        for (int i = 0; i < B; ++i) g[static_cast<std::size_t>(i)] = m * B + i;
      }
      Rng rng(params.seed);
      for (int m = n_disjoint; m < M; ++m)
        groups[static_cast<std::size_t>(m)] = rng.sample_indices(p, B);
      return make_group_structure(p, std::move(groups));
    }
  }
  throw std::logic_error("unreachable");
}

ActiveSet make_active_set(const GroupStructure& g, std::vector<int> active) {
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  if (!active.empty() && (active.front() < 0 || active.back() >= g.num_groups()))
    throw std::invalid_argument("active set: group index out of range");
  return ActiveSet{&g, std::move(active)};
}

ActiveSet random_active_set(const GroupStructure& g, int k, std::uint64_t seed) {
  if (k < 0 || k > g.num_groups())
    throw std::invalid_argument("active set: k must be in [0, M]");
  Rng rng(seed);
  return ActiveSet{&g, rng.sample_indices(g.num_groups(), k)};
}

std::vector<int> union_support(const ActiveSet& a) {
  std::set<int> s;
  for (int gi : a.active) {
    const auto& g = a.structure->groups[static_cast<std::size_t>(gi)];
    s.insert(g.begin(), g.end());
  }
  return {s.begin(), s.end()};
}

ValueLaw value_law_from_tag(const std::string& tag) {
  if (tag == "uniform01") return ValueLaw::Uniform01;
  if (tag == "uniform_sym") return ValueLaw::UniformSym;
  throw std::invalid_argument("unknown value law tag: " + tag);
}

std::string value_law_tag(ValueLaw law) {
  return law == ValueLaw::Uniform01 ? "uniform01" : "uniform_sym";
}

Vec sample_signal(const ActiveSet& a, ValueLaw law, std::uint64_t seed) {
  Vec x = Vec::Zero(a.structure->p);
  Rng rng(seed);
  for (int i : union_support(a))
    x[i] = law == ValueLaw::Uniform01 ? rng.uniform01() : rng.uniform(-1.0, 1.0);
  return x;
}

Vec ReplicationMap::collapse(const Vec& x_tilde) const {
  Vec x = Vec::Zero(p);
  for (int i = 0; i < p; ++i) {
    double s = 0.0;
    for (int j : replicas[static_cast<std::size_t>(i)]) s += x_tilde[j];
    x[i] = s;
  }
  return x;
}

Vec ReplicationMap::lift(const Vec& x) const {
  Vec xt(p_tilde);
  for (int j = 0; j < p_tilde; ++j) xt[j] = x[source[static_cast<std::size_t>(j)]];
  return xt;
}

ReplicationMap replicate(const GroupStructure& g) {
  ReplicationMap rep;
  rep.p = g.p;
  rep.block_offset.resize(static_cast<std::size_t>(g.num_groups()) + 1);
  rep.block_offset[0] = 0;
  for (int m = 0; m < g.num_groups(); ++m)
    rep.block_offset[static_cast<std::size_t>(m) + 1] =
        rep.block_offset[static_cast<std::size_t>(m)] +
        static_cast<int>(g.groups[static_cast<std::size_t>(m)].size());
  rep.p_tilde = rep.block_offset.back();
  rep.source.resize(static_cast<std::size_t>(rep.p_tilde));
  rep.replicas.assign(static_cast<std::size_t>(g.p), {});
  int j = 0;
  for (const auto& grp : g.groups)
    for (int i : grp) {
      rep.source[static_cast<std::size_t>(j)] = i;
      rep.replicas[static_cast<std::size_t>(i)].push_back(j);
      ++j;
    }
  return rep;
}

}  // namespace gsr
