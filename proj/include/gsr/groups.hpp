#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsr/types.hpp"

namespace gsr {

// A set of M index groups over coordinates {0, ..., p-1}. Groups may overlap
// and need not cover every coordinate; coordinates outside the cover cannot
// carry signal (their group norm is +inf) and are rejected by the norm and
// solver entry points.
struct GroupStructure {
  int p = 0;
  std::vector<std::vector<int>> groups;  // each sorted, unique, indices in [0, p)

  int num_groups() const { return static_cast<int>(groups.size()); }
  int max_group_size() const;
  bool is_disjoint() const;
  std::vector<char> covered_mask() const;
  std::vector<int> cover() const;  // sorted union of all groups
};

// Validates invariants (p >= 1, M >= 1, groups non-empty, indices in [0, p)),
// sorting and deduplicating indices within each group. Throws
// std::invalid_argument on violation.
GroupStructure make_group_structure(int p, std::vector<std::vector<int>> groups);

// Non-fatal findings: duplicate groups, coordinates covered by no group.
std::vector<std::string> structure_warnings(const GroupStructure& g);

// JSON document form: { "p": int, "groups": [[int...], ...] }
std::string to_json(const GroupStructure& g);
GroupStructure group_structure_from_json(const std::string& text);

enum class Scenario { Disjoint, Chain, NearComplete, Alternating, RandomOverlap };

Scenario scenario_from_tag(const std::string& tag);
std::string scenario_tag(Scenario kind);

struct ScenarioParams {
  int overlap = 0;          // chain: indices shared between neighbouring groups
  std::uint64_t seed = 0;   // random_overlap: group placement stream
};

// Generators for the benchmark group layouts, all with M groups of size B:
//   disjoint        consecutive blocks, p = M*B
//   chain           each group shares `overlap` indices with each neighbour,
//                   p = M*B - (M-1)*overlap
//   near_complete   B-1 indices common to every group plus one private index
//                   per group, p = B-1+M
//   alternating     near_complete separately on the even-indexed and the
//                   odd-indexed groups, the two families on disjoint index
//                   ranges
//   random_overlap  first ceil(M/2) groups disjoint (fixing p), the rest drawn
//                   uniformly without replacement from [0, p), seeded
GroupStructure make_scenario(Scenario kind, int M, int B,
                             const ScenarioParams& params = {});

// k designated active groups of a structure. Holds a pointer; the structure
// must outlive the active set.
struct ActiveSet {
  const GroupStructure* structure = nullptr;
  std::vector<int> active;  // sorted group indices

  int k() const { return static_cast<int>(active.size()); }
};

ActiveSet make_active_set(const GroupStructure& g, std::vector<int> active);
ActiveSet random_active_set(const GroupStructure& g, int k, std::uint64_t seed);

// S = union of the active groups, sorted.
std::vector<int> union_support(const ActiveSet& a);

enum class ValueLaw { Uniform01, UniformSym };  // uniform [0,1] / uniform [-1,1]

ValueLaw value_law_from_tag(const std::string& tag);
std::string value_law_tag(ValueLaw law);

// Signal supported on union_support(a) with i.i.d. entries from the chosen
// law; deterministic per seed. k = 0 yields the zero vector.
Vec sample_signal(const ActiveSet& a, ValueLaw law, std::uint64_t seed);

// Expansion of an overlapping structure into disjoint contiguous blocks:
// expanded coordinate j is a copy of original coordinate source[j], and group
// g owns the range [block_offset[g], block_offset[g+1]). Summing the replicas
// of each original coordinate (collapse) maps a latent decomposition back to
// the original space.
struct ReplicationMap {
  int p = 0;
  int p_tilde = 0;                         // sum of group sizes
  std::vector<int> block_offset;           // size M+1
  std::vector<int> source;                 // size p_tilde
  std::vector<std::vector<int>> replicas;  // per original coordinate, ascending

  int num_blocks() const { return static_cast<int>(block_offset.size()) - 1; }
  Vec collapse(const Vec& x_tilde) const;
  Vec lift(const Vec& x) const;  // x_tilde[j] = x[source[j]]
};

ReplicationMap replicate(const GroupStructure& g);

}  // namespace gsr
