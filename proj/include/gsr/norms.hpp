#pragma once

#include <vector>

#include "gsr/groups.hpp"
#include "gsr/types.hpp"

namespace gsr {

// Latent decomposition x = sum_G v_G with supp(v_G) in G; value = sum ||v_G||.
struct GroupDecomposition {
  const GroupStructure* structure = nullptr;
  std::vector<Vec> latents;  // group-local coordinates, latents[g].size() == |G_g|
  double value = 0.0;

  Vec sum() const;  // reconstruction in R^p
};

// Dual norm: max_G ||u_G||. Zero iff u vanishes on every covered coordinate.
double dual_atomic_norm(const Vec& u, const GroupStructure& g);

struct AtomicNormResult {
  double value = 0.0;
  GroupDecomposition decomposition;
  int iterations = 0;
  bool converged = true;
};

// Overlapping group norm inf { sum ||v_G|| : sum v_G = x }, with an optimal
// decomposition. Partitions use the closed form sum ||x_G||; overlaps are
// solved by ADMM on the replicated space (splitting the sum constraint from
// the per-block norms), which keeps the returned decomposition exactly
// feasible. tol is relative. Throws if supp(x) is not inside the group cover.
AtomicNormResult atomic_norm(const Vec& x, const GroupStructure& g,
                             double tol = 1e-8);

// The ADMM path regardless of structure; exposed so the closed form and the
// iterative route can be cross-checked on partitions.
AtomicNormResult atomic_norm_admm(const Vec& x, const GroupStructure& g,
                                  double tol = 1e-8, int max_iter = 50000);

}  // namespace gsr
