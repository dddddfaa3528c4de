#include "gsr/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "gsr/parallel.hpp"

namespace gsr {

Vec GroupDecomposition::sum() const {
  Vec x = Vec::Zero(structure->p);
  for (int g = 0; g < structure->num_groups(); ++g) {
    const auto& grp = structure->groups[static_cast<std::size_t>(g)];
    const auto& v = latents[static_cast<std::size_t>(g)];
    for (std::size_t t = 0; t < grp.size(); ++t)
      x[grp[t]] += v[static_cast<Eigen::Index>(t)];
  }
  return x;
}

double dual_atomic_norm(const Vec& u, const GroupStructure& g) {
  if (u.size() != g.p) throw std::invalid_argument("dual_atomic_norm: dimension mismatch");
  return kernels::max_group_norm(g, u);
}

namespace {

void require_supported(const Vec& x, const GroupStructure& g) {
  const auto mask = g.covered_mask();
  for (int i = 0; i < g.p; ++i)
    if (x[i] != 0.0 && !mask[static_cast<std::size_t>(i)])
      throw std::invalid_argument(
          "atomic_norm: support outside the group cover (coordinate " +
          std::to_string(i) + ")");
}

GroupDecomposition decomposition_from_blocks(const GroupStructure& g,
                                             const ReplicationMap& rep,
                                             const Vec& x_tilde) {
  GroupDecomposition d;
  d.structure = &g;
  d.latents.resize(static_cast<std::size_t>(g.num_groups()));
  double value = 0.0;
  for (int m = 0; m < g.num_groups(); ++m) {
    const int lo = rep.block_offset[static_cast<std::size_t>(m)];
    const int len = rep.block_offset[static_cast<std::size_t>(m) + 1] - lo;
    d.latents[static_cast<std::size_t>(m)] = x_tilde.segment(lo, len);
    value += d.latents[static_cast<std::size_t>(m)].norm();
  }
  d.value = value;
  return d;
}

}  // namespace

AtomicNormResult atomic_norm_admm(const Vec& x, const GroupStructure& g,
                                  double tol, int max_iter) {
  if (x.size() != g.p) throw std::invalid_argument("atomic_norm: dimension mismatch");
  require_supported(x, g);

  const ReplicationMap rep = replicate(g);
  AtomicNormResult res;

  const double scale = x.norm();
  if (scale == 0.0) {
    res.value = 0.0;
    res.decomposition = decomposition_from_blocks(g, rep, Vec::Zero(rep.p_tilde));
    return res;
  }
  const Vec xn = x / scale;  // solve at unit scale, rho = 1

  // min sum_g ||z_g||  s.t.  R xt = xn, xt = z.
  // xt-update projects z - u onto the affine constraint; the projection only
  // shifts the replicas of each coordinate by a common amount.
  Vec xt = Vec::Zero(rep.p_tilde);
  Vec z = Vec::Zero(rep.p_tilde);
  Vec u = Vec::Zero(rep.p_tilde);
  Vec w(rep.p_tilde), z_old(rep.p_tilde), coll(rep.p);

  const double rho = 1.0;
  const double eps = tol;  // unit-scale problem
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    w = z - u;
    kernels::collapse(rep, w, coll);
    for (int i = 0; i < rep.p; ++i) {
      const auto& reps = rep.replicas[static_cast<std::size_t>(i)];
      if (reps.empty()) continue;
      const double shift = (xn[i] - coll[i]) / static_cast<double>(reps.size());
      for (int j : reps) xt[j] = w[j] + shift;
    }
    z_old = z;
    kernels::block_soft_threshold(rep, xt + u, 1.0 / rho, z);
    u += xt - z;

    const double primal = (xt - z).norm();
    const double dual = rho * (z - z_old).norm();
    if (primal <= eps && dual <= eps) {
      converged = true;
      ++it;
      break;
    }
  }

  // xt satisfies R xt = xn exactly, so the reported decomposition is feasible
  // and its value upper-bounds the norm within the stopping tolerance.
  res.decomposition = decomposition_from_blocks(g, rep, scale * xt);
  res.value = res.decomposition.value;
  res.iterations = it;
  res.converged = converged;
  return res;
}

AtomicNormResult atomic_norm(const Vec& x, const GroupStructure& g, double tol) {
  if (x.size() != g.p) throw std::invalid_argument("atomic_norm: dimension mismatch");
  if (g.is_disjoint()) {
    require_supported(x, g);
    const ReplicationMap rep = replicate(g);
    AtomicNormResult res;
    res.decomposition = decomposition_from_blocks(g, rep, rep.lift(x));
    res.value = res.decomposition.value;
    return res;
  }
  return atomic_norm_admm(x, g, tol);
}

}  // namespace gsr
