#include "gsr/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "gsr/norms.hpp"
#include "gsr/rng.hpp"

namespace gsr {

namespace {

double group_norm(const Vec& v, const std::vector<int>& grp) {
  double s = 0.0;
  for (int i : grp) s += v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

NormalConeCertificate check_normal_cone(const Vec& v, const Vec& x_star,
                                        const ActiveSet& a, double tol,
                                        double x_star_atomic_norm) {
  const GroupStructure& g = *a.structure;
  if (v.size() != g.p || x_star.size() != g.p)
    throw std::invalid_argument("check_normal_cone: dimension mismatch");

  NormalConeCertificate cert;
  cert.atomic_norm_x = x_star_atomic_norm >= 0.0
                           ? x_star_atomic_norm
                           : atomic_norm(x_star, g).value;

  std::vector<char> is_active(static_cast<std::size_t>(g.num_groups()), 0);
  for (int gi : a.active) is_active[static_cast<std::size_t>(gi)] = 1;

  double gamma = 0.0;
  for (int gi : a.active) {
    const double nrm = group_norm(v, g.groups[static_cast<std::size_t>(gi)]);
    cert.active_norms.push_back(nrm);
    gamma = std::max(gamma, nrm);
  }
  cert.gamma = gamma;

  double inactive_max = 0.0;
  for (int gi = 0; gi < g.num_groups(); ++gi)
    if (!is_active[static_cast<std::size_t>(gi)])
      inactive_max =
          std::max(inactive_max, group_norm(v, g.groups[static_cast<std::size_t>(gi)]));
  cert.inactive_max = inactive_max;

  cert.inner_gap = std::abs(v.dot(x_star) - gamma * cert.atomic_norm_x);

  const double norm_tol = tol * std::max(1.0, gamma);
  const double gap_tol = tol * std::max(1.0, gamma * cert.atomic_norm_x);
  bool ok = cert.inner_gap <= gap_tol && inactive_max <= gamma + norm_tol;
  for (double nrm : cert.active_norms) ok = ok && std::abs(nrm - gamma) <= norm_tol;
  cert.member = ok;
  return cert;
}

Vec disjoint_cone_point(const Vec& x_star, const ActiveSet& a, double gamma,
                        const Vec& w) {
  const GroupStructure& g = *a.structure;
  if (!g.is_disjoint())
    throw std::invalid_argument("disjoint_cone_point: structure has overlaps");
  if (gamma < 0.0)
    throw std::invalid_argument("disjoint_cone_point: gamma must be >= 0");
  if (x_star.size() != g.p || w.size() != g.p)
    throw std::invalid_argument("disjoint_cone_point: dimension mismatch");

  std::vector<char> is_active(static_cast<std::size_t>(g.num_groups()), 0);
  for (int gi : a.active) is_active[static_cast<std::size_t>(gi)] = 1;

  Vec z = Vec::Zero(g.p);
  for (int gi = 0; gi < g.num_groups(); ++gi) {
    const auto& grp = g.groups[static_cast<std::size_t>(gi)];
    if (is_active[static_cast<std::size_t>(gi)]) {
      const double nrm = group_norm(x_star, grp);
      if (nrm == 0.0)
        throw std::invalid_argument(
            "disjoint_cone_point: x* vanishes on an active group");
      for (int i : grp) z[i] = gamma * x_star[i] / nrm;
    } else {
      const double nrm = group_norm(w, grp);
      const double scale = nrm > gamma && nrm > 0.0 ? gamma / nrm : 1.0;
      for (int i : grp) z[i] = scale * w[i];
    }
  }
  return z;
}

WidthEstimate estimate_width_sq(const ActiveSet& a, int trials,
                                std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_width_sq: trials must be >= 1");
  const GroupStructure& g = *a.structure;
  const int p = g.p;

  std::vector<char> is_active(static_cast<std::size_t>(g.num_groups()), 0);
  for (int gi : a.active) is_active[static_cast<std::size_t>(gi)] = 1;
  std::vector<int> inactive;
  for (int gi = 0; gi < g.num_groups(); ++gi)
    if (!is_active[static_cast<std::size_t>(gi)]) inactive.push_back(gi);

  const std::vector<int> support = union_support(a);
  std::vector<char> in_s(static_cast<std::size_t>(p), 0);
  for (int i : support) in_s[static_cast<std::size_t>(i)] = 1;

  // Generic reference signal on the active groups; the distance statistics
  // for disjoint structures do not depend on its values, but the membership
  // check and the overlap heuristic need a concrete x*.
  const Vec x_star = sample_signal(a, ValueLaw::Uniform01, derive_seed(seed, {0}));
  const auto an = atomic_norm(x_star, g);
  const double anorm = an.value;

  // Unit-dual-norm normal-cone direction v with v vanishing off S.
  Vec v = Vec::Zero(p);
  if (g.is_disjoint()) {
    v = disjoint_cone_point(x_star, a, 1.0, Vec::Zero(p));
  } else {
    // Heuristic for overlaps: average the normalized nonzero latents of the
    // optimal decomposition, then rescale to unit dual norm.
    Vec weight = Vec::Zero(p);
    for (int gi = 0; gi < g.num_groups(); ++gi) {
      const auto& grp = g.groups[static_cast<std::size_t>(gi)];
      const Vec& latent = an.decomposition.latents[static_cast<std::size_t>(gi)];
      const double nrm = latent.norm();
      if (nrm <= 1e-12 * std::max(1.0, an.value)) continue;
      for (std::size_t t = 0; t < grp.size(); ++t) {
        v[grp[t]] += latent[static_cast<Eigen::Index>(t)] / nrm;
        weight[grp[t]] += 1.0;
      }
    }
    for (int i = 0; i < p; ++i)
      if (weight[i] > 0.0) v[i] /= weight[i];
    const double dual = dual_atomic_norm(v, g);
    if (dual > 0.0) v /= dual;
  }

  std::vector<double> dist_sq(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> t_sq(static_cast<std::size_t>(trials), 0.0);
  std::vector<char> ok(static_cast<std::size_t>(trials), 0);

#pragma omp parallel for schedule(static)
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, {1, static_cast<std::uint64_t>(trial)}));
    Vec w(p);
    for (int i = 0; i < p; ++i) w[i] = rng.gaussian();

    double t = 0.0;  // max inactive group norm; 0 by convention when k = M
    for (int gi : inactive)
      t = std::max(t, group_norm(w, g.groups[static_cast<std::size_t>(gi)]));

    Vec r(p);
    for (int i = 0; i < p; ++i)
      r[i] = in_s[static_cast<std::size_t>(i)] ? t * v[i] : w[i];

    const auto cert = check_normal_cone(r, x_star, a, 1e-8, anorm);
    t_sq[static_cast<std::size_t>(trial)] = t * t;
    if (!cert.member) continue;
    double d2 = 0.0;
    for (int i : support) {
      const double diff = t * v[i] - w[i];
      d2 += diff * diff;
    }
    dist_sq[static_cast<std::size_t>(trial)] = d2;
    ok[static_cast<std::size_t>(trial)] = 1;
  }

  WidthEstimate est;
  est.trials = trials;
  double sum = 0.0, sum_sq = 0.0, sum_t2 = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    sum_t2 += t_sq[static_cast<std::size_t>(trial)];
    if (!ok[static_cast<std::size_t>(trial)]) {
      ++est.rejected;
      continue;
    }
    ++est.accepted;
    sum += dist_sq[static_cast<std::size_t>(trial)];
    sum_sq += dist_sq[static_cast<std::size_t>(trial)] * dist_sq[static_cast<std::size_t>(trial)];
  }
  est.mean_t2 = sum_t2 / trials;
  if (est.accepted > 0) {
    est.mean_sq_dist = sum / est.accepted;
    if (est.accepted > 1) {
      const double var =
          (sum_sq - sum * sum / est.accepted) / (est.accepted - 1);
      est.std_error = std::sqrt(std::max(0.0, var) / est.accepted);
    }
  }
  return est;
}

ChisqMaxEstimate estimate_chisq_max_stats(int L, int d, int trials,
                                          std::uint64_t seed) {
  if (L < 1 || d < 1 || trials < 1)
    throw std::invalid_argument("estimate_chisq_max: parameters must be >= 1");
  std::vector<double> maxima(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
    double best = 0.0;
    for (int i = 0; i < L; ++i) {
      double q = 0.0;
      for (int j = 0; j < d; ++j) {
        const double z = rng.gaussian();
        q += z * z;
      }
      best = std::max(best, q);
    }
    maxima[static_cast<std::size_t>(trial)] = best;
  }
  double sum = 0.0, sum_sq = 0.0;
  for (double m : maxima) {
    sum += m;
    sum_sq += m * m;
  }
  ChisqMaxEstimate est;
  est.mean = sum / trials;
  if (trials > 1) {
    const double var = (sum_sq - sum * sum / trials) / (trials - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / trials);
  }
  return est;
}

double estimate_chisq_max(int L, int d, int trials, std::uint64_t seed) {
  return estimate_chisq_max_stats(L, d, trials, seed).mean;
}

}  // namespace gsr
