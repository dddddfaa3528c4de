#pragma once

#include <cstdint>

#include "gsr/groups.hpp"
#include "gsr/types.hpp"

namespace gsr {

// Diagnostics for testing membership of v in the normal cone at x*:
//   <v, x*> = gamma * ||x*||_A,  ||v_G|| = gamma on active groups,
//   ||v_G|| <= gamma on inactive groups,
// with gamma taken as the maximum active-group norm of v. Tolerances are
// applied at the certificate scale: tol * max(1, gamma) on group norms and
// tol * max(1, gamma * ||x*||_A) on the inner-product gap.
struct NormalConeCertificate {
  bool member = false;
  double gamma = 0.0;
  std::vector<double> active_norms;
  double inactive_max = 0.0;
  double inner_gap = 0.0;  // |<v,x*> - gamma * ||x*||_A|
  double atomic_norm_x = 0.0;
};

// x_star_atomic_norm < 0 means "compute it here".
NormalConeCertificate check_normal_cone(const Vec& v, const Vec& x_star,
                                        const ActiveSet& a, double tol,
                                        double x_star_atomic_norm = -1.0);

// Closed-form normal-cone point for disjoint groups: per active group
// gamma * x*_G / ||x*_G||, per inactive group w_G projected onto the
// gamma-ball, zero off the cover. Throws on overlapping structures.
Vec disjoint_cone_point(const Vec& x_star, const ActiveSet& a, double gamma,
                        const Vec& w);

struct WidthEstimate {
  double mean_sq_dist = 0.0;  // Monte Carlo E[ ||r - w||^2 ]
  double std_error = 0.0;
  int trials = 0;
  int accepted = 0;
  int rejected = 0;   // candidate r failed the membership check
  double mean_t2 = 0.0;  // mean of t(w)^2 across trials
};

// Upper-bounds the squared Gaussian width of the tangent cone's spherical
// part by the expected squared distance from a standard Gaussian w to the
// normal cone, evaluated at the constructed member r with
//   r_S = t(w) * v_S,  r_{S^c} = w_{S^c},  t(w) = max inactive ||w_G||.
// v is the disjoint closed-form cone point for disjoint structures; for
// overlapping structures it is assembled from the normalized latents of the
// optimal decomposition and rescaled to unit dual norm (a heuristic), and
// every r is membership-checked before use; failures are rejected and
// counted. Trials run in parallel with derived per-trial seeds.
WidthEstimate estimate_width_sq(const ActiveSet& a, int trials,
                                std::uint64_t seed);

// Empirical mean of max of L independent chi-squared(d) draws.
double estimate_chisq_max(int L, int d, int trials, std::uint64_t seed);

struct ChisqMaxEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

ChisqMaxEstimate estimate_chisq_max_stats(int L, int d, int trials,
                                          std::uint64_t seed);

}  // namespace gsr
