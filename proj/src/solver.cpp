#include "gsr/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "gsr/norms.hpp"
#include "gsr/parallel.hpp"

namespace gsr {

void SolverConfig::validate() const {
  if (max_iter < 1 || admm_max_iter < 1)
    throw std::invalid_argument("solver config: iteration caps must be >= 1");
  if (rel_tol <= 0.0 || admm_tol <= 0.0 || exact_residual_tol <= 0.0)
    throw std::invalid_argument("solver config: tolerances must be > 0");
  if (!(alpha_min < alpha_max) || alpha_min <= 0.0)
    throw std::invalid_argument("solver config: need 0 < alpha_min < alpha_max");
  if (lambda_decay <= 0.0 || lambda_decay >= 1.0)
    throw std::invalid_argument("solver config: need 0 < lambda_decay < 1");
  if (lambda_start_factor <= 0.0 || lambda_floor_factor <= 0.0)
    throw std::invalid_argument("solver config: lambda factors must be > 0");
  if (nonmonotone_window < 1)
    throw std::invalid_argument("solver config: acceptance window must be >= 1");
  if (sufficient_decrease <= 0.0 || exact_recovery_threshold <= 0.0)
    throw std::invalid_argument("solver config: constants must be > 0");
}

Vec block_soft_threshold(const Vec& v, double tau) {
  if (tau < 0.0) throw std::invalid_argument("block_soft_threshold: tau must be >= 0");
  const double nrm = v.norm();
  if (nrm <= tau) return Vec::Zero(v.size());
  return (1.0 - tau / nrm) * v;
}

double relative_error(const Vec& x_hat, const Vec& x_star) {
  const double denom = x_star.norm();
  if (denom == 0.0) return x_hat.norm();
  return (x_hat - x_star).norm() / denom;
}

GroupStructure singleton_groups(int p) {
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) groups[static_cast<std::size_t>(i)] = {i};
  return make_group_structure(p, std::move(groups));
}

namespace {

// Measurement operator on the replicated space: A = Phi composed with the
// collapse map (duplicated columns of Phi, no renormalization).
struct ReplicatedDesign {
  const RowMat& phi;
  const ReplicationMap& rep;
  mutable Vec buf_p;

  void apply(const Vec& x_tilde, Vec& out) const {
    kernels::collapse(rep, x_tilde, buf_p);
    kernels::matvec(phi, buf_p, out);
  }
  void adjoint(const Vec& r, Vec& out) const {
    kernels::matvec_transpose(phi, r, buf_p);
    kernels::lift(rep, buf_p, out);
  }
};

double penalized_objective(const ReplicationMap& rep, const Vec& x_tilde,
                           const Vec& residual, double lambda,
                           std::vector<double>& norms_buf) {
  kernels::block_norms(rep, x_tilde, norms_buf);
  double penalty = 0.0;
  for (double v : norms_buf) penalty += v;
  return 0.5 * residual.squaredNorm() + lambda * penalty;
}

void check_problem(const MeasurementEnsemble& e, const Observation& obs,
                   const GroupStructure& g, double lambda,
                   const SolverConfig& cfg) {
  cfg.validate();
  if (lambda < 0.0) throw std::invalid_argument("solver: lambda must be >= 0");
  if (obs.y.size() != e.n) throw std::invalid_argument("solver: y/Phi dimension mismatch");
  if (e.p != g.p) throw std::invalid_argument("solver: Phi/groups dimension mismatch");
}

RecoveryResult sparsa_core(const MeasurementEnsemble& e, const Observation& obs,
                           const ReplicationMap& rep, double lambda,
                           const SolverConfig& cfg, const Vec* warm_start,
                           double residual_stop = 0.0) {
  const ReplicatedDesign design{e.matrix, rep, Vec(e.p)};

  Vec xt = warm_start != nullptr ? *warm_start : Vec::Zero(rep.p_tilde);
  Vec resid(e.n), grad(rep.p_tilde);
  design.apply(xt, resid);
  resid -= obs.y;
  design.adjoint(resid, grad);

  std::vector<double> norms_buf;
  double obj = penalized_objective(rep, xt, resid, lambda, norms_buf);

  RecoveryResult out;
  out.lambda = lambda;
  out.objective_trace.push_back(obj);

  // Spectral (Rayleigh) initial step scale; BB updates take over afterwards.
  double alpha = 1.0;
  const double grad_sq = grad.squaredNorm();
  if (grad_sq > 0.0) {
    Vec ag(e.n);
    design.apply(grad, ag);
    alpha = std::clamp(ag.squaredNorm() / grad_sq, cfg.alpha_min, cfg.alpha_max);
  }

  std::deque<double> window{obj};
  Vec cand(rep.p_tilde), cand_resid(e.n), grad_new(rep.p_tilde), dx(rep.p_tilde);

  bool converged = false;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    double obj_cand = 0.0;
    double dx_sq = 0.0;
    bool fixed_point = false;
    for (int bt = 0; bt < 100; ++bt) {
      kernels::block_soft_threshold(rep, xt - grad / alpha, lambda / alpha, cand);
      dx = cand - xt;
      dx_sq = dx.squaredNorm();
      if (dx_sq == 0.0) {
        fixed_point = true;  // prox fixed point at the current step scale
        break;
      }
      design.apply(cand, cand_resid);
      cand_resid -= obs.y;
      obj_cand = penalized_objective(rep, cand, cand_resid, lambda, norms_buf);
      const double bound = *std::max_element(window.begin(), window.end()) -
                           0.5 * cfg.sufficient_decrease * alpha * dx_sq;
      if (obj_cand <= bound || alpha >= cfg.alpha_max) break;
      alpha = std::min(2.0 * alpha, cfg.alpha_max);
    }
    if (fixed_point) {
      converged = true;
      break;
    }

    design.adjoint(cand_resid, grad_new);
    const double bb_num = dx.dot(grad_new - grad);  // = ||A dx||^2 >= 0
    alpha = bb_num > 0.0 ? std::clamp(bb_num / dx_sq, cfg.alpha_min, cfg.alpha_max)
                         : cfg.alpha_min;

    xt.swap(cand);
    resid.swap(cand_resid);
    grad.swap(grad_new);
    obj = obj_cand;
    out.objective_trace.push_back(obj);
    window.push_back(obj);
    if (static_cast<int>(window.size()) > cfg.nonmonotone_window) window.pop_front();

    if (std::sqrt(dx_sq) <= cfg.rel_tol * std::max(xt.norm(), 1e-30)) {
      converged = true;
      ++it;
      break;
    }
    if (residual_stop > 0.0 && resid.norm() <= residual_stop) {
      converged = true;  // continuation target already met at this lambda
      ++it;
      break;
    }
  }

  out.latents = xt;
  kernels::collapse(rep, xt, design.buf_p);
  out.x_hat = design.buf_p;
  out.residual = resid.norm();
  out.iterations = it;
  out.converged = converged;
  return out;
}

}  // namespace

RecoveryResult solve_group_lasso(const MeasurementEnsemble& e,
                                 const Observation& obs, const GroupStructure& g,
                                 double lambda, const SolverConfig& cfg) {
  check_problem(e, obs, g, lambda, cfg);
  const ReplicationMap rep = replicate(g);
  return sparsa_core(e, obs, rep, lambda, cfg, nullptr);
}

RecoveryResult admm_oracle(const MeasurementEnsemble& e, const Observation& obs,
                           const GroupStructure& g, double lambda,
                           const SolverConfig& cfg) {
  check_problem(e, obs, g, lambda, cfg);
  const ReplicationMap rep = replicate(g);
  const int n = e.n;
  const int pt = rep.p_tilde;

  // Materialized duplicated design for the direct linear solves.
  Eigen::MatrixXd a(n, pt);
  for (int j = 0; j < pt; ++j)
    a.col(j) = e.matrix.col(rep.source[static_cast<std::size_t>(j)]);

  RecoveryResult out;
  out.lambda = lambda;

  if (lambda == 0.0) {
    // Unpenalized objective: plain least squares is the exact minimizer.
    const Vec z = a.colPivHouseholderQr().solve(obs.y);
    out.latents = z;
    Vec coll(rep.p);
    kernels::collapse(rep, z, coll);
    out.x_hat = coll;
    Vec resid(n);
    kernels::matvec(e.matrix, coll, resid);
    resid -= obs.y;
    out.residual = resid.norm();
    out.objective_trace.push_back(0.5 * resid.squaredNorm());
    return out;
  }

  const double rho = 1.0;
  const Vec aty = a.transpose() * obs.y;

  // x-update solves (A^T A + rho I) x = v; factor the smaller Gram form once.
  const bool woodbury = n < pt;
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (woodbury) {
    Eigen::MatrixXd gram = a * a.transpose();
    gram.diagonal().array() += rho;
    llt.compute(gram);
  } else {
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += rho;
    llt.compute(gram);
  }
  const auto solve_x = [&](const Vec& v) -> Vec {
    if (woodbury) return (v - a.transpose() * llt.solve(a * v)) / rho;
    return llt.solve(v);
  };

  Vec x = Vec::Zero(pt), z = Vec::Zero(pt), u = Vec::Zero(pt);
  Vec z_old(pt);
  std::vector<double> norms_buf;

  bool converged = false;
  int it = 0;
  for (; it < cfg.admm_max_iter; ++it) {
    x = solve_x(aty + rho * (z - u));
    z_old = z;
    kernels::block_soft_threshold(rep, x + u, lambda / rho, z);
    u += x - z;

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    const double eps_pri = cfg.admm_tol * std::max({1.0, x.norm(), z.norm()});
    const double eps_dual = cfg.admm_tol * std::max(1.0, rho * u.norm());
    if (primal <= eps_pri && dual <= eps_dual) {
      converged = true;
      ++it;
      break;
    }
  }

  out.latents = z;
  Vec coll(rep.p);
  kernels::collapse(rep, z, coll);
  out.x_hat = coll;
  Vec resid(n);
  kernels::matvec(e.matrix, coll, resid);
  resid -= obs.y;
  out.residual = resid.norm();
  out.objective_trace.push_back(
      penalized_objective(rep, z, resid, lambda, norms_buf));
  out.iterations = it;
  out.converged = converged;
  return out;
}

RecoveryResult recover(const MeasurementEnsemble& e, const Observation& obs,
                       const GroupStructure& g, const SolverConfig& cfg,
                       RecoveryMode mode, const Vec* ground_truth) {
  check_problem(e, obs, g, 0.0, cfg);
  const ReplicationMap rep = replicate(g);

  Vec phity(e.p);
  kernels::matvec_transpose(e.matrix, obs.y, phity);
  const double lambda_max = dual_atomic_norm(phity, g);
  const double y_norm = obs.y.norm();

  RecoveryResult res;
  if (lambda_max == 0.0) {  // y carries no signal reachable through the cover
    res.x_hat = Vec::Zero(e.p);
    res.latents = Vec::Zero(rep.p_tilde);
    res.residual = y_norm;
    res.feasible = y_norm == 0.0;
    if (ground_truth != nullptr)
      res.relative_error = relative_error(res.x_hat, *ground_truth);
    return res;
  }

  const double lambda0 = cfg.lambda_start_factor * lambda_max;
  const double lambda_floor = cfg.lambda_floor_factor * lambda0;
  const double residual_target =
      mode == RecoveryMode::Noisy ? obs.delta : cfg.exact_residual_tol * y_norm;

  Vec warm = Vec::Zero(rep.p_tilde);
  double lambda = lambda0;
  int total_iterations = 0;
  // Intermediate lambdas only prime the warm start; solve them loosely and
  // tighten as lambda decreases so the final iterate carries full accuracy.
  SolverConfig inner = cfg;
  while (true) {
    inner.rel_tol = std::max(cfg.rel_tol, std::min(0.01 * lambda / lambda0, 1e-4));
    res = sparsa_core(e, obs, rep, lambda, inner, &warm, residual_target);
    warm = res.latents;
    total_iterations += res.iterations;
    if (res.residual <= residual_target) {
      res.feasible = true;
      break;
    }
    if (lambda <= lambda_floor) {
      res.feasible = false;  // residual floor not reached at the lambda floor
      break;
    }
    lambda *= cfg.lambda_decay;
  }
  res.iterations = total_iterations;
  if (ground_truth != nullptr)
    res.relative_error = relative_error(res.x_hat, *ground_truth);
  return res;
}

RecoveryResult lasso_solve(const MeasurementEnsemble& e, const Observation& obs,
                           double lambda, const SolverConfig& cfg) {
  const GroupStructure g = singleton_groups(e.p);
  return solve_group_lasso(e, obs, g, lambda, cfg);
}

}  // namespace gsr
