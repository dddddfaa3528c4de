#pragma once

#include <vector>

#include "gsr/groups.hpp"
#include "gsr/sensing.hpp"
#include "gsr/types.hpp"

namespace gsr {

struct SolverConfig {
  // Proximal-gradient (SpaRSA) loop
  int max_iter = 2000;
  double rel_tol = 1e-12;       // stop on relative iterate change
  double alpha_min = 1e-30;     // Barzilai-Borwein step bounds
  double alpha_max = 1e30;
  int nonmonotone_window = 5;   // acceptance window; 1 = monotone variant
  double sufficient_decrease = 0.01;

  // Lambda continuation (recover)
  double lambda_start_factor = 0.5;   // lambda0 = factor * max_G ||(Phi^T y)_G||
  double lambda_decay = 0.5;
  double lambda_floor_factor = 1e-8;  // stop at lambda <= floor * lambda0
  double exact_residual_tol = 1e-10;  // exact mode: ||y - Phi x|| <= tol * ||y||

  // Success threshold for phase experiments
  double exact_recovery_threshold = 1e-4;

  // ADMM oracle
  int admm_max_iter = 20000;
  double admm_tol = 1e-8;

  void validate() const;  // throws std::invalid_argument
};

struct RecoveryResult {
  Vec x_hat;                           // collapsed estimate in R^p
  Vec latents;                         // replicated-space iterate, one block per group
  std::vector<double> objective_trace; // accepted-step objectives
  double lambda = 0.0;
  int iterations = 0;
  double residual = 0.0;               // ||y - Phi x_hat||
  double relative_error = -1.0;        // vs ground truth when supplied, else -1
  bool converged = true;               // iteration caps not hit
  bool feasible = true;                // recover(): residual target was reached
};

// Proximal operator of tau*||.||: v * max(0, 1 - tau/||v||).
Vec block_soft_threshold(const Vec& v, double tau);

// Penalized overlapping group lasso on the replicated space,
//   min 0.5 ||y - A z||^2 + lambda * sum_g ||z_g||,
// where A duplicates Phi's columns per the replication map. SpaRSA-style
// proximal gradient: BB spectral steps with a nonmonotone acceptance window.
RecoveryResult solve_group_lasso(const MeasurementEnsemble& e,
                                 const Observation& obs, const GroupStructure& g,
                                 double lambda, const SolverConfig& cfg = {});

// Same problem via consensus ADMM with penalty rho = 1; independent of the
// proximal-gradient path and used to cross-check it.
RecoveryResult admm_oracle(const MeasurementEnsemble& e, const Observation& obs,
                           const GroupStructure& g, double lambda,
                           const SolverConfig& cfg = {});

enum class RecoveryMode { Exact, Noisy };

// Approximates the constrained programs (min atomic norm subject to y = Phi x,
// or ||y - Phi x|| <= delta) by a decreasing lambda sequence with warm starts.
// Exact mode stops once the residual falls below exact_residual_tol * ||y||;
// noisy mode stops at the largest lambda whose residual is within obs.delta.
// If the lambda floor is reached first the result is flagged infeasible.
RecoveryResult recover(const MeasurementEnsemble& e, const Observation& obs,
                       const GroupStructure& g, const SolverConfig& cfg = {},
                       RecoveryMode mode = RecoveryMode::Exact,
                       const Vec* ground_truth = nullptr);

// Lasso as the singleton-group special case.
RecoveryResult lasso_solve(const MeasurementEnsemble& e, const Observation& obs,
                           double lambda, const SolverConfig& cfg = {});

GroupStructure singleton_groups(int p);

// ||x_hat - x_star|| / ||x_star|| (plain norm of x_hat when x_star = 0).
double relative_error(const Vec& x_hat, const Vec& x_star);

}  // namespace gsr
