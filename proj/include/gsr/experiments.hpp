#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsr/groups.hpp"
#include "gsr/solver.hpp"

namespace gsr {

struct ExperimentConfig {
  Scenario scenario = Scenario::Disjoint;
  int M = 20;
  int B = 10;
  int k = 2;
  int overlap = 0;  // chain scenario
  ValueLaw law = ValueLaw::Uniform01;
  std::vector<int> n_grid;  // strictly increasing
  int trials = 50;
  std::uint64_t master_seed = 1;
  SolverConfig solver;
  // Wall times are the one nondeterministic column; turning them off makes
  // repeated runs byte-identical.
  bool record_wall_time = true;
  std::string out_dir;

  void validate() const;
  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
};

struct TrialRecord {
  std::string scenario;
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string method;  // "group" | "lasso"
  double rel_error = 0.0;
  bool success = false;
  double wall_ms = 0.0;
};

// For each n and trial: derive the trial seed, build the scenario, sample the
// signal, measure, and recover with both methods on identical (Phi, x*).
// Trials run in a parallel worker pool; records come back in (n, trial,
// method) order so output does not depend on scheduling. Solver
// non-convergence is recorded in the trial, never thrown.
std::vector<TrialRecord> run_phase_sweep(const ExperimentConfig& cfg);

double success_rate(const std::vector<TrialRecord>& records, int n,
                    const std::string& method);

// CSV with header scenario,n,trial,seed,method,rel_error,success,wall_ms.
void emit_csv(const std::vector<TrialRecord>& records, const std::string& path);

// SVG line plot of mean relative error vs n per method (log y), with one
// vertical marker per requested bound annotation.
void emit_svg_plot(const std::vector<TrialRecord>& records,
                   const std::string& path,
                   const std::vector<double>& bound_markers);

// Universality suite: every scenario kind at (M, B, k), paired trials at
// n = ceil(group_bound(M, k, B)).
struct ScenarioOutcome {
  Scenario kind;
  int n = 0;
  int p = 0;
  double group_success = 0.0;
  double lasso_success = 0.0;
};

std::vector<ScenarioOutcome> run_scenario_suite(int M, int B, int k, int trials,
                                                std::uint64_t master_seed,
                                                const SolverConfig& solver);

// Monte Carlo verification rows for the chi-squared maximum bound, the
// norm-ball bound, and the width chain.
struct LemmaCheckRow {
  std::string check;
  std::string params;
  double empirical = 0.0;
  double bound = 0.0;
  bool pass = false;
};

std::vector<LemmaCheckRow> run_lemma_suite(std::uint64_t seed,
                                           int chisq_trials = 10000,
                                           int lemma3_vectors = 10000,
                                           int width_trials = 2000);

void emit_lemma_csv(const std::vector<LemmaCheckRow>& rows,
                    const std::string& path);

}  // namespace gsr
