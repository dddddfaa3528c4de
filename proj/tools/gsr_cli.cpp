// Command-line driver for group-sparse recovery experiments: bound
// evaluation, single recoveries, phase-transition sweeps, scenario
// comparisons, lemma verification, and the wavelet demo.

#include <CLI11.hpp>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gsr/bounds.hpp"
#include "gsr/experiments.hpp"
#include "gsr/geometry.hpp"
#include "gsr/norms.hpp"
#include "gsr/parallel.hpp"
#include "gsr/rng.hpp"
#include "gsr/sensing.hpp"
#include "gsr/solver.hpp"
#include "gsr/wavelet.hpp"

namespace {

constexpr int kCheckFailed = 2;

void add_solver_flags(CLI::App* cmd, gsr::SolverConfig* solver) {
  cmd->add_option("--max-iter", solver->max_iter, "proximal-gradient iteration cap");
  cmd->add_option("--rel-tol", solver->rel_tol, "relative iterate-change stop");
  cmd->add_option("--alpha-min", solver->alpha_min, "BB step lower bound");
  cmd->add_option("--alpha-max", solver->alpha_max, "BB step upper bound");
  cmd->add_option("--window", solver->nonmonotone_window,
                  "nonmonotone acceptance window (1 = monotone)");
  cmd->add_option("--sufficient-decrease", solver->sufficient_decrease,
                  "acceptance constant");
  cmd->add_option("--lambda-start", solver->lambda_start_factor,
                  "lambda0 as a fraction of the dual norm of Phi^T y");
  cmd->add_option("--lambda-decay", solver->lambda_decay, "continuation decay");
  cmd->add_option("--lambda-floor", solver->lambda_floor_factor,
                  "continuation floor as a fraction of lambda0");
  cmd->add_option("--residual-tol", solver->exact_residual_tol,
                  "exact-mode residual target relative to ||y||");
  cmd->add_option("--exact-threshold", solver->exact_recovery_threshold,
                  "relative error counted as exact recovery");
  cmd->add_option("--admm-max-iter", solver->admm_max_iter, "ADMM iteration cap");
  cmd->add_option("--admm-tol", solver->admm_tol, "ADMM residual tolerance");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_vector_csv(const std::string& path, const gsr::Vec& a,
                      const gsr::Vec& b, const char* header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header << "\n";
  char buf[96];
  for (int i = 0; i < a.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g\n", i, a[i], b[i]);
    out << buf;
  }
}

std::string out_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"overlapping group-sparse recovery toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  bool serial = false;
  app.add_option("--threads", threads, "OpenMP thread count (0 = default)");
  app.add_flag("--serial", serial, "disable parallel kernels");

  // ---- bound ----------------------------------------------------------
  auto* bound_cmd = app.add_subcommand("bound", "evaluate a measurement bound");
  std::string bound_kind = "group";
  int bM = 100, bk = 5, bB = 20, bs = 100, bp = 2000, bL = 95, bd = 20;
  double beps = 0.5;
  bound_cmd->add_option("--kind", bound_kind, "group | noisy | lasso | chisq_max")
      ->check(CLI::IsMember({"group", "noisy", "lasso", "chisq_max"}));
  bound_cmd->add_option("-M,--num-groups", bM, "number of groups M");
  bound_cmd->add_option("-k,--active", bk, "active group count k");
  bound_cmd->add_option("-B,--group-size", bB, "maximum group size B");
  bound_cmd->add_option("--eps", beps, "noisy-bound epsilon in (0,1)");
  bound_cmd->add_option("-s,--sparsity", bs, "lasso-bound sparsity s");
  bound_cmd->add_option("-p,--dimension", bp, "lasso-bound dimension p");
  bound_cmd->add_option("-L,--count", bL, "chisq_max: number of variables");
  bound_cmd->add_option("-d,--dof", bd, "chisq_max: degrees of freedom");

  // ---- recover --------------------------------------------------------
  auto* rec_cmd = app.add_subcommand("recover", "single seeded recovery run");
  std::string rec_scenario = "disjoint", rec_groups_file, rec_out, rec_law = "uniform01";
  int rM = 20, rB = 10, rk = 2, rOverlap = 0, rn = 0;
  std::uint64_t rec_seed = 1;
  double rDelta = 0.0;
  gsr::SolverConfig rec_solver;
  rec_cmd->add_option("--scenario", rec_scenario, "scenario tag")
      ->check(CLI::IsMember({"disjoint", "chain", "near_complete", "alternating",
                             "random_overlap"}));
  rec_cmd->add_option("--groups", rec_groups_file, "group structure JSON file");
  rec_cmd->add_option("-M,--num-groups", rM, "number of groups");
  rec_cmd->add_option("-B,--group-size", rB, "group size");
  rec_cmd->add_option("-k,--active", rk, "active group count");
  rec_cmd->add_option("--overlap", rOverlap, "chain overlap");
  rec_cmd->add_option("-n,--measurements", rn, "measurement count (0 = bound)");
  rec_cmd->add_option("--seed", rec_seed, "master seed");
  rec_cmd->add_option("--delta", rDelta, "noise norm budget (0 = exact)");
  rec_cmd->add_option("--law", rec_law, "signal law: uniform01 | uniform_sym");
  rec_cmd->add_option("--out", rec_out, "output directory");
  add_solver_flags(rec_cmd, &rec_solver);

  // ---- phase ----------------------------------------------------------
  auto* phase_cmd = app.add_subcommand("phase", "phase-transition sweep");
  std::string phase_config, phase_out, phase_scenario = "disjoint";
  int pM = 20, pB = 10, pk = 2, pOverlap = 0, pTrials = 50;
  std::vector<int> p_n_grid;
  std::uint64_t phase_seed = 1;
  bool phase_full = false, phase_check = false, phase_no_walltime = false;
  gsr::SolverConfig phase_solver;
  phase_cmd->add_option("--config", phase_config, "ExperimentConfig JSON file");
  phase_cmd->add_option("--scenario", phase_scenario, "scenario tag");
  phase_cmd->add_option("-M,--num-groups", pM, "number of groups");
  phase_cmd->add_option("-B,--group-size", pB, "group size");
  phase_cmd->add_option("-k,--active", pk, "active group count");
  phase_cmd->add_option("--overlap", pOverlap, "chain overlap");
  phase_cmd->add_option("--n-grid", p_n_grid, "measurement counts");
  phase_cmd->add_option("--trials", pTrials, "trials per n");
  phase_cmd->add_option("--seed", phase_seed, "master seed");
  phase_cmd->add_option("--out", phase_out, "output directory");
  phase_cmd->add_flag("--full-scale", phase_full,
                      "paper-size sweep: p = 2000, 100 trials");
  phase_cmd->add_flag("--check", phase_check,
                      "exit 2 unless success >= 0.9 at the bound and above lasso");
  phase_cmd->add_flag("--no-walltime", phase_no_walltime,
                      "zero the wall_ms column for byte-identical output");
  add_solver_flags(phase_cmd, &phase_solver);

  // ---- scenarios ------------------------------------------------------
  auto* scen_cmd = app.add_subcommand(
      "scenarios", "success of every overlap configuration at the shared bound");
  int sM = 20, sB = 8, sk = 2, sTrials = 50;
  std::uint64_t scen_seed = 1;
  std::string scen_out;
  bool scen_full = false, scen_check = false;
  gsr::SolverConfig scen_solver;
  scen_cmd->add_option("-M,--num-groups", sM, "number of groups");
  scen_cmd->add_option("-B,--group-size", sB, "group size");
  scen_cmd->add_option("-k,--active", sk, "active group count");
  scen_cmd->add_option("--trials", sTrials, "trials per scenario");
  scen_cmd->add_option("--seed", scen_seed, "master seed");
  scen_cmd->add_option("--out", scen_out, "output directory");
  scen_cmd->add_flag("--full-scale", scen_full, "paper size: M=100, B=40, k=5");
  scen_cmd->add_flag("--check", scen_check, "exit 2 unless all rates >= 0.9");
  add_solver_flags(scen_cmd, &scen_solver);

  // ---- lemmas ---------------------------------------------------------
  auto* lem_cmd = app.add_subcommand("lemmas", "Monte Carlo lemma verification");
  std::uint64_t lem_seed = 1;
  int lem_chisq = 10000, lem_vectors = 10000, lem_width = 2000;
  std::string lem_out;
  bool lem_check = false;
  lem_cmd->add_option("--seed", lem_seed, "master seed");
  lem_cmd->add_option("--trials", lem_chisq, "chi-squared trials");
  lem_cmd->add_option("--vectors", lem_vectors, "norm-ball test vectors");
  lem_cmd->add_option("--width-trials", lem_width, "width-chain trials");
  lem_cmd->add_option("--out", lem_out, "output directory");
  lem_cmd->add_flag("--check", lem_check, "exit 2 unless every row passes");

  // ---- wavelet-demo ---------------------------------------------------
  auto* wav_cmd = app.add_subcommand(
      "wavelet-demo", "blocks signal recovery with parent-child groups");
  int wp = 1024;
  std::uint64_t wav_seed = 1;
  std::string wav_out;
  bool wav_full = false, wav_check = false;
  gsr::SolverConfig wav_solver;
  wav_cmd->add_option("--p", wp, "signal length (power of two)");
  wav_cmd->add_option("--seed", wav_seed, "measurement seed");
  wav_cmd->add_option("--out", wav_out, "output directory");
  wav_cmd->add_flag("--full-scale", wav_full, "p = 16384 run");
  wav_cmd->add_flag("--check", wav_check, "exit 2 unless relative error <= 1e-3");
  add_solver_flags(wav_cmd, &wav_solver);

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) omp_set_num_threads(threads);
  gsr::kernels::set_parallel_enabled(!serial);

  try {
    if (*bound_cmd) {
      gsr::BoundReport rep;
      if (bound_kind == "group") rep = gsr::group_bound(bM, bk, bB);
      else if (bound_kind == "noisy") rep = gsr::noisy_bound(bM, bk, bB, beps);
      else if (bound_kind == "lasso") rep = gsr::lasso_bound(bs, bp);
      else {
        rep.kind = "chisq_max";
        rep.inputs = {{"L", double(bL)}, {"d", double(bd)}};
        rep.raw = gsr::chisq_max_bound(bL, bd);
        rep.measurements = static_cast<long>(std::ceil(rep.raw));
      }
      std::cout << rep.to_json() << "\n";
      return 0;
    }

    if (*rec_cmd) {
      gsr::GroupStructure g =
          rec_groups_file.empty()
              ? gsr::make_scenario(gsr::scenario_from_tag(rec_scenario), rM, rB,
                                   {.overlap = rOverlap,
                                    .seed = gsr::derive_seed(rec_seed, {1})})
              : gsr::group_structure_from_json(read_file(rec_groups_file));
      for (const auto& w : gsr::structure_warnings(g))
        std::cerr << "warning: " << w << "\n";
      const auto active = gsr::random_active_set(g, rk, gsr::derive_seed(rec_seed, {2}));
      const gsr::Vec x_star = gsr::sample_signal(
          active, gsr::value_law_from_tag(rec_law), gsr::derive_seed(rec_seed, {3}));
      if (rn <= 0)
        rn = static_cast<int>(
            gsr::group_bound(g.num_groups(), rk, g.max_group_size()).measurements);
      const auto e = gsr::gaussian_matrix(rn, g.p, gsr::derive_seed(rec_seed, {4}));
      const auto obs = gsr::measure(e, x_star, rDelta, gsr::derive_seed(rec_seed, {5}));
      const auto mode = rDelta > 0.0 ? gsr::RecoveryMode::Noisy : gsr::RecoveryMode::Exact;
      const auto res = gsr::recover(e, obs, g, rec_solver, mode, &x_star);

      std::printf(
          "{\"p\":%d,\"n\":%d,\"k\":%d,\"relative_error\":%.6g,\"residual\":%.6g,"
          "\"lambda\":%.6g,\"iterations\":%d,\"converged\":%s,\"feasible\":%s}\n",
          g.p, rn, rk, res.relative_error, res.residual, res.lambda, res.iterations,
          res.converged ? "true" : "false", res.feasible ? "true" : "false");
      if (!rec_out.empty())
        write_vector_csv(out_path(rec_out, "recovery.csv"), x_star, res.x_hat,
                         "index,x_star,x_hat");
      return 0;
    }

    if (*phase_cmd) {
      gsr::ExperimentConfig cfg;
      if (!phase_config.empty()) {
        cfg = gsr::ExperimentConfig::from_json(read_file(phase_config));
      } else {
        cfg.scenario = gsr::scenario_from_tag(phase_scenario);
        cfg.M = pM;
        cfg.B = pB;
        cfg.k = pk;
        cfg.overlap = pOverlap;
        cfg.trials = pTrials;
        cfg.master_seed = phase_seed;
        cfg.solver = phase_solver;
        cfg.n_grid = p_n_grid;
        const bool default_grid = cfg.n_grid.empty();
        if (phase_full) {
          cfg.M = 100;
          cfg.B = 20;
          cfg.k = 5;
          cfg.trials = 100;
          if (default_grid)
            for (int n = 120; n <= 520; n += 40) cfg.n_grid.push_back(n);
        } else if (default_grid) {
          for (int n = 20; n <= 120; n += 10) cfg.n_grid.push_back(n);
        }
        if (default_grid) {  // make sure the bound itself is sampled
          cfg.n_grid.push_back(static_cast<int>(
              gsr::group_bound(cfg.M, cfg.k, cfg.B).measurements));
          std::sort(cfg.n_grid.begin(), cfg.n_grid.end());
          cfg.n_grid.erase(std::unique(cfg.n_grid.begin(), cfg.n_grid.end()),
                           cfg.n_grid.end());
        }
      }
      if (phase_no_walltime) cfg.record_wall_time = false;
      const auto bound = gsr::group_bound(cfg.M, cfg.k, cfg.B);

      const auto records = gsr::run_phase_sweep(cfg);
      const std::string dir = !phase_out.empty() ? phase_out : cfg.out_dir;
      gsr::emit_csv(records, out_path(dir, "phase.csv"));
      gsr::emit_svg_plot(records, out_path(dir, "phase.svg"), {bound.raw});

      // summarize at the grid point nearest the bound
      int n_at_bound = cfg.n_grid.front();
      for (int n : cfg.n_grid)
        if (std::abs(n - bound.measurements) <
            std::abs(n_at_bound - bound.measurements))
          n_at_bound = n;
      const double g_rate = gsr::success_rate(records, n_at_bound, "group");
      const double l_rate = gsr::success_rate(records, n_at_bound, "lasso");
      std::printf("{\"bound\":%.3f,\"n\":%d,\"group_success\":%.3f,"
                  "\"lasso_success\":%.3f}\n",
                  bound.raw, n_at_bound, g_rate, l_rate);
      if (phase_check) {
        const bool at_bound = n_at_bound == static_cast<int>(bound.measurements);
        if (!at_bound || g_rate < 0.9 || g_rate <= l_rate) return kCheckFailed;
      }
      return 0;
    }

    if (*scen_cmd) {
      if (scen_full) {
        sM = 100;
        sB = 40;
        sk = 5;
        sTrials = 100;
      }
      const auto outcomes =
          gsr::run_scenario_suite(sM, sB, sk, sTrials, scen_seed, scen_solver);
      bool all_ok = true;
      std::ofstream csv;
      if (!scen_out.empty()) {
        csv.open(out_path(scen_out, "scenarios.csv"));
        csv << "scenario,p,n,group_success,lasso_success\n";
      }
      for (const auto& oc : outcomes) {
        std::printf("%-15s p=%-5d n=%-5d group=%.3f lasso=%.3f\n",
                    gsr::scenario_tag(oc.kind).c_str(), oc.p, oc.n,
                    oc.group_success, oc.lasso_success);
        if (csv.is_open())
          csv << gsr::scenario_tag(oc.kind) << "," << oc.p << "," << oc.n << ","
              << oc.group_success << "," << oc.lasso_success << "\n";
        all_ok = all_ok && oc.group_success >= 0.9;
      }
      return scen_check && !all_ok ? kCheckFailed : 0;
    }

    if (*lem_cmd) {
      const auto rows = gsr::run_lemma_suite(lem_seed, lem_chisq, lem_vectors, lem_width);
      const std::string path = out_path(lem_out, "lemmas.csv");
      gsr::emit_lemma_csv(rows, path);
      bool all_ok = true;
      for (const auto& row : rows) {
        std::printf("%-10s %-40s empirical=%-12.6g bound=%-12.6g %s\n",
                    row.check.c_str(), row.params.c_str(), row.empirical, row.bound,
                    row.pass ? "pass" : "FAIL");
        all_ok = all_ok && row.pass;
      }
      return lem_check && !all_ok ? kCheckFailed : 0;
    }

    if (*wav_cmd) {
      if (wav_full) wp = 16384;
      const gsr::Vec x = gsr::blocks_signal(wp);
      int levels = 0;
      while ((1 << levels) < wp) ++levels;
      const auto coeffs = gsr::haar_forward(x, levels);
      const auto sparsity = gsr::wavelet_sparsity(coeffs.coeffs);
      const auto g = gsr::wavelet_recovery_groups(wp);
      const auto bound = gsr::group_bound(wp - 2, sparsity.cover_k, 2);
      const int n = static_cast<int>(bound.measurements);

      const auto e = gsr::gaussian_matrix(n, wp, wav_seed);
      const auto obs = gsr::measure(e, coeffs.coeffs);
      const auto res =
          gsr::recover(e, obs, g, wav_solver, gsr::RecoveryMode::Exact, &coeffs.coeffs);

      gsr::WaveletCoeffs chat;
      chat.length = wp;
      chat.levels = levels;
      chat.coeffs = res.x_hat;
      const gsr::Vec xhat = gsr::haar_inverse(chat);

      std::printf(
          "{\"p\":%d,\"nonzeros\":%d,\"k_cover\":%d,\"k_intersecting\":%d,"
          "\"bound\":%.3f,\"n\":%d,\"relative_error\":%.6g}\n",
          wp, sparsity.nonzeros, sparsity.cover_k, sparsity.intersecting, bound.raw,
          n, res.relative_error);
      if (!wav_out.empty())
        write_vector_csv(out_path(wav_out, "wavelet.csv"), x, xhat,
                         "index,original,reconstruction");
      if (wav_check && !(res.relative_error <= 1e-3)) return kCheckFailed;
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
