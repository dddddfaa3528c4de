#include "gsr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "gsr/bounds.hpp"
#include "gsr/geometry.hpp"
#include "gsr/rng.hpp"
#include "gsr/sensing.hpp"

namespace gsr {

void ExperimentConfig::validate() const {
  if (M < 1 || B < 1 || k < 1 || k > M)
    throw std::invalid_argument("experiment config: need 1 <= k <= M, B >= 1");
  if (trials < 1) throw std::invalid_argument("experiment config: trials must be >= 1");
  if (n_grid.empty()) throw std::invalid_argument("experiment config: empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1)
      throw std::invalid_argument("experiment config: n values must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("experiment config: n grid must be strictly increasing");
  }
  solver.validate();
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario_tag(scenario);
  j["M"] = M;
  j["B"] = B;
  j["k"] = k;
  j["overlap"] = overlap;
  j["law"] = value_law_tag(law);
  j["n_grid"] = n_grid;
  j["trials"] = trials;
  j["master_seed"] = master_seed;
  j["record_wall_time"] = record_wall_time;
  j["out_dir"] = out_dir;
  nlohmann::json s;
  s["max_iter"] = solver.max_iter;
  s["rel_tol"] = solver.rel_tol;
  s["alpha_min"] = solver.alpha_min;
  s["alpha_max"] = solver.alpha_max;
  s["nonmonotone_window"] = solver.nonmonotone_window;
  s["sufficient_decrease"] = solver.sufficient_decrease;
  s["lambda_start_factor"] = solver.lambda_start_factor;
  s["lambda_decay"] = solver.lambda_decay;
  s["lambda_floor_factor"] = solver.lambda_floor_factor;
  s["exact_residual_tol"] = solver.exact_residual_tol;
  s["exact_recovery_threshold"] = solver.exact_recovery_threshold;
  s["admm_max_iter"] = solver.admm_max_iter;
  s["admm_tol"] = solver.admm_tol;
  j["solver"] = s;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  cfg.scenario = scenario_from_tag(j.value("scenario", scenario_tag(cfg.scenario)));
  cfg.M = j.value("M", cfg.M);
  cfg.B = j.value("B", cfg.B);
  cfg.k = j.value("k", cfg.k);
  cfg.overlap = j.value("overlap", cfg.overlap);
  cfg.law = value_law_from_tag(j.value("law", value_law_tag(cfg.law)));
  cfg.n_grid = j.value("n_grid", cfg.n_grid);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  cfg.record_wall_time = j.value("record_wall_time", cfg.record_wall_time);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
    cfg.solver.rel_tol = s.value("rel_tol", cfg.solver.rel_tol);
    cfg.solver.alpha_min = s.value("alpha_min", cfg.solver.alpha_min);
    cfg.solver.alpha_max = s.value("alpha_max", cfg.solver.alpha_max);
    cfg.solver.nonmonotone_window =
        s.value("nonmonotone_window", cfg.solver.nonmonotone_window);
    cfg.solver.sufficient_decrease =
        s.value("sufficient_decrease", cfg.solver.sufficient_decrease);
    cfg.solver.lambda_start_factor =
        s.value("lambda_start_factor", cfg.solver.lambda_start_factor);
    cfg.solver.lambda_decay = s.value("lambda_decay", cfg.solver.lambda_decay);
    cfg.solver.lambda_floor_factor =
        s.value("lambda_floor_factor", cfg.solver.lambda_floor_factor);
    cfg.solver.exact_residual_tol =
        s.value("exact_residual_tol", cfg.solver.exact_residual_tol);
    cfg.solver.exact_recovery_threshold =
        s.value("exact_recovery_threshold", cfg.solver.exact_recovery_threshold);
    cfg.solver.admm_max_iter = s.value("admm_max_iter", cfg.solver.admm_max_iter);
    cfg.solver.admm_tol = s.value("admm_tol", cfg.solver.admm_tol);
  }
  cfg.validate();
  return cfg;
}

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::vector<TrialRecord> run_phase_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string tag = scenario_tag(cfg.scenario);
  const auto scenario_id = static_cast<std::uint64_t>(cfg.scenario);
  const int num_n = static_cast<int>(cfg.n_grid.size());
  const int jobs = num_n * cfg.trials;

  std::vector<TrialRecord> records(static_cast<std::size_t>(jobs) * 2);

#pragma omp parallel for schedule(dynamic)
  for (int job = 0; job < jobs; ++job) {
    const int ni = job / cfg.trials;
    const int trial = job % cfg.trials;
    const int n = cfg.n_grid[static_cast<std::size_t>(ni)];
    const std::uint64_t seed = derive_seed(
        cfg.master_seed,
        {scenario_id, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});

    ScenarioParams params;
    params.overlap = cfg.overlap;
    params.seed = derive_seed(seed, {1});
    const GroupStructure g = make_scenario(cfg.scenario, cfg.M, cfg.B, params);
    const ActiveSet active = random_active_set(g, cfg.k, derive_seed(seed, {2}));
    const Vec x_star = sample_signal(active, cfg.law, derive_seed(seed, {3}));
    const MeasurementEnsemble e = gaussian_matrix(n, g.p, derive_seed(seed, {4}));
    const Observation obs = measure(e, x_star);

    const GroupStructure singles = singleton_groups(g.p);
    for (int m = 0; m < 2; ++m) {
      const bool is_group = m == 0;
      const double t0 = now_ms();
      const RecoveryResult res =
          recover(e, obs, is_group ? g : singles, cfg.solver, RecoveryMode::Exact,
                  &x_star);
      const double elapsed = now_ms() - t0;

      TrialRecord rec;
      rec.scenario = tag;
      rec.n = n;
      rec.trial = trial;
      rec.seed = seed;
      rec.method = is_group ? "group" : "lasso";
      rec.rel_error = res.relative_error;
      rec.success = res.relative_error <= cfg.solver.exact_recovery_threshold;
      rec.wall_ms = cfg.record_wall_time ? elapsed : 0.0;
      records[static_cast<std::size_t>(job) * 2 + static_cast<std::size_t>(m)] = rec;
    }
  }
  return records;
}

double success_rate(const std::vector<TrialRecord>& records, int n,
                    const std::string& method) {
  int total = 0, good = 0;
  for (const auto& r : records)
    if (r.n == n && r.method == method) {
      ++total;
      good += r.success ? 1 : 0;
    }
  return total == 0 ? 0.0 : static_cast<double>(good) / total;
}

void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot write " + path);
  out << "scenario,n,trial,seed,method,rel_error,success,wall_ms\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), ",%d,%d,%llu,%s,%.12g,%d,%.3f\n", r.n, r.trial,
                  static_cast<unsigned long long>(r.seed), r.method.c_str(),
                  r.rel_error, r.success ? 1 : 0, r.wall_ms);
    out << r.scenario << buf;
  }
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_svg_plot(const std::vector<TrialRecord>& records,
                   const std::string& path,
                   const std::vector<double>& bound_markers) {
  if (records.empty()) throw std::invalid_argument("emit_svg_plot: no records");

  // Mean relative error per (method, n).
  std::map<std::string, std::map<int, std::pair<double, int>>> series;
  for (const auto& r : records) {
    auto& cell = series[r.method][r.n];
    cell.first += r.rel_error;
    cell.second += 1;
  }

  double n_min = 1e300, n_max = -1e300;
  for (const auto& [method, pts] : series)
    for (const auto& [n, cell] : pts) {
      n_min = std::min(n_min, static_cast<double>(n));
      n_max = std::max(n_max, static_cast<double>(n));
    }
  for (double b : bound_markers) {
    n_min = std::min(n_min, b);
    n_max = std::max(n_max, b);
  }
  if (n_max <= n_min) n_max = n_min + 1.0;

  const double log_lo = -12.0, log_hi = 1.0;  // error axis, log10
  const double x0 = 70.0, x1 = 680.0, y0 = 420.0, y1 = 40.0;
  const auto xmap = [&](double n) {
    return x0 + (n - n_min) / (n_max - n_min) * (x1 - x0);
  };
  const auto ymap = [&](double err) {
    const double l = std::clamp(std::log10(std::max(err, 1e-12)), log_lo, log_hi);
    return y0 + (l - log_lo) / (log_hi - log_lo) * (y1 - y0);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_svg_plot: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"470\" "
         "viewBox=\"0 0 720 470\">\n"
      << "<rect width=\"720\" height=\"470\" fill=\"white\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\""
      << y0 << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\""
      << y1 << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (x0 + x1) / 2
      << "\" y=\"455\" text-anchor=\"middle\" font-size=\"14\">measurements n"
         "</text>\n"
      << "<text x=\"18\" y=\"" << (y0 + y1) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
      << (y0 + y1) / 2 << ")\">mean relative error (log)</text>\n";

  for (int dec = -12; dec <= 1; dec += 3) {
    const double y = ymap(std::pow(10.0, dec));
    out << "<line x1=\"" << x0 - 4 << "\" y1=\"" << y << "\" x2=\"" << x0
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << x0 - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\">1e" << dec << "</text>\n";
  }

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int color_idx = 0;
  double legend_y = 60.0;
  for (const auto& [method, pts] : series) {
    const char* color = colors[color_idx % 4];
    ++color_idx;
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [n, cell] : pts)
      out << xmap(n) << "," << ymap(cell.first / cell.second) << " ";
    out << "\"/>\n";
    out << "<text x=\"" << x1 - 140 << "\" y=\"" << legend_y << "\" fill=\"" << color
        << "\" font-size=\"13\">" << method << "</text>\n";
    legend_y += 18.0;
  }

  for (double b : bound_markers)
    out << "<line class=\"bound\" x1=\"" << xmap(b) << "\" y1=\"" << y0
        << "\" x2=\"" << xmap(b) << "\" y2=\"" << y1
        << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";

  out << "</svg>\n";
  if (!out) throw std::runtime_error("emit_svg_plot: write failed for " + path);
}

std::vector<ScenarioOutcome> run_scenario_suite(int M, int B, int k, int trials,
                                                std::uint64_t master_seed,
                                                const SolverConfig& solver) {
  const BoundReport bound = group_bound(M, k, B);
  const int n = static_cast<int>(bound.measurements);

  std::vector<ScenarioOutcome> out;
  for (Scenario kind : {Scenario::Disjoint, Scenario::Chain, Scenario::NearComplete,
                        Scenario::Alternating, Scenario::RandomOverlap}) {
    ExperimentConfig cfg;
    cfg.scenario = kind;
    cfg.M = M;
    cfg.B = B;
    cfg.k = k;
    cfg.overlap = kind == Scenario::Chain ? B / 2 : 0;
    cfg.law = ValueLaw::UniformSym;
    cfg.n_grid = {n};
    cfg.trials = trials;
    cfg.master_seed = master_seed;
    cfg.solver = solver;
    const auto records = run_phase_sweep(cfg);

    ScenarioOutcome res;
    res.kind = kind;
    res.n = n;
    ScenarioParams params;
    params.overlap = cfg.overlap;
    res.p = make_scenario(kind, M, B, params).p;
    res.group_success = success_rate(records, n, "group");
    res.lasso_success = success_rate(records, n, "lasso");
    out.push_back(res);
  }
  return out;
}

namespace {

std::string format_params(std::initializer_list<std::pair<const char*, double>> kv) {
  std::string s;
  char buf[64];
  for (const auto& [key, val] : kv) {
    if (!s.empty()) s += " ";
    std::snprintf(buf, sizeof(buf), "%s=%g", key, val);
    s += buf;
  }
  return s;
}

}  // namespace

std::vector<LemmaCheckRow> run_lemma_suite(std::uint64_t seed, int chisq_trials,
                                           int lemma3_vectors, int width_trials) {
  std::vector<LemmaCheckRow> rows;

  // E[max of L chi-squared(d)] <= (sqrt(2 ln L) + sqrt(d))^2, with 3 standard
  // errors of Monte Carlo slack.
  for (int L : {1, 2, 10, 95, 1000})
    for (int d : {1, 2, 20, 40}) {
      const auto est = estimate_chisq_max_stats(
          L, d, chisq_trials,
          derive_seed(seed, {0, static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(d)}));
      LemmaCheckRow row;
      row.check = "chisq_max";
      row.params = format_params({{"L", double(L)}, {"d", double(d)}});
      row.empirical = est.mean;
      row.bound = chisq_max_bound(L, d) + 3.0 * est.std_error;
      row.pass = row.empirical <= row.bound;
      rows.push_back(row);
    }

  // ||v|| <= sqrt(k) * max_G ||v_G|| for vectors supported on k groups;
  // deterministic inequality, checked on squared sums accumulated in index
  // order so the comparison is exact.
  const int m_groups = 20, b_size = 8;
  for (Scenario kind : {Scenario::Disjoint, Scenario::Chain, Scenario::NearComplete,
                        Scenario::Alternating, Scenario::RandomOverlap}) {
    ScenarioParams params;
    params.overlap = kind == Scenario::Chain ? b_size / 2 : 0;
    params.seed = derive_seed(seed, {1, static_cast<std::uint64_t>(kind)});
    const GroupStructure g = make_scenario(kind, m_groups, b_size, params);

    int violations = 0;
    double worst_ratio = 0.0;
    Rng rng(derive_seed(seed, {2, static_cast<std::uint64_t>(kind)}));
    for (int t = 0; t < lemma3_vectors; ++t) {
      const int k_draw = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m_groups)));
      const ActiveSet a =
          random_active_set(g, k_draw, derive_seed(seed, {3, static_cast<std::uint64_t>(kind),
                                                          static_cast<std::uint64_t>(t)}));
      Vec v = Vec::Zero(g.p);
      for (int i : union_support(a)) v[i] = rng.uniform(-1.0, 1.0);

      double lhs_sq = 0.0;
      for (int i = 0; i < g.p; ++i) lhs_sq += v[i] * v[i];
      double max_sq = 0.0;
      for (const auto& grp : g.groups) {
        double s = 0.0;
        for (int i : grp) s += v[i] * v[i];
        max_sq = std::max(max_sq, s);
      }
      const double rhs_sq = k_draw * max_sq;
      if (lhs_sq > rhs_sq) ++violations;
      if (rhs_sq > 0.0) worst_ratio = std::max(worst_ratio, lhs_sq / rhs_sq);
    }
    LemmaCheckRow row;
    row.check = "norm_ball";
    row.params = scenario_tag(kind) + " " +
                 format_params({{"M", double(m_groups)},
                                {"B", double(b_size)},
                                {"vectors", double(lemma3_vectors)}});
    row.empirical = worst_ratio;  // max ||v||^2 / (k max ||v_G||^2)
    row.bound = 1.0;
    row.pass = violations == 0;
    rows.push_back(row);
  }

  // Width chain on disjoint scenarios: E||r - w||^2 <= group bound.
  for (const auto& [m, kk, b] : {std::tuple{20, 2, 10}, std::tuple{100, 5, 20}}) {
    const GroupStructure g = make_scenario(Scenario::Disjoint, m, b);
    const ActiveSet a = random_active_set(
        g, kk, derive_seed(seed, {4, static_cast<std::uint64_t>(m)}));
    const WidthEstimate est =
        estimate_width_sq(a, width_trials, derive_seed(seed, {5, static_cast<std::uint64_t>(m)}));
    LemmaCheckRow row;
    row.check = "width_chain";
    row.params = format_params(
        {{"M", double(m)}, {"k", double(kk)}, {"B", double(b)}, {"trials", double(width_trials)}});
    row.empirical = est.mean_sq_dist;
    row.bound = group_bound(m, kk, b).raw + 3.0 * est.std_error;
    row.pass = est.mean_sq_dist <= row.bound && est.rejected == 0;
    rows.push_back(row);
  }

  return rows;
}

void emit_lemma_csv(const std::vector<LemmaCheckRow>& rows,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_lemma_csv: cannot write " + path);
  out << "check,params,empirical,bound,pass\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.check << "," << r.params << ",";
    std::snprintf(buf, sizeof(buf), "%.8g,%.8g,%d\n", r.empirical, r.bound,
                  r.pass ? 1 : 0);
    out << buf;
  }
  if (!out) throw std::runtime_error("emit_lemma_csv: write failed for " + path);
}

}  // namespace gsr
