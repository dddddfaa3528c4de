// Timing comparison between the OpenMP kernels and the serial reference
// implementations, plus one end-to-end solve with the kernels toggled.

#include <omp.h>

#include <cstdio>
#include <functional>

#include "gsr/groups.hpp"
#include "gsr/parallel.hpp"
#include "gsr/rng.hpp"
#include "gsr/sensing.hpp"
#include "gsr/solver.hpp"

using namespace gsr;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const double t0 = omp_get_wtime();
  for (int r = 0; r < reps; ++r) fn();
  return (omp_get_wtime() - t0) * 1000.0 / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-24s serial %9.3f ms   openmp %9.3f ms   speedup %.2fx\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  // Defaults are sized so every kernel is above the parallel work threshold.
  int n = 600, m = 1700, b = 20, reps = 50;
  if (argc > 1) n = std::atoi(argv[1]);
  if (argc > 2) m = std::atoi(argv[2]);
  if (argc > 3) reps = std::atoi(argv[3]);

  const auto g = make_scenario(Scenario::Chain, m, b, {.overlap = b / 2});
  const auto rep = replicate(g);
  const auto e = gaussian_matrix(n, g.p, 1);

  Rng rng(2);
  Vec x(g.p), r(n), xt(rep.p_tilde);
  for (int i = 0; i < g.p; ++i) x[i] = rng.gaussian();
  for (int i = 0; i < n; ++i) r[i] = rng.gaussian();
  for (int i = 0; i < rep.p_tilde; ++i) xt[i] = rng.gaussian();

  std::printf("threads=%d  n=%d  p=%d  p_tilde=%d  reps=%d\n\n",
              kernels::max_threads(), n, g.p, rep.p_tilde, reps);

  Vec out;
  std::vector<double> norms;

  report("matvec",
         time_ms([&] { reference::matvec(e.matrix, x, out); }, reps),
         time_ms([&] { kernels::matvec(e.matrix, x, out); }, reps));
  report("matvec_transpose",
         time_ms([&] { reference::matvec_transpose(e.matrix, r, out); }, reps),
         time_ms([&] { kernels::matvec_transpose(e.matrix, r, out); }, reps));
  report("collapse",
         time_ms([&] { reference::collapse(rep, xt, out); }, reps),
         time_ms([&] { kernels::collapse(rep, xt, out); }, reps));
  report("lift",
         time_ms([&] { reference::lift(rep, x, out); }, reps),
         time_ms([&] { kernels::lift(rep, x, out); }, reps));
  report("block_soft_threshold",
         time_ms([&] { reference::block_soft_threshold(rep, xt, 0.4, out); }, reps),
         time_ms([&] { kernels::block_soft_threshold(rep, xt, 0.4, out); }, reps));
  report("block_norms",
         time_ms([&] { reference::block_norms(rep, xt, norms); }, reps),
         time_ms([&] { kernels::block_norms(rep, xt, norms); }, reps));
  report("max_group_norm",
         time_ms([&] { double v = reference::max_group_norm(g, x); (void)v; }, reps),
         time_ms([&] { double v = kernels::max_group_norm(g, x); (void)v; }, reps));

  // full solve with the kernel toggle; the solver itself is identical
  const auto a = random_active_set(g, 5, 3);
  const Vec x_star = sample_signal(a, ValueLaw::Uniform01, 4);
  const auto obs = measure(e, x_star);
  SolverConfig cfg;
  cfg.max_iter = 300;  // fixed work for a fair toggle comparison

  kernels::set_parallel_enabled(false);
  const double solve_serial =
      time_ms([&] { solve_group_lasso(e, obs, g, 0.05, cfg); }, std::max(1, reps / 25));
  kernels::set_parallel_enabled(true);
  const double solve_parallel =
      time_ms([&] { solve_group_lasso(e, obs, g, 0.05, cfg); }, std::max(1, reps / 25));
  report("solve (kernel toggle)", solve_serial, solve_parallel);

  return 0;
}
