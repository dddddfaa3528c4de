#include "gsr/parallel.hpp"

#include <atomic>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gsr::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Fork-join overhead swamps the small O(p) loops; only spread work that is
// worth spreading. Results are identical either way.
constexpr long kMinParallelWork = 1L << 15;

bool worth_forking(long work) {
  return g_parallel.load(std::memory_order_relaxed) && work >= kMinParallelWork;
}

}  // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel_enabled(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void matvec(const RowMat& a, const Vec& x, Vec& out) {
  const Eigen::Index n = a.rows();
  out.resize(n);
  const bool par = worth_forking(static_cast<long>(n) * a.cols());
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index i = 0; i < n; ++i) out[i] = a.row(i).dot(x);
}

void matvec_transpose(const RowMat& a, const Vec& r, Vec& out) {
  const Eigen::Index n = a.rows();
  const Eigen::Index p = a.cols();
  out.setZero(p);
  const bool par = worth_forking(static_cast<long>(n) * p);
  // Column blocks: each thread streams whole-row segments of its block, and
  // every out[j] accumulates over i in ascending order regardless of the
  // number of threads.
  constexpr Eigen::Index kBlock = 256;
  const Eigen::Index nblocks = (p + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static) if (par)
  for (Eigen::Index b = 0; b < nblocks; ++b) {
    const Eigen::Index j0 = b * kBlock;
    const Eigen::Index j1 = std::min(p, j0 + kBlock);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ri = r[i];
      const double* row = a.data() + i * p;
      for (Eigen::Index j = j0; j < j1; ++j) out[j] += row[j] * ri;
    }
  }
}

void collapse(const ReplicationMap& rep, const Vec& x_tilde, Vec& out) {
  out.resize(rep.p);
  const bool par = worth_forking(rep.p_tilde);
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < rep.p; ++i) {
    double s = 0.0;
    for (int j : rep.replicas[static_cast<std::size_t>(i)]) s += x_tilde[j];
    out[i] = s;
  }
}

void lift(const ReplicationMap& rep, const Vec& x, Vec& out) {
  out.resize(rep.p_tilde);
  const bool par = worth_forking(rep.p_tilde);
#pragma omp parallel for schedule(static) if (par)
  for (int j = 0; j < rep.p_tilde; ++j)
    out[j] = x[rep.source[static_cast<std::size_t>(j)]];
}

void block_soft_threshold(const ReplicationMap& rep, const Vec& v, double tau,
                          Vec& out) {
  out.resize(rep.p_tilde);
  const int m = rep.num_blocks();
  const bool par = worth_forking(rep.p_tilde);
#pragma omp parallel for schedule(static) if (par)
  for (int g = 0; g < m; ++g) {
    const int lo = rep.block_offset[static_cast<std::size_t>(g)];
    const int len = rep.block_offset[static_cast<std::size_t>(g) + 1] - lo;
    const double nrm = v.segment(lo, len).norm();
    if (nrm <= tau)
      out.segment(lo, len).setZero();
    else
      out.segment(lo, len) = (1.0 - tau / nrm) * v.segment(lo, len);
  }
}

void block_norms(const ReplicationMap& rep, const Vec& x_tilde,
                 std::vector<double>& out) {
  const int m = rep.num_blocks();
  out.resize(static_cast<std::size_t>(m));
  const bool par = worth_forking(rep.p_tilde);
#pragma omp parallel for schedule(static) if (par)
  for (int g = 0; g < m; ++g) {
    const int lo = rep.block_offset[static_cast<std::size_t>(g)];
    const int len = rep.block_offset[static_cast<std::size_t>(g) + 1] - lo;
    out[static_cast<std::size_t>(g)] = x_tilde.segment(lo, len).norm();
  }
}

double max_group_norm(const GroupStructure& g, const Vec& u) {
  const int m = g.num_groups();
  double best = 0.0;
  long work = 0;
  for (const auto& grp : g.groups) work += static_cast<long>(grp.size());
  const bool par = worth_forking(work);
#pragma omp parallel for schedule(static) reduction(max : best) if (par)
  for (int gi = 0; gi < m; ++gi) {
    double s = 0.0;
    for (int i : g.groups[static_cast<std::size_t>(gi)]) s += u[i] * u[i];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace gsr::kernels

namespace gsr::reference {

void matvec(const RowMat& a, const Vec& x, Vec& out) {
  const Eigen::Index n = a.rows();
  const Eigen::Index p = a.cols();
  out.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = a.data() + i * p;
    for (Eigen::Index j = 0; j < p; ++j) s += row[j] * x[j];
    out[i] = s;
  }
}

void matvec_transpose(const RowMat& a, const Vec& r, Vec& out) {
  const Eigen::Index n = a.rows();
  const Eigen::Index p = a.cols();
  out.setZero(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ri = r[i];
    const double* row = a.data() + i * p;
    for (Eigen::Index j = 0; j < p; ++j) out[j] += row[j] * ri;
  }
}

void collapse(const ReplicationMap& rep, const Vec& x_tilde, Vec& out) {
  out = rep.collapse(x_tilde);
}

void lift(const ReplicationMap& rep, const Vec& x, Vec& out) {
  out = rep.lift(x);
}

void block_soft_threshold(const ReplicationMap& rep, const Vec& v, double tau,
                          Vec& out) {
  out.resize(rep.p_tilde);
  for (int g = 0; g < rep.num_blocks(); ++g) {
    const int lo = rep.block_offset[static_cast<std::size_t>(g)];
    const int len = rep.block_offset[static_cast<std::size_t>(g) + 1] - lo;
    double s = 0.0;
    for (int j = lo; j < lo + len; ++j) s += v[j] * v[j];
    const double nrm = std::sqrt(s);
    const double scale = nrm <= tau ? 0.0 : 1.0 - tau / nrm;
    for (int j = lo; j < lo + len; ++j) out[j] = scale * v[j];
  }
}

void block_norms(const ReplicationMap& rep, const Vec& x_tilde,
                 std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(rep.num_blocks()));
  for (int g = 0; g < rep.num_blocks(); ++g) {
    const int lo = rep.block_offset[static_cast<std::size_t>(g)];
    const int len = rep.block_offset[static_cast<std::size_t>(g) + 1] - lo;
    double s = 0.0;
    for (int j = lo; j < lo + len; ++j) s += x_tilde[j] * x_tilde[j];
    out[static_cast<std::size_t>(g)] = std::sqrt(s);
  }
}

double max_group_norm(const GroupStructure& g, const Vec& u) {
  double best = 0.0;
  for (const auto& grp : g.groups) {
    double s = 0.0;
    for (int i : grp) s += u[i] * u[i];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace gsr::reference
