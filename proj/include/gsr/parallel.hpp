#pragma once

// OpenMP kernels for the solver inner loops, plus naive serial reference
// implementations used by the tests and the benchmark. Every output element
// is produced by exactly one thread with a fixed accumulation order, so
// kernel results do not depend on the thread count.

#include <vector>

#include "gsr/groups.hpp"
#include "gsr/types.hpp"

namespace gsr::kernels {

// Process-wide switch; when off the kernels run their loops on one thread.
bool parallel_enabled();
void set_parallel_enabled(bool on);
int max_threads();

void matvec(const RowMat& a, const Vec& x, Vec& out);            // out = A x
void matvec_transpose(const RowMat& a, const Vec& r, Vec& out);  // out = A^T r

void collapse(const ReplicationMap& rep, const Vec& x_tilde, Vec& out);
void lift(const ReplicationMap& rep, const Vec& x, Vec& out);

// Per replicated block: v_g * max(0, 1 - tau/||v_g||), zero when ||v_g|| <= tau.
void block_soft_threshold(const ReplicationMap& rep, const Vec& v, double tau,
                          Vec& out);

// Euclidean norm of each replicated block.
void block_norms(const ReplicationMap& rep, const Vec& x_tilde,
                 std::vector<double>& out);

// max_G ||u_G|| over the (possibly overlapping) groups of g.
double max_group_norm(const GroupStructure& g, const Vec& u);

}  // namespace gsr::kernels

namespace gsr::reference {

// Plain serial loops, kept deliberately simple; the kernel tests assert
// agreement with gsr::kernels on random inputs.

void matvec(const RowMat& a, const Vec& x, Vec& out);
void matvec_transpose(const RowMat& a, const Vec& r, Vec& out);
void collapse(const ReplicationMap& rep, const Vec& x_tilde, Vec& out);
void lift(const ReplicationMap& rep, const Vec& x, Vec& out);
void block_soft_threshold(const ReplicationMap& rep, const Vec& v, double tau,
                          Vec& out);
void block_norms(const ReplicationMap& rep, const Vec& x_tilde,
                 std::vector<double>& out);
double max_group_norm(const GroupStructure& g, const Vec& u);

}  // namespace gsr::reference
