#pragma once

#include "gsr/groups.hpp"
#include "gsr/types.hpp"

namespace gsr {

// Orthonormal Haar pyramid. After `levels` stages of a length-p signal
// (p a power of two), coeffs holds [approx | detail_coarse | ... | detail_fine];
// at full depth index 0 is the scaling coefficient and detail index i >= 2
// has parent i/2 one scale coarser.
struct WaveletCoeffs {
  int length = 0;
  int levels = 0;
  Vec coeffs;
};

WaveletCoeffs haar_forward(const Vec& x, int levels);
Vec haar_inverse(const WaveletCoeffs& c);

// Piecewise-constant "blocks" test signal sampled at t = i/p on [0, 1):
// cumulative right-continuous steps of the standard breakpoint/height table.
Vec blocks_signal(int p);

// One group {parent, child} per parent-child detail edge of the full-depth
// Haar tree: M = p - 2 groups of size <= 2 over coefficient indices [1, p).
// Requires p a power of two, p >= 4.
GroupStructure parent_child_groups(int p);

// parent_child_groups plus a singleton group for the scaling coefficient, so
// index 0 is recoverable in the measurement model.
GroupStructure wavelet_recovery_groups(int p);

struct WaveletSparsityReport {
  int nonzeros = 0;      // detail coefficients above threshold
  int cover_k = 0;       // minimum number of parent-child groups covering them
  int intersecting = 0;  // parent-child groups touching the support at all
};

// Group sparsity of a coefficient vector under the parent-child structure.
// cover_k is the k of the measurement bound: the support lies in the union of
// that many groups. Computed exactly via leaf-first matching on the tree.
WaveletSparsityReport wavelet_sparsity(const Vec& coeffs, double threshold = 1e-9);

}  // namespace gsr
