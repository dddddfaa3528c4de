#pragma once

#include <cstdint>

#include "gsr/types.hpp"

namespace gsr {

// Dense Gaussian measurement operator. Entries are i.i.d. N(0, entry_scale^2)
// and regenerate bit-exactly from (n, p, seed): the fill is a single
// Box-Muller stream in row-major order.
struct MeasurementEnsemble {
  int n = 0;
  int p = 0;
  std::uint64_t seed = 0;
  double entry_scale = 1.0;
  RowMat matrix;
};

MeasurementEnsemble gaussian_matrix(int n, int p, std::uint64_t seed,
                                    double entry_scale = 1.0);

struct Observation {
  Vec y;
  double delta = 0.0;  // noise norm budget, ||y - Phi x*|| <= delta
  std::uint64_t noise_seed = 0;
};

// delta = 0: y = Phi x exactly. delta > 0: y = Phi x + theta with theta drawn
// uniformly on the sphere of radius delta (seeded).
Observation measure(const MeasurementEnsemble& e, const Vec& x,
                    double delta = 0.0, std::uint64_t noise_seed = 0);

}  // namespace gsr
