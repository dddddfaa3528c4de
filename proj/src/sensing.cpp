#include "gsr/sensing.hpp"

#include <stdexcept>

#include "gsr/parallel.hpp"
#include "gsr/rng.hpp"

namespace gsr {

MeasurementEnsemble gaussian_matrix(int n, int p, std::uint64_t seed,
                                    double entry_scale) {
  if (n < 1 || p < 1)
    throw std::invalid_argument("gaussian_matrix: dimensions must be >= 1");
  MeasurementEnsemble e;
  e.n = n;
  e.p = p;
  e.seed = seed;
  e.entry_scale = entry_scale;
  e.matrix.resize(n, p);
  Rng rng(seed);
  double* data = e.matrix.data();
  const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(p);
  for (std::size_t t = 0; t < count; ++t) data[t] = entry_scale * rng.gaussian();
  return e;
}

Observation measure(const MeasurementEnsemble& e, const Vec& x, double delta,
                    std::uint64_t noise_seed) {
  if (x.size() != e.p) throw std::invalid_argument("measure: dimension mismatch");
  if (delta < 0.0) throw std::invalid_argument("measure: delta must be >= 0");
  Observation obs;
  obs.delta = delta;
  obs.noise_seed = noise_seed;
  kernels::matvec(e.matrix, x, obs.y);
  if (delta > 0.0) {
    Rng rng(noise_seed);
    Vec theta(e.n);
    for (int i = 0; i < e.n; ++i) theta[i] = rng.gaussian();
    const double nrm = theta.norm();
    if (nrm > 0.0) obs.y += (delta / nrm) * theta;
  }
  return obs;
}

}  // namespace gsr
