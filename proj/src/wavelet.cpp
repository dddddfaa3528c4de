#include "gsr/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace gsr {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool is_power_of_two(int p) { return p > 0 && (p & (p - 1)) == 0; }

}  // namespace

WaveletCoeffs haar_forward(const Vec& x, int levels) {
  const int p = static_cast<int>(x.size());
  if (!is_power_of_two(p) || p < 2)
    throw std::invalid_argument("haar_forward: length must be a power of two >= 2");
  if (levels < 1 || (1 << levels) > p)
    throw std::invalid_argument("haar_forward: levels must be in [1, log2 p]");

  WaveletCoeffs out;
  out.length = p;
  out.levels = levels;
  out.coeffs = x;
  Vec buf(p);
  for (int l = 0; l < levels; ++l) {
    const int n = p >> l;
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
      const double a = out.coeffs[2 * i];
      const double b = out.coeffs[2 * i + 1];
      buf[i] = (a + b) * kInvSqrt2;
      buf[half + i] = (a - b) * kInvSqrt2;
    }
    out.coeffs.head(n) = buf.head(n);
  }
  return out;
}

Vec haar_inverse(const WaveletCoeffs& c) {
  const int p = c.length;
  if (!is_power_of_two(p) || p < 2 || c.coeffs.size() != p)
    throw std::invalid_argument("haar_inverse: malformed coefficients");
  if (c.levels < 1 || (1 << c.levels) > p)
    throw std::invalid_argument("haar_inverse: levels must be in [1, log2 p]");

  Vec x = c.coeffs;
  Vec buf(p);
  for (int l = c.levels - 1; l >= 0; --l) {
    const int n = p >> l;
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
      const double a = x[i];
      const double d = x[half + i];
      buf[2 * i] = (a + d) * kInvSqrt2;
      buf[2 * i + 1] = (a - d) * kInvSqrt2;
    }
    x.head(n) = buf.head(n);
  }
  return x;
}

Vec blocks_signal(int p) {
  if (p < 2) throw std::invalid_argument("blocks_signal: p must be >= 2");
  static constexpr double kBreak[] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                                      0.44, 0.65, 0.76, 0.78, 0.81};
  static constexpr double kHeight[] = {4.0, -5.0, 3.0,  -4.0, 5.0, -4.2,
                                       2.1, 4.3,  -3.1, 2.1,  -4.2};
  Vec x = Vec::Zero(p);
  for (int i = 0; i < p; ++i) {
    const double t = static_cast<double>(i) / p;
    double v = 0.0;
    for (std::size_t j = 0; j < std::size(kBreak); ++j)
      if (t >= kBreak[j]) v += kHeight[j];
    x[i] = v;
  }
  return x;
}

GroupStructure parent_child_groups(int p) {
  if (!is_power_of_two(p) || p < 4)
    throw std::invalid_argument("parent_child_groups: p must be a power of two >= 4");
  std::vector<std::vector<int>> groups;
  groups.reserve(static_cast<std::size_t>(p) - 2);
  for (int child = 2; child < p; ++child)
    groups.push_back({child / 2, child});
  return make_group_structure(p, std::move(groups));
}

GroupStructure wavelet_recovery_groups(int p) {
  GroupStructure g = parent_child_groups(p);
  g.groups.push_back({0});
  return g;
}

WaveletSparsityReport wavelet_sparsity(const Vec& coeffs, double threshold) {
  const int p = static_cast<int>(coeffs.size());
  if (!is_power_of_two(p) || p < 4)
    throw std::invalid_argument("wavelet_sparsity: length must be a power of two >= 4");

  std::vector<char> supp(static_cast<std::size_t>(p), 0);
  WaveletSparsityReport rep;
  for (int i = 1; i < p; ++i)
    if (std::abs(coeffs[i]) > threshold) {
      supp[static_cast<std::size_t>(i)] = 1;
      ++rep.nonzeros;
    }

  for (int child = 2; child < p; ++child)
    if (supp[static_cast<std::size_t>(child)] ||
        supp[static_cast<std::size_t>(child / 2)])
      ++rep.intersecting;

  // Minimum edge cover of the support in the detail tree: |support| minus a
  // maximum support-support matching; leaf-first greedy matching is optimal
  // on trees.
  std::vector<char> matched(static_cast<std::size_t>(p), 0);
  int matching = 0;
  for (int node = p - 1; node >= 2; --node) {
    if (!supp[static_cast<std::size_t>(node)] || matched[static_cast<std::size_t>(node)])
      continue;
    const int parent = node / 2;
    if (parent >= 1 && supp[static_cast<std::size_t>(parent)] &&
        !matched[static_cast<std::size_t>(parent)]) {
      matched[static_cast<std::size_t>(node)] = 1;
      matched[static_cast<std::size_t>(parent)] = 1;
      ++matching;
    }
  }
  rep.cover_k = rep.nonzeros - matching;
  return rep;
}

}  // namespace gsr
