#pragma once

#include <map>
#include <string>

namespace gsr {

// Evaluated closed-form measurement bound with its inputs.
struct BoundReport {
  std::string kind;  // "group" | "noisy" | "lasso" | "chisq_max"
  std::map<std::string, double> inputs;
  double raw = 0.0;
  long measurements = 0;  // ceil(raw), >= 1

  std::string to_json() const;
};

// Sufficient i.i.d. Gaussian measurement count for a k-of-M group-sparse
// signal with maximum group size B:
//   (sqrt(2 ln(M-k)) + sqrt(B))^2 * k + k*B,
// with the log term taken as 0 when M - k <= 1. Natural logarithms.
BoundReport group_bound(int M, int k, int B);

// Robust-recovery version: group bound divided by (1 - eps)^2, 0 < eps < 1.
BoundReport noisy_bound(int M, int k, int B, double eps);

// Plain-lasso baseline (2s+1) ln(p-s), 1 <= s < p.
BoundReport lasso_bound(int s, int p);

// Bound on E[max of L chi-squared(d) variables]: (sqrt(2 ln L) + sqrt(d))^2.
double chisq_max_bound(int L, int d);

}  // namespace gsr
