#include "gsr/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace gsr {

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["inputs"] = inputs;
  j["raw"] = raw;
  j["measurements"] = measurements;
  return j.dump();
}

namespace {

long ceil_measurements(double raw) {
  return std::max(1L, static_cast<long>(std::ceil(raw)));
}

}  // namespace

BoundReport group_bound(int M, int k, int B) {
  if (k < 1 || k > M) throw std::invalid_argument("group_bound: need 1 <= k <= M");
  if (B < 1) throw std::invalid_argument("group_bound: need B >= 1");
  const double log_term = M - k <= 1 ? 0.0 : std::log(static_cast<double>(M - k));
  const double root = std::sqrt(2.0 * log_term) + std::sqrt(static_cast<double>(B));
  const double raw = root * root * k + static_cast<double>(k) * B;
  return BoundReport{"group",
                     {{"M", double(M)}, {"k", double(k)}, {"B", double(B)}},
                     raw,
                     ceil_measurements(raw)};
}

BoundReport noisy_bound(int M, int k, int B, double eps) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("noisy_bound: need 0 < eps < 1");
  const BoundReport base = group_bound(M, k, B);
  const double raw = base.raw / ((1.0 - eps) * (1.0 - eps));
  return BoundReport{
      "noisy",
      {{"M", double(M)}, {"k", double(k)}, {"B", double(B)}, {"eps", eps}},
      raw,
      ceil_measurements(raw)};
}

BoundReport lasso_bound(int s, int p) {
  if (s < 1 || s >= p) throw std::invalid_argument("lasso_bound: need 1 <= s < p");
  const double raw = (2.0 * s + 1.0) * std::log(static_cast<double>(p - s));
  return BoundReport{
      "lasso", {{"s", double(s)}, {"p", double(p)}}, raw, ceil_measurements(raw)};
}

double chisq_max_bound(int L, int d) {
  if (L < 1 || d < 1) throw std::invalid_argument("chisq_max_bound: need L, d >= 1");
  const double log_term = L <= 1 ? 0.0 : std::log(static_cast<double>(L));
  const double root = std::sqrt(2.0 * log_term) + std::sqrt(static_cast<double>(d));
  return root * root;
}

}  // namespace gsr
