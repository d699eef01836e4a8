#include "lcalim/trend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lcalim/error.hpp"

namespace lcalim {

bool TrendVerdict::converges_to(double target, double tol) const {
  return kind == Kind::converges && std::abs(value - target) <= tol;
}

std::string to_string(const TrendVerdict& v) {
  char buf[64];
  switch (v.kind) {
    case TrendVerdict::Kind::converges:
      std::snprintf(buf, sizeof buf, "converges(%.17g)", v.value);
      return buf;
    case TrendVerdict::Kind::diverges:
      return "diverges";
    case TrendVerdict::Kind::inconclusive:
      return "inconclusive";
  }
  return "?";
}

TrendVerdict trend_classify(std::span<const std::pair<std::int64_t, double>> seq,
                            const TrendParams& params) {
  if (params.window == 0) throw DomainError("trend window must be positive");
  if (seq.size() < params.window)
    throw DomainError("sequence of length " + std::to_string(seq.size()) +
                      " shorter than window " + std::to_string(params.window));
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i].first <= seq[i - 1].first) throw DomainError("sequence not sorted by n");

  TrendVerdict v;
  const auto tail = seq.last(params.window);
  for (const auto& [n, value] : tail) v.evidence.push_back(value);

  const auto [lo, hi] = std::ranges::minmax(v.evidence);
  if (std::isfinite(lo) && std::isfinite(hi) && hi - lo < params.tol) {
    double sum = 0.0;
    for (double x : v.evidence) sum += x;
    v.kind = TrendVerdict::Kind::converges;
    v.value = sum / static_cast<double>(v.evidence.size());
    return v;
  }
  bool increasing = true;
  for (std::size_t i = 1; i < v.evidence.size(); ++i)
    if (!(v.evidence[i] > v.evidence[i - 1])) increasing = false;
  if (increasing && v.evidence.back() > params.divergence) v.kind = TrendVerdict::Kind::diverges;
  return v;
}

}  // namespace lcalim
