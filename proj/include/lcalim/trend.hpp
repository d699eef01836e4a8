#pragma once

// Finite-grid judgments standing in for "-> c" and "-> infinity".

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lcalim {

struct TrendParams {
  double tol = 1e-3;
  std::size_t window = 3;
  double divergence = 1e3;
};

struct TrendVerdict {
  enum class Kind { converges, diverges, inconclusive };
  Kind kind = Kind::inconclusive;
  double value = 0.0;  // window mean when converging
  std::vector<double> evidence;

  bool converges_to(double target, double tol) const;
};

std::string to_string(const TrendVerdict& v);

using Sequence = std::vector<std::pair<std::int64_t, double>>;

/// ConvergesTo(mean) when the last `window` values span less than tol;
/// DivergesToInfinity when they are strictly increasing and the last exceeds
/// the divergence threshold; Inconclusive otherwise.
TrendVerdict trend_classify(std::span<const std::pair<std::int64_t, double>> seq,
                            const TrendParams& params);

}  // namespace lcalim
