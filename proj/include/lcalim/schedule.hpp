#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace lcalim {

/// A closed-form parameter rule n -> value: a constant, c * n^e, or an explicit
/// table keyed by n.
class Schedule {
 public:
  enum class Kind { constant, power, table };

  Schedule() = default;
  static Schedule constant(double value);
  static Schedule power(double coef, double exponent);
  static Schedule table(std::map<std::int64_t, double> values);

  Kind kind() const { return kind_; }
  double operator()(std::int64_t n) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double coef_ = 0.0;
  double exponent_ = 0.0;
  std::map<std::int64_t, double> table_;
};

/// Rounds a count schedule (such as K_n) to a positive integer.
std::int64_t eval_count(const Schedule& s, std::int64_t n);

}  // namespace lcalim
