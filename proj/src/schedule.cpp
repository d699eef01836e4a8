#include "lcalim/schedule.hpp"

#include <cmath>
#include <cstdio>

#include "lcalim/error.hpp"

namespace lcalim {

Schedule Schedule::constant(double value) {
  Schedule s;
  s.kind_ = Kind::constant;
  s.coef_ = value;
  return s;
}

Schedule Schedule::power(double coef, double exponent) {
  Schedule s;
  s.kind_ = Kind::power;
  s.coef_ = coef;
  s.exponent_ = exponent;
  return s;
}

Schedule Schedule::table(std::map<std::int64_t, double> values) {
  if (values.empty()) throw DomainError("table schedule needs at least one entry");
  Schedule s;
  s.kind_ = Kind::table;
  s.table_ = std::move(values);
  return s;
}

double Schedule::operator()(std::int64_t n) const {
  switch (kind_) {
    case Kind::constant:
      return coef_;
    case Kind::power:
      if (exponent_ == 0.0) return coef_;
      return coef_ * std::pow(static_cast<double>(n), exponent_);
    case Kind::table: {
      const auto it = table_.find(n);
      if (it == table_.end())
        throw DomainError("table schedule has no entry for n=" + std::to_string(n));
      return it->second;
    }
  }
  return 0.0;
}

std::string Schedule::describe() const {
  char buf[96];
  switch (kind_) {
    case Kind::constant:
      std::snprintf(buf, sizeof buf, "constant(%.17g)", coef_);
      return buf;
    case Kind::power:
      std::snprintf(buf, sizeof buf, "%.17g*n^%.17g", coef_, exponent_);
      return buf;
    case Kind::table:
      return "table(" + std::to_string(table_.size()) + " entries)";
  }
  return "?";
}

std::int64_t eval_count(const Schedule& s, std::int64_t n) {
  const double v = s(n);
  if (!std::isfinite(v) || v < 0.5 || v > 9.0e18)
    throw DomainError("count schedule " + s.describe() + " gives " + std::to_string(v) +
                      " at n=" + std::to_string(n));
  return std::llround(v);
}

}  // namespace lcalim
