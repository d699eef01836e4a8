#pragma once

// Triangular arrays {X_{n,k} : k = 1..K_n} with rowwise independent entries,
// and the exact row statistics entering the limit-theorem hypotheses.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lcalim/measure.hpp"
#include "lcalim/schedule.hpp"
#include "lcalim/trend.hpp"

namespace lcalim {

/// A probability measure: a DiscreteMeasure of total mass 1 (within 1e-12).
class RowDistribution {
 public:
  explicit RowDistribution(DiscreteMeasure mu);

  const DiscreteMeasure& measure() const { return mu_; }
  const GroupId& group() const { return mu_.group(); }
  std::span<const Atom> atoms() const { return mu_.atoms(); }

 private:
  DiscreteMeasure mu_;
};

/// A rule n -> x_n.
class ElementRule {
 public:
  enum class Kind { fixed, torus_angle, solenoid_base_angle, padic_power };

  static ElementRule fixed(GroupElement x);
  /// arg x_n = angle(n).
  static ElementRule torus_angle(Schedule angle);
  /// arg y_0 = angle(n), principal lift to the working depth.
  static ElementRule solenoid_base_angle(Schedule angle);
  /// x_n = unit * p^valuation(n), valuation rounded to an integer.
  static ElementRule padic_power(Schedule valuation, std::int64_t unit);

  Kind kind() const { return kind_; }
  GroupElement at(const GroupId& g, std::int64_t n) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::fixed;
  GroupElement fixed_;
  Schedule schedule_;
  std::int64_t unit_ = 1;
};

struct RademacherRows {
  ElementRule x;  // P(X = x_n) = P(X = -x_n) = 1/2
};

struct BernoulliRows {
  GroupElement x;  // P(X = x) = p_n, P(X = e) = 1 - p_n
  Schedule p;
};

struct SymmetricAtom {
  ElementRule x;
  double weight = 0.0;  // split evenly between x_n and -x_n
};

struct IIDSymmetricRows {
  std::vector<SymmetricAtom> atoms;
};

/// Row k uses cycle[(k-1) mod L]; the rows do not depend on n.
struct GeneralRows {
  std::vector<RowDistribution> cycle;
};

using ArrayKind = std::variant<RademacherRows, BernoulliRows, IIDSymmetricRows, GeneralRows>;

struct TriangularArraySpec {
  GroupId group;
  ArrayKind kind;
  Schedule K;

  std::int64_t K_at(std::int64_t n) const { return eval_count(K, n); }
  bool iid() const;
  bool symmetric() const;
  std::string kind_name() const;
};

/// Checks the declared invariants on an evaluation grid: group consistency,
/// row masses, p_n in [0,1] and non-increasing, x_n approaching e
/// (non-increasing distance to the identity), x != e for Bernoulli rows.
void validate_array(const TriangularArraySpec& spec, std::span<const std::int64_t> grid);

/// A scalar distance to the identity used for "x_n -> e" checks: |arg| on the
/// torus, max_j |arg y_j| on S_p, the p-adic metric on Delta_p.
double distance_to_identity(const GroupElement& x);

RowDistribution row_dist(const TriangularArraySpec& spec, std::int64_t n, std::int64_t k);

/// Row n grouped into blocks of identically distributed entries: one block for
/// i.i.d. rows, one per cycle entry for general rows.
struct RowBlock {
  RowDistribution dist;
  std::int64_t count;
};
std::vector<RowBlock> row_blocks(const TriangularArraySpec& spec, std::int64_t n);

/// eta_n = sum_k P(X_{n,k} in .) restricted to G minus {e}.
DiscreteMeasure row_levy_measure(const TriangularArraySpec& spec, std::int64_t n);

/// E chi(X).
Complex char_moment(const RowDistribution& dist, const Character& chi);
/// E chi(X) - 1, computed without cancellation.
Complex char_moment_minus_one(const RowDistribution& dist, const Character& chi);

/// (1 + z)^K via exp(K log1p z) on the principal branch; exact 0 when 1+z = 0.
Complex power_one_plus(Complex z, std::int64_t k);

/// E chi(sum_k X_{n,k}) = prod_k E chi(X_{n,k}).
Complex row_ft_exact(const TriangularArraySpec& spec, std::int64_t n, const Character& chi);

/// Group sum of the local means of row n.
GroupElement sum_local_means(const TriangularArraySpec& spec, std::int64_t n);
/// sum_k Var g(X_{n,k}, chi).
double sum_var_g(const TriangularArraySpec& spec, std::int64_t n, const Character& chi);
/// sum_k P(X_{n,k} not in U).
double sum_tail(const TriangularArraySpec& spec, std::int64_t n, const Neighborhood& u);
/// eta_n(x0 + Lambda_r): sum_k P(X_{n,k} in x0 + Lambda_r, X_{n,k} != e),
/// Delta_p only.
double sum_cylinder(const TriangularArraySpec& spec, std::int64_t n, const GroupElement& x0,
                    std::uint32_t r);
/// max_k P(X_{n,k} not in U).
double infinitesimality_stat(const TriangularArraySpec& spec, std::int64_t n,
                             const Neighborhood& u);
/// K_n (1 - Re E chi(X_{n,1})), i.i.d. arrays only.
double symmetric_stat(const TriangularArraySpec& spec, std::int64_t n, const Character& chi);
/// K_n p_n, Bernoulli arrays only.
double bernoulli_rate(const TriangularArraySpec& spec, std::int64_t n);
/// K_n (arg x_n)^2 for Rademacher arrays on the torus (arg of x_0^{(n)} on S_p).
double rademacher_rate(const TriangularArraySpec& spec, std::int64_t n);

struct PredictConfig {
  std::vector<std::int64_t> grid;
  TrendParams trend;
  /// Largest r tried when recognising arg x = 2 pi j / r.
  std::uint64_t max_cyclic_order = 10000;
};

struct Prediction {
  std::optional<LimitLaw> law;
  std::string tag;  // theorem tag, or "unclassified"
  std::string reason;
};

/// Closed subgroup generated by x, when it is one of the modelled compact
/// subgroups (torus H_r / full, Delta_p Lambda_r).
std::optional<CompactSubgroup> generated_subgroup(const GroupElement& x,
                                                  std::uint64_t max_cyclic_order = 10000);

/// Theorem-predicted limit of a Rademacher or Bernoulli array.
Prediction predict_limit(const TriangularArraySpec& spec, const PredictConfig& cfg);

}  // namespace lcalim
