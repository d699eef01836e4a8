#pragma once

// Executable forms of the limit theorems: condition sequences on an n-grid,
// their trend verdicts, and the FT distance between exact row sums and a
// candidate limit law.

#include <optional>
#include <string>
#include <vector>

#include "lcalim/array.hpp"

namespace lcalim {

/// (1 + alpha/n)^n computed as exp(n log1p(alpha/n)); exactly 0 at alpha = -n.
double compound_growth(double alpha, std::int64_t n);

/// 10^e for e in [from, to].
std::vector<std::int64_t> decade_grid(int from_exp, int to_exp);

/// Torus |l| <= 8; Delta_p d <= 3 with every l in [0, p^(d+1)); S_p d <= 3 with
/// |l| <= 8 (trivial character excluded).
std::vector<Character> default_characters(const GroupId& g);
/// Torus eps in {pi/2, pi/4, pi/8}; Delta_p r in {1,2,3}; S_p (d, eps) with
/// d in {0,1,2} and the same eps values.
std::vector<Neighborhood> default_neighborhoods(const GroupId& g);

struct VerifyConfig {
  std::vector<std::int64_t> grid;
  std::vector<Character> chars;
  std::vector<Neighborhood> nbhds;
  TrendParams trend;
  /// The sup FT distance must converge to a value within ft_tol of 0.
  double ft_tol = 1e-3;
};

/// Grid 10^2..10^6 and the per-group default character / neighborhood sets.
VerifyConfig default_verify_config(const GroupId& g);

double ft_sup_distance(const TriangularArraySpec& spec, const LimitLaw& law, std::int64_t n,
                       std::span<const Character> chars);

struct FtRow {
  std::int64_t n = 0;
  Character chi;
  Complex exact;
  Complex limit;
  double abs_err = 0.0;
};

/// One hypothesis sequence and its judgment. A condition either expects
/// convergence to `target` (within the trend tolerance) or divergence.
struct ConditionSeries {
  std::string name;
  std::string param;
  bool expect_divergence = false;
  double target = 0.0;
  Sequence values;
  TrendVerdict verdict;
  bool pass = false;
};

enum class OverallVerdict { pass, fail, hypotheses_fail_ft_converges };
std::string to_string(OverallVerdict v);

struct ConvergenceReport {
  std::string tag;
  std::vector<FtRow> ft_table;
  std::vector<ConditionSeries> conditions;
  ConditionSeries ft_distance;
  bool hypotheses_pass = false;
  bool ft_pass = false;
  OverallVerdict verdict = OverallVerdict::fail;
};

/// Evaluates the condition sequences of the applicable theorem for (spec, law)
/// and the FT distance on the grid. Throws ConfigError for an invalid
/// configuration (b > 0 on Delta_p, grid shorter than the window, empty
/// character set) and GroupMismatch when array and law live on different
/// groups.
ConvergenceReport check_theorem(const TriangularArraySpec& spec, const LimitLaw& law,
                                const VerifyConfig& cfg);

/// Only the hypothesis sequences (no FT table).
std::vector<ConditionSeries> theorem_conditions(const TriangularArraySpec& spec,
                                                const LimitLaw& law, const VerifyConfig& cfg,
                                                std::string* tag = nullptr);

struct GensymCrosscheck {
  bool ft_converges = false;       // (i)  FT distance to gamma_psi_b -> 0
  bool symmetric_converges = false;  // (ii) K_n(1 - Re E chi) -> psi/2
  bool variance_tail = false;        // (iii) sum Var g -> psi and tails -> 0
  bool agree = false;
  std::vector<ConditionSeries> series;
};

/// The three equivalent statements for i.i.d. symmetric arrays against the
/// Gauss law with parameter b. Throws DomainError on a non-symmetric array.
GensymCrosscheck crosscheck_gensym2(const TriangularArraySpec& spec, QuadraticFormParam b,
                                    const VerifyConfig& cfg);

}  // namespace lcalim
