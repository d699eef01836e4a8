#pragma once

// The acceptance suite: one pass/fail line per criterion, with every
// tolerance pinned in acceptance.cpp. Shared by the acceptance test binary and
// `lcalim selftest`.

#include <ostream>
#include <string>
#include <vector>

#include "lcalim/array.hpp"

namespace lcalim {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

/// Runs all criteria, printing "AC <id> PASS|FAIL <title> -- <detail>" per line.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

namespace arrays {

/// Torus Rademacher: arg x_n = coef * n^exp, K_n = n.
TriangularArraySpec torus_rademacher(double coef, double exp);
/// Torus i.i.d. symmetric mixture: angles coef_i * n^exp with the given weights.
TriangularArraySpec torus_symmetric_mixture(std::vector<double> coefs, std::vector<double> weights,
                                            double exp);
/// Delta_2 Bernoulli at x = (1, 0, ...): p_n = coef * n^exp, K_n = n.
TriangularArraySpec padic_bernoulli(double coef, double exp);
/// S_2 Rademacher with arg y_0 = n^(-1/2), principal lift, K_n = n.
TriangularArraySpec solenoid_rademacher();

}  // namespace arrays

}  // namespace lcalim
