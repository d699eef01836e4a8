#include "lcalim/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "lcalim/error.hpp"
#include "lcalim/sampler.hpp"
#include "lcalim/verify.hpp"

namespace lcalim {

namespace {

// Pinned tolerances, one per criterion.
constexpr double kClt1Tol = 5e-4;
constexpr double kHaar2Tol = 1e-6;
constexpr double kPoisson3Tol = 1e-3;
constexpr double kHaar4Tol = 1e-3;
constexpr double kSolenoid5Tol = 5e-4;
constexpr double kIdentity7Tol = 1e-10;
constexpr double kBand8RelSlack = 8.0 * std::numeric_limits<double>::epsilon();
constexpr double kCompoundGrowthRelTol = 1e-4;
constexpr double kMc10Sigmas = 4.0;
constexpr double kCylinder11Tol = 1e-9;

constexpr std::int64_t kMcReplicates = 100'000;
constexpr std::uint64_t kMcSeed = 42;
constexpr int kRandomMeasures = 1000;
constexpr int kBandSamples = 100'000;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::int64_t> grid_1e2_1e6() { return decade_grid(2, 6); }
std::vector<std::int64_t> grid_1e2_1e8() { return decade_grid(2, 8); }

std::vector<Character> padic_chars_upto(std::uint32_t max_d, std::uint32_t p, bool trivial) {
  std::vector<Character> out;
  for (std::uint32_t d = 0; d <= max_d; ++d) {
    const auto m = static_cast<std::int64_t>(checked_pow(p, d + 1));
    for (std::int64_t l = trivial ? 0 : 1; l < m; ++l) out.push_back(Character::padic(d, l));
  }
  return out;
}

std::vector<Character> torus_chars(std::int64_t max_l) {
  std::vector<Character> out;
  for (std::int64_t l = -max_l; l <= max_l; ++l)
    if (l != 0) out.push_back(Character::torus(l));
  return out;
}

// chi_{d,l}((1,0,...)) computed directly: exp(2 pi i l / 2^(d+1)).
Complex padic_unit_char(const Character& chi) {
  const double m = std::ldexp(1.0, static_cast<int>(chi.d) + 1);
  return std::polar(1.0, kTwoPi * static_cast<double>(chi.l) / m);
}

// --- criteria -------------------------------------------------------------

CriterionResult ac1_torus_clt() {
  const auto spec = arrays::torus_rademacher(1.0, -0.5);
  double worst = 0.0;
  for (int l = 1; l <= 3; ++l) {
    const auto ft = row_ft_exact(spec, 1'000'000, Character::torus(l));
    worst = std::max(worst, std::abs(ft - Complex{std::exp(-l * l / 2.0), 0.0}));
  }
  auto cfg = default_verify_config(spec.group);
  cfg.chars = torus_chars(3);
  const auto report = check_theorem(spec, gauss_law(spec.group, 1.0), cfg);
  const bool pass = worst <= kClt1Tol && report.verdict == OverallVerdict::pass;
  return {1, "torus Rademacher CLT", pass,
          "max |FT - e^{-l^2/2}| = " + fmt("%.3e", worst) + " (tol 5e-4), check_theorem " +
              to_string(report.verdict) + " [" + report.tag + "]"};
}

CriterionResult ac2_torus_haar() {
  const auto spec = arrays::torus_rademacher(1.0, -0.25);
  double worst = 0.0;
  for (int l = 1; l <= 5; ++l)
    worst = std::max(worst, std::abs(row_ft_exact(spec, 10'000, Character::torus(l))));
  bool diverges = true;
  TrendParams trend;
  for (int l = 1; l <= 5; ++l) {
    Sequence seq;
    for (auto n : grid_1e2_1e8())
      seq.emplace_back(n, symmetric_stat(spec, n, Character::torus(l)));
    diverges = diverges && trend_classify(seq, trend).kind == TrendVerdict::Kind::diverges;
  }
  return {2, "torus Haar limit", worst <= kHaar2Tol && diverges,
          "max |FT| at n=1e4 = " + fmt("%.3e", worst) + " (tol 1e-6), symmetric_stat " +
              (diverges ? "diverges" : "does not diverge") + " on 1e2..1e8 for l=1..5"};
}

CriterionResult ac3_padic_poisson() {
  const auto spec = arrays::padic_bernoulli(2.0, -1.0);
  double worst = 0.0;
  for (const auto& chi : padic_chars_upto(2, 2, true)) {
    const auto target = std::exp(2.0 * (padic_unit_char(chi) - 1.0));
    worst = std::max(worst, std::abs(row_ft_exact(spec, 100'000, chi) - target));
  }
  return {3, "Delta_2 Bernoulli Poisson", worst <= kPoisson3Tol,
          "max |FT - exp(2(chi(x)-1))| over d<=2 at n=1e5 = " + fmt("%.3e", worst) +
              " (tol 1e-3)"};
}

CriterionResult ac4_padic_haar() {
  const auto spec = arrays::padic_bernoulli(1.0, -0.5);
  const auto haar = haar_law(spec.group, CompactSubgroup::full());
  double worst = 0.0;
  bool annihilator_ok = true;
  for (const auto& chi : padic_chars_upto(2, 2, true)) {
    const auto limit = limit_law_ft(haar, chi);
    if (chi.trivial()) {
      annihilator_ok = annihilator_ok && limit == Complex{1.0, 0.0};
      continue;
    }
    annihilator_ok = annihilator_ok && limit == Complex{0.0, 0.0};
    worst = std::max(worst, std::abs(row_ft_exact(spec, 1'000'000, chi)));
  }
  PredictConfig pc{grid_1e2_1e8(), {}};
  const auto prediction = predict_limit(spec, pc);
  const bool predicted = prediction.law && prediction.tag == "bernoulli-haar" &&
                         prediction.law->H == CompactSubgroup::full();
  return {4, "Delta_2 Bernoulli Haar", worst <= kHaar4Tol && annihilator_ok && predicted,
          "max |FT| over nontrivial d<=2 at n=1e6 = " + fmt("%.3e", worst) +
              " (tol 1e-3), Haar FT zero exactly off the trivial character: " +
              (annihilator_ok ? "yes" : "no") + ", predicted " + prediction.tag};
}

CriterionResult ac5_solenoid_clt() {
  const auto spec = arrays::solenoid_rademacher();
  double worst = 0.0;
  for (std::uint32_t d = 0; d <= 2; ++d)
    for (std::int64_t l = -3; l <= 3; ++l) {
      const double target = std::exp(-static_cast<double>(l * l) / std::ldexp(1.0, 2 * d + 1));
      worst = std::max(worst, std::abs(row_ft_exact(spec, 1'000'000, Character::solenoid(d, l)) -
                                       Complex{target, 0.0}));
    }
  return {5, "solenoid Rademacher CLT", worst <= kSolenoid5Tol,
          "max |FT - e^{-l^2/2^{2d+1}}| at n=1e6 = " + fmt("%.3e", worst) + " (tol 5e-4)"};
}

CriterionResult ac6_equivalence() {
  struct Instance {
    std::string name;
    TriangularArraySpec spec;
    double b;
    bool convergent;
  };
  const std::vector<Instance> instances = {
      {"rademacher n^-1/2", arrays::torus_rademacher(1.0, -0.5), 1.0, true},
      {"mixture n^-1/2", arrays::torus_symmetric_mixture({1.0, 2.0}, {0.5, 0.5}, -0.5), 2.5,
       true},
      {"degenerate", arrays::torus_rademacher(0.0, 0.0), 0.0, true},
      {"rademacher n^-1/4", arrays::torus_rademacher(1.0, -0.25), 1.0, false},
      {"mixture n^-1/4", arrays::torus_symmetric_mixture({1.0, 2.0}, {0.5, 0.5}, -0.25), 1.0,
       false},
  };
  bool pass = true;
  std::string detail;
  for (const auto& inst : instances) {
    auto cfg = default_verify_config(inst.spec.group);
    cfg.grid = grid_1e2_1e8();
    cfg.chars = torus_chars(3);
    const auto r = crosscheck_gensym2(inst.spec, {inst.b}, cfg);
    const bool expected = r.ft_converges == inst.convergent;
    pass = pass && r.agree && expected;
    detail += (detail.empty() ? "" : "; ") + inst.name + ": " + (r.ft_converges ? "T" : "F") +
              (r.symmetric_converges ? "T" : "F") + (r.variance_tail ? "T" : "F");
  }
  return {6, "equivalence suite", pass, "(i)(ii)(iii) " + detail};
}

GroupElement random_element(const GroupId& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> turn(-0.5, 0.5);
  switch (g.kind) {
    case GroupKind::torus:
      return GroupElement::torus_turns(turn(rng));
    case GroupKind::solenoid:
      return GroupElement::solenoid_turns(g, turn(rng));
    case GroupKind::padic: {
      std::uniform_int_distribution<std::uint32_t> digit(0, g.prime - 1);
      std::vector<std::uint32_t> digits(g.depth + 1);
      for (auto& d : digits) d = digit(rng);
      return GroupElement::padic_digits(g, std::move(digits));
    }
  }
  return identity(g);
}

Character random_character(const GroupId& g, std::mt19937_64& rng, std::uint32_t max_d) {
  std::uniform_int_distribution<std::int64_t> ell(-20, 20);
  std::uniform_int_distribution<std::uint32_t> depth(0, max_d);
  switch (g.kind) {
    case GroupKind::torus:
      return Character::torus(ell(rng));
    case GroupKind::solenoid:
      return Character::solenoid(depth(rng), ell(rng));
    case GroupKind::padic: {
      const auto d = depth(rng);
      std::uniform_int_distribution<std::int64_t> l(0, static_cast<std::int64_t>(checked_pow(g.prime, d + 1)) - 1);
      return Character::padic(d, l(rng));
    }
  }
  return {};
}

DiscreteMeasure random_measure(const GroupId& g, std::mt19937_64& rng, bool levy) {
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> weight(0.01, 3.0);
  std::vector<Atom> atoms;
  const int k = count(rng);
  while (static_cast<int>(atoms.size()) < k) {
    auto x = random_element(g, rng);
    if (levy && is_identity(x)) continue;
    atoms.push_back({std::move(x), weight(rng)});
  }
  return DiscreteMeasure(g, std::move(atoms));
}

CriterionResult ac7_measure_identities() {
  std::mt19937_64 rng(7);
  const std::vector<GroupId> groups = {GroupId::torus(), GroupId::padic(2), GroupId::padic(3),
                                       GroupId::solenoid(2), GroupId::solenoid(3)};
  double worst_poisson = 0.0;
  double worst_conv = 0.0;
  std::int64_t parallelogram_fail = 0;
  std::uniform_int_distribution<int> eighths(0, 64);
  for (const auto& g : groups) {
    for (int i = 0; i < kRandomMeasures; ++i) {
      const auto eta = random_measure(g, rng, true);
      const auto levy = validate_levy(eta);
      const auto m = local_mean(eta);
      const auto chi = random_character(g, rng, 5);
      worst_poisson = std::max(
          worst_poisson,
          std::abs(cpoisson_ft(eta, chi) - genpoisson_ft(levy, chi) * char_eval(chi, m)));

      const auto mu = random_measure(g, rng, false);
      const auto nu = random_measure(g, rng, false);
      worst_conv = std::max(worst_conv, std::abs(measure_ft(convolve(mu, nu), chi) -
                                                 measure_ft(mu, chi) * measure_ft(nu, chi)));

      // parallelogram identity on dyadic b (exactly representable for p = 2 and the torus)
      if (g.kind == GroupKind::padic || g.prime == 3) continue;
      const QuadraticFormParam b{eighths(rng) / 8.0};
      const auto c1 = random_character(g, rng, 5);
      const auto c2 = random_character(g, rng, 5);
      const auto lhs = qform_eval(b, char_mul(c1, c2, g.prime), g) +
                       qform_eval(b, char_mul(c1, char_inv(c2, g.prime), g.prime), g);
      const auto rhs = 2.0 * qform_eval(b, c1, g) + 2.0 * qform_eval(b, c2, g);
      if (lhs != rhs) ++parallelogram_fail;
    }
  }
  const bool pass = worst_poisson <= kIdentity7Tol && worst_conv <= kIdentity7Tol &&
                    parallelogram_fail == 0;
  return {7, "measure-factor identities", pass,
          "e(eta) vs pi*delta_m: " + fmt("%.2e", worst_poisson) + ", convolution: " +
              fmt("%.2e", worst_conv) + " (tol 1e-10), parallelogram mismatches: " +
              std::to_string(parallelogram_fail)};
}

// x drawn inside the neighborhood where chi(x) = exp(i g(x, chi)).
GroupElement random_local_element(const GroupId& g, const Character& chi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution shrink(0.5);
  const double l = std::max<double>(1.0, std::abs(static_cast<double>(chi.l)));
  const double s = unit(rng) / (shrink(rng) ? l : 1.0);
  switch (g.kind) {
    case GroupKind::torus:
      return GroupElement::torus_radians(s * kPi / 2.0);
    case GroupKind::solenoid: {
      // |arg y_d| < pi / (2 p^d), so arg y_0 = p^d arg y_d without wrapping
      const double pd = std::pow(static_cast<double>(g.prime), chi.d);
      return GroupElement::solenoid_from_base(g, pd * (s * kPi / (2.0 * pd)));
    }
    case GroupKind::padic: {
      auto x = random_element(g, rng);
      std::vector<std::uint32_t> digits(x.digits().begin(), x.digits().end());
      for (std::uint32_t j = 0; j <= chi.d && j < digits.size(); ++j) digits[j] = 0;
      return GroupElement::padic_digits(g, std::move(digits));
    }
  }
  return identity(g);
}

CriterionResult ac8_inequality_band() {
  std::mt19937_64 rng(8);
  const std::vector<GroupId> groups = {GroupId::torus(), GroupId::padic(2), GroupId::padic(5),
                                       GroupId::solenoid(2), GroupId::solenoid(3)};
  std::int64_t tested = 0;
  std::int64_t violations = 0;
  for (const auto& g : groups) {
    std::int64_t here = 0;
    while (here < kBandSamples) {
      const auto chi = random_character(g, rng, 4);
      const auto x = random_local_element(g, chi, rng);
      const double gx = local_inner(x, chi);
      if (std::abs(gx) > kPi / 2.0) continue;
      const double deficit = -char_eval_minus_one(chi, x).real();
      if (!(0.25 * gx * gx <= deficit) || !(deficit <= 0.5 * gx * gx * (1.0 + kBand8RelSlack)))
        ++violations;
      ++here;
    }
    tested += here;
  }
  return {8, "inequality band", violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(tested) +
              " samples over 5 groups (relative slack 8 eps on the upper bound)"};
}

CriterionResult ac9_lemma_exp() {
  constexpr std::int64_t n = 1'000'000;
  double worst = 0.0;
  for (int a = -5; a <= 5; ++a)
    worst = std::max(worst, std::abs(compound_growth(a, n) - std::exp(a)) / std::exp(a));
  bool zero = true;
  for (const std::int64_t m : {std::int64_t{1}, std::int64_t{7}, std::int64_t{1000}, n}) zero = zero && compound_growth(-double(m), m) == 0.0;
  return {9, "compound growth limit", worst <= kCompoundGrowthRelTol && zero,
          "max relative error = " + fmt("%.3e", worst) + " (tol 1e-4), exact 0 at alpha=-n: " +
              (zero ? "yes" : "no")};
}

CriterionResult ac10_monte_carlo() {
  const double bound = kMc10Sigmas / std::sqrt(static_cast<double>(kMcReplicates));
  struct Case {
    TriangularArraySpec spec;
    std::vector<Character> chars;
  };
  const std::vector<Case> cases = {
      {arrays::torus_rademacher(1.0, -0.5), {Character::torus(1), Character::torus(2), Character::torus(3)}},
      {arrays::padic_bernoulli(2.0, -1.0), padic_chars_upto(2, 2, false)},
  };
  double worst = 0.0;
  bool identical = true;
  for (const auto& c : cases) {
    const auto a = empirical_ft(c.spec, 1000, c.chars, kMcReplicates, kMcSeed);
    const auto b = empirical_ft(c.spec, 1000, c.chars, kMcReplicates, kMcSeed, {}, false);
    identical = identical && a.estimate == b.estimate;
    for (std::size_t i = 0; i < c.chars.size(); ++i)
      worst = std::max(worst, std::abs(a.estimate[i] - row_ft_exact(c.spec, 1000, c.chars[i])));
  }
  return {10, "Monte Carlo cross-validation", worst <= bound && identical,
          "max |empirical - exact| = " + fmt("%.3e", worst) + " (bound 4/sqrt(M) = " +
              fmt("%.3e", bound) + "), rerun bit-identical: " + (identical ? "yes" : "no")};
}

CriterionResult ac11_cylinders() {
  const auto spec = arrays::padic_bernoulli(2.0, -1.0);
  const auto& g = spec.group;
  double worst = 0.0;
  int cylinders = 0;
  for (std::uint32_t r = 1; r <= 3; ++r)
    for (std::uint32_t code = 0; code < (1u << r); ++code) {
      std::vector<std::uint32_t> prefix(r);
      for (std::uint32_t j = 0; j < r; ++j) prefix[j] = (code >> j) & 1u;
      // the atom x = (1, 0, 0, ...) lies in the cylinder iff the prefixes agree
      bool contains_x = prefix[0] == 1;
      for (std::uint32_t j = 1; j < r; ++j) contains_x = contains_x && prefix[j] == 0;
      const double target = contains_x ? 2.0 : 0.0;
      const auto x0 = GroupElement::padic_digits(g, prefix);
      for (auto n : grid_1e2_1e6())
        worst = std::max(worst, std::abs(sum_cylinder(spec, n, x0, r) - target));
      ++cylinders;
    }
  return {11, "cylinder convergence", worst <= kCylinder11Tol,
          "max |eta_n(cyl) - eta(cyl)| over " + std::to_string(cylinders) +
              " cylinders, n=1e2..1e6: " + fmt("%.3e", worst) + " (tol 1e-9)"};
}

}  // namespace

namespace arrays {

TriangularArraySpec torus_rademacher(double coef, double exp) {
  return {GroupId::torus(), RademacherRows{ElementRule::torus_angle(Schedule::power(coef, exp))},
          Schedule::power(1.0, 1.0)};
}

TriangularArraySpec torus_symmetric_mixture(std::vector<double> coefs, std::vector<double> weights,
                                            double exp) {
  if (coefs.size() != weights.size()) throw DomainError("mixture coefficients and weights differ");
  IIDSymmetricRows rows;
  for (std::size_t i = 0; i < coefs.size(); ++i)
    rows.atoms.push_back({ElementRule::torus_angle(Schedule::power(coefs[i], exp)), weights[i]});
  return {GroupId::torus(), std::move(rows), Schedule::power(1.0, 1.0)};
}

TriangularArraySpec padic_bernoulli(double coef, double exp) {
  const auto g = GroupId::padic(2);
  return {g, BernoulliRows{GroupElement::padic_digits(g, {1}), Schedule::power(coef, exp)},
          Schedule::power(1.0, 1.0)};
}

TriangularArraySpec solenoid_rademacher() {
  return {GroupId::solenoid(2),
          RademacherRows{ElementRule::solenoid_base_angle(Schedule::power(1.0, -0.5))},
          Schedule::power(1.0, 1.0)};
}

}  // namespace arrays

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
  const std::vector<std::pair<int, std::function<CriterionResult()>>> criteria = {
      {1, ac1_torus_clt},       {2, ac2_torus_haar},          {3, ac3_padic_poisson},
      {4, ac4_padic_haar},      {5, ac5_solenoid_clt},        {6, ac6_equivalence},
      {7, ac7_measure_identities}, {8, ac8_inequality_band},  {9, ac9_lemma_exp},
      {10, ac10_monte_carlo},   {11, ac11_cylinders},
  };
  std::vector<CriterionResult> results;
  for (const auto& [id, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
    out << "AC " << r.id << (r.pass ? " PASS " : " FAIL ") << r.title << " -- " << r.detail
        << " [" << fmt("%.2f", secs.count()) << " s]" << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace lcalim
