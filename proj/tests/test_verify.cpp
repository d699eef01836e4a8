#include <doctest.h>

#include <cmath>
#include <random>

#include "lcalim/acceptance.hpp"
#include "lcalim/error.hpp"
#include "lcalim/verify.hpp"

using namespace lcalim;

namespace {

Sequence sequence_of(const std::vector<std::int64_t>& grid, double (*f)(double)) {
  Sequence s;
  for (auto n : grid) s.emplace_back(n, f(static_cast<double>(n)));
  return s;
}

VerifyConfig torus_config(std::int64_t max_l, int to_exp = 6) {
  VerifyConfig cfg = default_verify_config(GroupId::torus());
  cfg.grid = decade_grid(2, to_exp);
  cfg.chars.clear();
  for (std::int64_t l = 1; l <= max_l; ++l) cfg.chars.push_back(Character::torus(l));
  return cfg;
}

TriangularArraySpec torus_bernoulli(double coef) {
  return {GroupId::torus(),
          BernoulliRows{GroupElement::torus_radians(-kPi), Schedule::power(coef, -1.0)},
          Schedule::power(1.0, 1.0)};
}

const ConditionSeries* find(const std::vector<ConditionSeries>& cs, const std::string& name) {
  for (const auto& c : cs)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("compound_growth") {
  for (std::int64_t n : {1, 7, 1000, 1000000}) CHECK(compound_growth(0.0, n) == 1.0);
  const double oracle = static_cast<double>(std::exp(1000.0L * std::log1p(0.002L)));
  CHECK(compound_growth(2.0, 1000) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(compound_growth(2.0, 1000) == doctest::Approx(7.3743).epsilon(1e-5));
  for (std::int64_t n : {1, 2, 50, 1000000}) CHECK(compound_growth(-static_cast<double>(n), n) == 0.0);
  CHECK_THROWS_AS(compound_growth(-11.0, 10), DomainError);
  CHECK_THROWS_AS(compound_growth(1.0, 0), DomainError);
}

TEST_CASE("compound_growth approaches exp(alpha)") {
  for (int a = -5; a <= 5; ++a) {
    const double alpha = a;
    CHECK(std::abs(compound_growth(alpha, 1000000) - std::exp(alpha)) <= 1e-4 * std::exp(alpha));
  }
}

TEST_CASE("trend_classify") {
  const TrendParams params;
  const std::vector<std::int64_t> grid = {10, 100, 1000, 10000, 100000};
  const auto conv = trend_classify(sequence_of(grid, [](double n) { return 3.0 + 1.0 / n; }), params);
  CHECK(conv.kind == TrendVerdict::Kind::converges);
  CHECK(conv.value == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(conv.converges_to(3.0, 1e-3));
  CHECK_FALSE(conv.converges_to(3.1, 1e-3));
  CHECK(conv.evidence.size() == params.window);

  const std::vector<std::int64_t> big = {100, 10000, 1000000, 100000000};
  const auto div = trend_classify(sequence_of(big, [](double n) { return std::sqrt(n); }), params);
  CHECK(div.kind == TrendVerdict::Kind::diverges);

  const std::vector<std::int64_t> ints = {1, 2, 3, 4, 5, 6};
  const auto osc = trend_classify(sequence_of(ints, [](double n) { return std::fmod(n, 2.0) == 0 ? 1.0 : -1.0; }), params);
  CHECK(osc.kind == TrendVerdict::Kind::inconclusive);

  SUBCASE("growth below the divergence threshold is inconclusive") {
    const auto slow = trend_classify(sequence_of(grid, [](double n) { return std::log(n); }), params);
    CHECK(slow.kind == TrendVerdict::Kind::inconclusive);
  }
  SUBCASE("invalid input") {
    const Sequence two = {{1, 1.0}, {2, 1.0}};
    CHECK_THROWS_AS(trend_classify(two, params), DomainError);
    const Sequence unsorted = {{1, 1.0}, {3, 1.0}, {2, 1.0}};
    CHECK_THROWS_AS(trend_classify(unsorted, params), DomainError);
  }
}

TEST_CASE("tightening the tolerance never turns inconclusive into converging") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(-1.0, 1.0), tol(1e-6, 1.0);
  for (int i = 0; i < 20'000; ++i) {
    Sequence s;
    const double base = v(rng), spread = std::pow(10.0, -6.0 * std::abs(v(rng)));
    for (std::int64_t n = 1; n <= 6; ++n) s.emplace_back(n, base + spread * v(rng));
    TrendParams loose{tol(rng), 3, 1e3};
    TrendParams tight = loose;
    tight.tol *= std::abs(v(rng));
    const auto a = trend_classify(s, loose);
    const auto b = trend_classify(s, tight);
    if (a.kind == TrendVerdict::Kind::inconclusive) REQUIRE(b.kind != TrendVerdict::Kind::converges);
    // identical inputs give identical verdicts
    REQUIRE(trend_classify(s, tight).kind == b.kind);
  }
}

TEST_CASE("ft_sup_distance") {
  SUBCASE("a row sum distributed exactly as the law") {
    const auto g = GroupId::torus();
    const auto a = GroupElement::torus_radians(0.7);
    const TriangularArraySpec spec{g, GeneralRows{{RowDistribution(DiscreteMeasure::dirac(a))}},
                                   Schedule::constant(1)};
    const auto chars = default_characters(g);
    for (std::int64_t n : {1, 100}) CHECK(ft_sup_distance(spec, dirac_law(a), n, chars) <= 1e-15);
  }
  SUBCASE("Rademacher CLT at n = 1e6") {
    const std::vector<Character> chars = {Character::torus(1), Character::torus(2), Character::torus(3)};
    double oracle = 0.0;
    for (int l = 1; l <= 3; ++l)
      oracle = std::max(oracle, static_cast<double>(std::abs(std::pow(std::cos(l * 1e-3L), 1e6L) - std::exp(-l * l / 2.0L))));
    const double d = ft_sup_distance(arrays::torus_rademacher(1.0, -0.5), gauss_law(GroupId::torus(), 1.0), 1000000, chars);
    CHECK(d <= 5e-4);
    CHECK(d == doctest::Approx(oracle).epsilon(1e-6));
  }
  SUBCASE("Bernoulli rate 1 against a rate 2 Poisson law") {
    const auto x = GroupElement::torus_radians(-kPi);
    const auto law = compound_poisson_law(validate_levy(GroupId::torus(), {{x, 2.0}}));
    const std::vector<Character> chars = {Character::torus(1)};
    const std::int64_t n = 1000000;
    const double oracle = static_cast<double>(std::pow(1.0L - 2.0L / n, static_cast<long double>(n)) - std::exp(-4.0L));
    const double d = ft_sup_distance(torus_bernoulli(1.0), law, n, chars);
    CHECK(d == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(d == doctest::Approx(std::exp(-2.0) - std::exp(-4.0)).epsilon(1e-5));
    CHECK(d == doctest::Approx(0.1170).epsilon(1e-3));
  }
}

TEST_CASE("check_theorem: torus Rademacher CLT") {
  const auto report = check_theorem(arrays::torus_rademacher(1.0, -0.5), gauss_law(GroupId::torus(), 1.0), torus_config(3));
  CHECK(report.tag == "rademacher-clt");
  CHECK(report.hypotheses_pass);
  CHECK(report.ft_pass);
  CHECK(report.verdict == OverallVerdict::pass);
  CHECK(report.ft_table.size() == 5 * 3);
  for (const auto& c : report.conditions) {
    CAPTURE(c.name);
    CAPTURE(c.param);
    CHECK(c.pass);
  }
  const auto* sym = find(report.conditions, "symmetric_stat");
  REQUIRE(sym);
  CHECK(sym->values.size() == 5);
  CHECK(sym->values[2].second == doctest::Approx(1e4 * (1.0 - std::cos(0.01))).epsilon(1e-12));
}

TEST_CASE("check_theorem: hypotheses fail at large |l| while the FT converges") {
  const auto report = check_theorem(arrays::torus_rademacher(1.0, -0.5), gauss_law(GroupId::torus(), 1.0), torus_config(8));
  CHECK_FALSE(report.hypotheses_pass);
  CHECK(report.ft_pass);
  CHECK(report.verdict == OverallVerdict::hypotheses_fail_ft_converges);
  CHECK(to_string(report.verdict) == "hypotheses-fail-ft-converges");
}

TEST_CASE("check_theorem: Delta_2 Bernoulli Poisson limit") {
  const auto g = GroupId::padic(2);
  const auto x = GroupElement::padic_digits(g, {1});
  const auto law = compound_poisson_law(validate_levy(g, {{x, 2.0}}));
  VerifyConfig cfg = default_verify_config(g);
  const auto report = check_theorem(arrays::padic_bernoulli(2.0, -1.0), law, cfg);
  CHECK(report.tag == "padic-poisson");
  CHECK(report.verdict == OverallVerdict::pass);
  bool saw_cylinder = false;
  for (const auto& c : report.conditions) {
    CAPTURE(c.name);
    CAPTURE(c.param);
    CHECK(c.pass);
    if (c.name != "cylinder_mass") continue;
    saw_cylinder = true;
    for (const auto& [n, v] : c.values) CHECK(v == doctest::Approx(c.target).epsilon(1e-12));
  }
  CHECK(saw_cylinder);
  // the cylinder sequence is n p_n 1{x in cylinder}
  CHECK(sum_cylinder(arrays::padic_bernoulli(2.0, -1.0), 1000, x, 2) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("check_theorem: mismatched Poisson rate fails") {
  const auto x = GroupElement::torus_radians(-kPi);
  const auto law = compound_poisson_law(validate_levy(GroupId::torus(), {{x, 2.0}}));
  const auto report = check_theorem(torus_bernoulli(1.0), law, torus_config(3));
  CHECK(report.verdict == OverallVerdict::fail);
  CHECK_FALSE(report.ft_pass);
  CHECK_FALSE(report.hypotheses_pass);
  const auto* rate = find(report.conditions, "bernoulli_rate");
  REQUIRE(rate);
  CHECK(rate->target == 2.0);
  CHECK_FALSE(rate->pass);
}

TEST_CASE("check_theorem: Haar limits") {
  VerifyConfig cfg = torus_config(5, 8);
  const auto report = check_theorem(arrays::torus_rademacher(1.0, -0.25), haar_law(GroupId::torus(), CompactSubgroup::full()), cfg);
  CHECK(report.tag == "symmetric-iid-haar");
  CHECK(report.verdict == OverallVerdict::pass);
  const auto g = GroupId::padic(2);
  VerifyConfig pcfg = default_verify_config(g);
  pcfg.grid = decade_grid(2, 8);
  const auto padic = check_theorem(arrays::padic_bernoulli(1.0, -0.5), haar_law(g, CompactSubgroup::full()), pcfg);
  CHECK(padic.tag == "bernoulli-haar");
  CHECK(padic.verdict == OverallVerdict::pass);
}

TEST_CASE("check_theorem: invalid configurations") {
  const auto spec = arrays::torus_rademacher(1.0, -0.5);
  const auto law = gauss_law(GroupId::torus(), 1.0);
  auto cfg = torus_config(3);
  cfg.grid = {100, 1000};
  CHECK_THROWS_AS(check_theorem(spec, law, cfg), ConfigError);
  cfg = torus_config(3);
  cfg.grid = {100, 10000, 1000, 100000};
  CHECK_THROWS_AS(check_theorem(spec, law, cfg), ConfigError);
  cfg = torus_config(3);
  cfg.chars.clear();
  CHECK_THROWS_AS(check_theorem(spec, law, cfg), ConfigError);
  cfg = torus_config(3);
  CHECK_THROWS_AS(check_theorem(spec, gauss_law(GroupId::solenoid(2), 1.0), cfg), GroupMismatch);
  // the only quadratic form on Delta_p is zero, so such a law cannot even be built
  const auto g = GroupId::padic(2);
  CHECK_THROWS_AS(gauss_law(g, 0.5), DomainError);
  auto pcfg = default_verify_config(g);
  pcfg.chars.push_back(Character::padic(g.depth + 1, 1));
  CHECK_THROWS_AS(check_theorem(arrays::padic_bernoulli(2.0, -1.0), dirac_law(identity(g)), pcfg), ConfigError);
}

TEST_CASE("check_theorem is deterministic") {
  const auto spec = arrays::solenoid_rademacher();
  const auto law = gauss_law(GroupId::solenoid(2), 1.0);
  const auto cfg = default_verify_config(GroupId::solenoid(2));
  const auto a = check_theorem(spec, law, cfg);
  const auto b = check_theorem(spec, law, cfg);
  REQUIRE(a.ft_table.size() == b.ft_table.size());
  for (std::size_t i = 0; i < a.ft_table.size(); ++i) {
    REQUIRE(a.ft_table[i].exact == b.ft_table[i].exact);
    REQUIRE(a.ft_table[i].limit == b.ft_table[i].limit);
    REQUIRE(a.ft_table[i].abs_err == b.ft_table[i].abs_err);
  }
  REQUIRE(a.conditions.size() == b.conditions.size());
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    REQUIRE(a.conditions[i].values == b.conditions[i].values);
    REQUIRE(a.conditions[i].pass == b.conditions[i].pass);
  }
  CHECK(a.verdict == b.verdict);
  CHECK(a.ft_distance.values == b.ft_distance.values);
}

TEST_CASE("crosscheck_gensym2") {
  auto cfg = torus_config(3, 8);
  const auto clt = crosscheck_gensym2(arrays::torus_rademacher(1.0, -0.5), {1.0}, cfg);
  CHECK(clt.ft_converges);
  CHECK(clt.symmetric_converges);
  CHECK(clt.variance_tail);
  CHECK(clt.agree);

  const auto haar = crosscheck_gensym2(arrays::torus_rademacher(1.0, -0.25), {1.0}, cfg);
  CHECK_FALSE(haar.ft_converges);
  CHECK_FALSE(haar.symmetric_converges);
  CHECK_FALSE(haar.variance_tail);
  CHECK(haar.agree);

  const TriangularArraySpec degenerate{GroupId::torus(), RademacherRows{ElementRule::fixed(identity(GroupId::torus()))},
                                       Schedule::power(1.0, 1.0)};
  const auto delta = crosscheck_gensym2(degenerate, {0.0}, cfg);
  CHECK(delta.ft_converges);
  CHECK(delta.symmetric_converges);
  CHECK(delta.variance_tail);
  CHECK(delta.agree);

  CHECK_THROWS_AS(crosscheck_gensym2(arrays::padic_bernoulli(2.0, -1.0), {0.0}, default_verify_config(GroupId::padic(2))),
                  DomainError);
}

TEST_CASE("default sets") {
  CHECK(default_characters(GroupId::torus()).size() == 16);
  // Delta_2 with d <= 3: all l in [1, 2^(d+1))
  CHECK(default_characters(GroupId::padic(2)).size() == 1 + 3 + 7 + 15);
  CHECK(default_neighborhoods(GroupId::torus()).size() == 3);
  CHECK(default_verify_config(GroupId::torus()).grid == std::vector<std::int64_t>{100, 1000, 10000, 100000, 1000000});
  CHECK(decade_grid(0, 2) == std::vector<std::int64_t>{1, 10, 100});
  CHECK_THROWS_AS(decade_grid(3, 2), DomainError);
}
