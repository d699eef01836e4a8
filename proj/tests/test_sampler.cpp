#include <doctest.h>

#include <cmath>
#include <set>

#include "lcalim/acceptance.hpp"
#include "lcalim/error.hpp"
#include "lcalim/sampler.hpp"
#include "lcalim/verify.hpp"

using namespace lcalim;

namespace {

std::int64_t padic_value(const GroupElement& x) {
  std::int64_t v = 0, w = 1;
  for (auto d : x.digits()) {
    v += w * d;
    w *= x.group().prime;
  }
  return v;
}

template <class Draw>
std::pair<double, double> moments(int count, Draw draw) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double v = static_cast<double>(draw());
    s += v;
    s2 += v * v;
  }
  const double mean = s / count;
  return {mean, s2 / count - mean * mean};
}

const std::vector<Character> kTorusChars = {Character::torus(1), Character::torus(2), Character::torus(3)};

}  // namespace

TEST_CASE("derive_seed") {
  const std::vector<std::uint64_t> one = {1}, two = {2}, none = {};
  CHECK(derive_seed(42, one) == derive_seed(42, one));
  CHECK(derive_seed(42, one) != derive_seed(42, two));
  CHECK(derive_seed(42, none) != 42);
  CHECK(derive_seed(42, none) == derive_seed(42, none));
  CHECK(derive_seed(42, none) != derive_seed(43, none));
  // no collisions over a block of short paths
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 100; ++a)
    for (std::uint64_t b = 0; b < 100; ++b) {
      const std::vector<std::uint64_t> path = {a, b};
      seen.insert(derive_seed(7, path));
    }
  CHECK(seen.size() == 10000);
  const std::vector<std::uint64_t> ab = {1, 2}, ba = {2, 1};
  CHECK(derive_seed(7, ab) != derive_seed(7, ba));
}

TEST_CASE("SeededStream") {
  SeededStream a(5, {1, 2}), b(5, {1, 2});
  for (int i = 0; i < 1000; ++i) REQUIRE(a.engine()() == b.engine()());
  SeededStream root(5);
  SeededStream c = root.child(1).child(2);
  SeededStream d(5, {1, 2});
  CHECK(c.path().size() == 2);
  CHECK(c.master() == 5);
  for (int i = 0; i < 100; ++i) REQUIRE(c.uniform() == d.uniform());
  SeededStream e(5, {1, 3});
  SeededStream f(5, {1, 2});
  int same = 0;
  for (int i = 0; i < 100; ++i) same += e.engine()() == f.engine()();
  CHECK(same == 0);
  SeededStream u(9);
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
}

TEST_CASE("Poisson and binomial draws have the right moments") {
  constexpr int N = 200'000;
  // lambda <= 30 uses inversion, larger lambda the rejection sampler
  for (double lambda : {0.5, 3.0, 29.0, 31.0, 250.0, 1e5}) {
    CAPTURE(lambda);
    SeededStream s(11, {static_cast<std::uint64_t>(lambda * 10)});
    const auto [mean, var] = moments(N, [&] { return sample_poisson(lambda, s); });
    CHECK(std::abs(mean - lambda) <= 5.0 * std::sqrt(lambda / N));
    CHECK(std::abs(var / lambda - 1.0) <= 5.0 * std::sqrt(2.0 / N) + 1e-3);
  }
  SeededStream z(1);
  CHECK(sample_poisson(0.0, z) == 0);
  CHECK_THROWS_AS(sample_poisson(-1.0, z), DomainError);

  SeededStream s(12);
  const auto [mean, var] = moments(N, [&] { return sample_binomial(1000, 0.3, s); });
  CHECK(std::abs(mean - 300.0) <= 5.0 * std::sqrt(210.0 / N));
  CHECK(std::abs(var / 210.0 - 1.0) <= 5.0 * std::sqrt(2.0 / N));
  CHECK(sample_binomial(10, 0.0, s) == 0);
  CHECK(sample_binomial(10, 1.0, s) == 10);
  CHECK_THROWS_AS(sample_binomial(10, 1.5, s), DomainError);
}

TEST_CASE("sample_row_sum") {
  SUBCASE("identity rows") {
    for (const auto& g : {GroupId::torus(), GroupId::padic(3), GroupId::solenoid(2)}) {
      const TriangularArraySpec spec{g, GeneralRows{{RowDistribution(DiscreteMeasure::dirac(identity(g)))}},
                                     Schedule::power(1.0, 1.0)};
      SeededStream s(3);
      for (std::int64_t n : {1, 10, 1000}) {
        CHECK(is_identity(sample_row_sum(spec, n, s)));
        CHECK(is_identity(sample_row_sum(spec, n, s, {.budget = 10'000'000, .shortcut = false})));
      }
    }
  }
  SUBCASE("Bernoulli on Delta_2 sums to a count times x") {
    const auto spec = arrays::padic_bernoulli(2.0, -1.0);
    const std::int64_t n = 1000;
    for (bool shortcut : {true, false}) {
      SeededStream s(4, {shortcut});
      double total = 0.0;
      constexpr int draws = 20'000;
      for (int i = 0; i < draws; ++i) {
        const auto c = padic_value(sample_row_sum(spec, n, s, {.budget = 10'000'000, .shortcut = shortcut}));
        REQUIRE(c >= 0);
        REQUIRE(c <= n);
        total += static_cast<double>(c);
      }
      // c ~ Binomial(1000, 2/1000)
      CHECK(std::abs(total / draws - 2.0) <= 5.0 * std::sqrt(2.0 * 0.998 / draws));
    }
  }
  SUBCASE("Rademacher on the torus: arg = (2c - K) x") {
    const double x = 1e-4;
    const std::int64_t K = 1000;
    const TriangularArraySpec spec{GroupId::torus(), RademacherRows{ElementRule::torus_angle(Schedule::constant(x))},
                                   Schedule::constant(static_cast<double>(K))};
    for (bool shortcut : {true, false}) {
      SeededStream s(5, {shortcut});
      double total = 0.0;
      constexpr int draws = 5'000;
      for (int i = 0; i < draws; ++i) {
        const double two_c = sample_row_sum(spec, 1, s, {.budget = 10'000'000, .shortcut = shortcut}).radians() / x + K;
        const double c = two_c / 2.0;
        REQUIRE(std::abs(c - std::round(c)) <= 1e-6);
        REQUIRE(c >= -1e-6);
        REQUIRE(c <= K + 1e-6);
        total += c;
      }
      CHECK(std::abs(total / draws - 500.0) <= 5.0 * std::sqrt(250.0 / draws));
    }
  }
  SUBCASE("the direct sampler respects its budget") {
    const auto spec = arrays::torus_rademacher(1.0, -0.5);
    SeededStream s(6);
    CHECK_THROWS_AS(sample_row_sum(spec, 10'000, s, {.budget = 1000, .shortcut = false}), BudgetExceeded);
    CHECK_NOTHROW(sample_row_sum(spec, 10'000, s, {.budget = 1000, .shortcut = true}));
    CHECK_THROWS_AS(empirical_ft(spec, 10'000, kTorusChars, 10, 1, {.budget = 1000, .shortcut = false}), BudgetExceeded);
  }
}

TEST_CASE("binomial shortcut agrees with direct summation") {
  constexpr std::int64_t M = 20'000;
  const double bound = 6.0 / std::sqrt(static_cast<double>(M));
  const auto pg = GroupId::padic(2);
  const std::vector<std::pair<TriangularArraySpec, std::vector<Character>>> cases = {
      {arrays::torus_rademacher(1.0, -0.5), kTorusChars},
      {arrays::torus_symmetric_mixture({1.0, 2.0}, {0.5, 0.5}, -0.5), kTorusChars},
      {arrays::padic_bernoulli(2.0, -1.0), default_characters(pg)},
  };
  for (const auto& [spec, chars] : cases) {
    for (std::int64_t n : {10, 1000}) {
      const auto fast = empirical_ft(spec, n, chars, M, 21, {.budget = 10'000'000, .shortcut = true});
      const auto slow = empirical_ft(spec, n, chars, M, 22, {.budget = 10'000'000, .shortcut = false});
      for (std::size_t j = 0; j < chars.size(); ++j) {
        CAPTURE(n);
        CAPTURE(chars[j].l);
        CHECK(std::abs(fast.estimate[j] - slow.estimate[j]) <= bound);
      }
    }
  }
}

TEST_CASE("empirical_ft") {
  SUBCASE("trivial character and identity rows give exactly 1") {
    const auto spec = arrays::torus_rademacher(1.0, -0.5);
    const std::vector<Character> trivial = {Character::torus(0)};
    CHECK(empirical_ft(spec, 100, trivial, 500, 1).estimate[0] == Complex{1.0, 0.0});
    const auto g = GroupId::padic(2);
    const TriangularArraySpec delta{g, GeneralRows{{RowDistribution(DiscreteMeasure::dirac(identity(g)))}},
                                    Schedule::power(1.0, 1.0)};
    const auto est = empirical_ft(delta, 100, default_characters(g), 300, 2);
    for (const auto& v : est.estimate) CHECK(v == Complex{1.0, 0.0});
  }
  SUBCASE("bounds and standard error") {
    const auto est = empirical_ft(arrays::torus_rademacher(1.0, -0.5), 100, kTorusChars, 400, 3);
    CHECK(est.replicates == 400);
    CHECK(est.stderr_bound == 1.0 / 20.0);
    CHECK(est.chars == kTorusChars);
    for (const auto& v : est.estimate) CHECK(std::abs(v) <= 1.0 + 1e-15);
    CHECK_THROWS_AS(empirical_ft(arrays::torus_rademacher(1.0, -0.5), 100, kTorusChars, 0, 3), DomainError);
  }
  SUBCASE("agreement with the exact row FT for at least 99% of seeds") {
    constexpr std::int64_t M = 4'000;
    const double bound = 4.0 / std::sqrt(static_cast<double>(M));
    const std::vector<TriangularArraySpec> specs = {
        arrays::torus_rademacher(1.0, -0.5), arrays::torus_rademacher(1.0, -0.25),
        arrays::torus_symmetric_mixture({1.0, 2.0}, {0.25, 0.75}, -0.5), arrays::padic_bernoulli(2.0, -1.0),
        arrays::padic_bernoulli(1.0, -0.5), arrays::solenoid_rademacher()};
    int checks = 0, misses = 0;
    for (const auto& spec : specs) {
      const auto chars = default_characters(spec.group);
      for (std::int64_t n : {100, 10'000}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
          const auto est = empirical_ft(spec, n, chars, M, seed);
          for (std::size_t j = 0; j < chars.size(); ++j, ++checks)
            misses += std::abs(est.estimate[j] - row_ft_exact(spec, n, chars[j])) > bound;
        }
      }
    }
    CAPTURE(misses);
    CHECK(misses <= checks / 100);
  }
  SUBCASE("serial and parallel estimates are bit-identical") {
    const auto spec = arrays::padic_bernoulli(2.0, -1.0);
    const auto chars = default_characters(spec.group);
    const auto par = empirical_ft(spec, 1000, chars, 5000, 9, {}, true);
    const auto ser = empirical_ft(spec, 1000, chars, 5000, 9, {}, false);
    CHECK(par.estimate == ser.estimate);
    CHECK(empirical_ft(spec, 1000, chars, 5000, 9).estimate == par.estimate);
  }
}

TEST_CASE("sample_limit_law") {
  constexpr std::int64_t M = 40'000;
  const double bound = 4.0 / std::sqrt(static_cast<double>(M));
  SUBCASE("Dirac law") {
    const auto a = GroupElement::torus_turns(0.3);
    SeededStream s(1);
    for (int i = 0; i < 100; ++i) CHECK(same_point(sample_limit_law(dirac_law(a), s), a));
    const auto pg = GroupId::padic(3);
    const auto pa = GroupElement::padic_integer(pg, -7);
    for (int i = 0; i < 100; ++i) CHECK(same_point(sample_limit_law(dirac_law(pa), s), pa));
  }
  SUBCASE("wrapped normal") {
    for (double b : {0.25, 1.0, 3.0}) {
      const auto est = empirical_law_ft(gauss_law(GroupId::torus(), b), kTorusChars, M, 5);
      for (std::size_t j = 0; j < kTorusChars.size(); ++j) {
        const double l = static_cast<double>(kTorusChars[j].l);
        CHECK(std::abs(est.estimate[j].real() - std::exp(-b * l * l / 2.0)) <= bound);
        CHECK(std::abs(est.estimate[j].imag()) <= bound);
      }
    }
  }
  SUBCASE("compound Poisson laws") {
    const auto x = GroupElement::torus_turns(0.3);
    const auto eta = validate_levy(GroupId::torus(), {{x, 2.0}});
    const auto est = empirical_law_ft(compound_poisson_law(eta), kTorusChars, M, 6);
    for (std::size_t j = 0; j < kTorusChars.size(); ++j)
      CHECK(std::abs(est.estimate[j] - cpoisson_ft(eta.measure(), kTorusChars[j])) <= bound);

    const auto pg = GroupId::padic(2);
    const auto peta = validate_levy(pg, {{GroupElement::padic_digits(pg, {1}), 2.0}, {GroupElement::padic_integer(pg, 6), 0.5}});
    const auto chars = default_characters(pg);
    const auto pest = empirical_law_ft(compound_poisson_law(peta), chars, M, 7);
    for (std::size_t j = 0; j < chars.size(); ++j)
      CHECK(std::abs(pest.estimate[j] - cpoisson_ft(peta.measure(), chars[j])) <= bound);
  }
  SUBCASE("Haar laws") {
    SeededStream s(8);
    const auto h5 = haar_law(GroupId::torus(), CompactSubgroup::cyclic(5));
    std::set<long> residues;
    for (int i = 0; i < 1000; ++i) {
      const double k = sample_limit_law(h5, s).turns() * 5.0;
      REQUIRE(std::abs(k - std::round(k)) <= 1e-12);
      residues.insert(((std::lround(k) % 5) + 5) % 5);
    }
    CHECK(residues.size() == 5);
    const auto pg = GroupId::padic(2);
    const auto l3 = haar_law(pg, CompactSubgroup::lambda(3));
    for (int i = 0; i < 1000; ++i) {
      const auto y = sample_limit_law(l3, s);
      for (std::size_t j = 0; j < 3; ++j) REQUIRE(y.digits()[j] == 0);
    }
    const auto full = haar_law(GroupId::torus(), CompactSubgroup::full());
    const auto est = empirical_law_ft(full, kTorusChars, M, 9);
    for (const auto& v : est.estimate) CHECK(std::abs(v) <= bound);
  }
  SUBCASE("solenoid laws are not sampled") {
    SeededStream s(10);
    CHECK_THROWS_AS(sample_limit_law(gauss_law(GroupId::solenoid(2), 1.0), s), DomainError);
  }
  SUBCASE("reproducible") {
    const auto law = gauss_law(GroupId::torus(), 1.0);
    CHECK(empirical_law_ft(law, kTorusChars, 1000, 3).estimate == empirical_law_ft(law, kTorusChars, 1000, 3).estimate);
  }
}
