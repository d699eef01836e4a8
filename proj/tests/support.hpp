#pragma once

// Shared generators for the property tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lcalim/group.hpp"
#include "lcalim/measure.hpp"

namespace lcalim::testing {

inline GroupElement random_element(const GroupId& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> turn(-0.5, 0.5);
  switch (g.kind) {
    case GroupKind::torus:
      return GroupElement::torus_turns(turn(rng));
    case GroupKind::padic: {
      std::uniform_int_distribution<std::uint32_t> digit(0, g.prime - 1);
      std::vector<std::uint32_t> digits(g.depth + 1);
      for (auto& d : digits) d = digit(rng);
      return GroupElement::padic_digits(g, std::move(digits));
    }
    case GroupKind::solenoid: {
      const std::uint64_t m = checked_pow(g.prime, g.depth);
      std::uniform_int_distribution<std::uint64_t> winding(0, m - 1);
      return GroupElement::solenoid_parts(g, winding(rng), turn(rng));
    }
  }
  return identity(g);
}

inline Character random_character(const GroupId& g, std::mt19937_64& rng, std::uint32_t max_d = 3,
                                   std::int64_t max_l = 20) {
  std::uniform_int_distribution<std::int64_t> l(-max_l, max_l);
  std::uniform_int_distribution<std::uint32_t> d(0, std::min(max_d, g.depth));
  switch (g.kind) {
    case GroupKind::torus:
      return Character::torus(l(rng));
    case GroupKind::padic: {
      const auto depth = d(rng);
      const auto m = static_cast<std::int64_t>(checked_pow(g.prime, depth + 1));
      return Character::padic(depth, std::uniform_int_distribution<std::int64_t>(0, m - 1)(rng));
    }
    case GroupKind::solenoid:
      return Character::solenoid(d(rng), l(rng));
  }
  return {};
}

inline DiscreteMeasure random_measure(const GroupId& g, std::mt19937_64& rng, bool allow_identity) {
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> weight(0.05, 2.0);
  std::vector<Atom> atoms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    auto x = random_element(g, rng);
    if (!allow_identity && is_identity(x)) continue;
    atoms.push_back({x, weight(rng)});
  }
  return DiscreteMeasure(g, std::move(atoms));
}

inline std::vector<GroupId> all_groups() {
  return {GroupId::torus(), GroupId::padic(2), GroupId::padic(3, 6), GroupId::padic(5),
          GroupId::solenoid(2), GroupId::solenoid(3), GroupId::solenoid(5, 8)};
}

/// Exact residue of an integer modulo p^(D+1), as base-p digits.
inline std::vector<std::uint32_t> residue_digits(__int128 v, std::uint32_t p, std::uint32_t depth) {
  __int128 m = 1;
  for (std::uint32_t j = 0; j <= depth; ++j) m *= p;
  v %= m;
  if (v < 0) v += m;
  std::vector<std::uint32_t> digits(depth + 1);
  for (auto& d : digits) {
    d = static_cast<std::uint32_t>(v % p);
    v /= p;
  }
  return digits;
}

}  // namespace lcalim::testing
