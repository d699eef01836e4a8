#include "lcalim/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lcalim/error.hpp"

namespace lcalim {

namespace {

constexpr double kSamePointTurns = 1e-12;

void validate_prime_group(std::uint32_t p) {
  if (!is_prime(p)) throw DomainError("prime expected, got " + std::to_string(p));
}

// 0..3 when t is a whole number of quarter turns, else -1.
int quarter_index(double t) {
  const double q = 4.0 * t;
  if (q != std::floor(q)) return -1;
  // t in [-1/2, 1/2) -> q in {-2, -1, 0, 1}
  return static_cast<int>(q) & 3;
}

}  // namespace

GroupId GroupId::torus() { return {GroupKind::torus, 0, 0}; }

GroupId GroupId::padic(std::uint32_t p, std::uint32_t depth) {
  validate_prime_group(p);
  return {GroupKind::padic, p, depth};
}

GroupId GroupId::solenoid(std::uint32_t p, std::uint32_t depth) {
  validate_prime_group(p);
  (void)checked_pow(p, depth);  // the winding lives in [0, p^D)
  return {GroupKind::solenoid, p, depth};
}

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::torus:
      return "torus";
    case GroupKind::padic:
      return "padic";
    case GroupKind::solenoid:
      return "solenoid";
  }
  return "?";
}

std::string to_string(const GroupId& g) {
  if (g.kind == GroupKind::torus) return "torus";
  return to_string(g.kind) + "(p=" + std::to_string(g.prime) + ",D=" + std::to_string(g.depth) +
         ")";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

double wrap_turns(double t) {
  double r = t - std::floor(t + 0.5);
  // floor rounding can land exactly on +1/2
  if (r >= 0.5) r -= 1.0;
  if (r < -0.5) r += 1.0;
  return r;
}

double wrap_radians(double theta) { return kTwoPi * wrap_turns(theta / kTwoPi); }

Complex unit_from_turns(double t) {
  t = wrap_turns(t);
  switch (quarter_index(t)) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    case 3:
      return {0.0, -1.0};
    default:
      return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
  }
}

Complex unit_minus_one(double t) {
  t = wrap_turns(t);
  switch (quarter_index(t)) {
    case 0:
      return {0.0, 0.0};
    case 1:
      return {-1.0, 1.0};
    case 2:
      return {-2.0, 0.0};
    case 3:
      return {-1.0, -1.0};
    default: {
      const double s = std::sin(kPi * t);
      return {-2.0 * s * s, std::sin(kTwoPi * t)};
    }
  }
}

// ---------------------------------------------------------------------------
// Elements

GroupElement GroupElement::torus_radians(double theta) { return torus_turns(theta / kTwoPi); }

GroupElement GroupElement::torus_turns(double t) {
  GroupElement x;
  x.group_ = GroupId::torus();
  x.turns_ = wrap_turns(t);
  return x;
}

GroupElement GroupElement::padic_digits(const GroupId& g, std::vector<std::uint32_t> digits) {
  if (g.kind != GroupKind::padic) throw GroupMismatch("padic_digits on " + to_string(g));
  if (digits.size() > g.depth + 1)
    throw DepthOverflow("padic element has " + std::to_string(digits.size()) +
                        " digits, working depth allows " + std::to_string(g.depth + 1));
  for (auto dgt : digits)
    if (dgt >= g.prime)
      throw DomainError("padic digit " + std::to_string(dgt) + " out of range for p=" +
                        std::to_string(g.prime));
  digits.resize(g.depth + 1, 0);
  GroupElement x;
  x.group_ = g;
  x.digits_ = std::move(digits);
  return x;
}

GroupElement GroupElement::padic_integer(const GroupId& g, std::int64_t value) {
  if (g.kind != GroupKind::padic) throw GroupMismatch("padic_integer on " + to_string(g));
  const bool negative = value < 0;
  // |INT64_MIN| does not fit; go through unsigned
  std::uint64_t mag = negative ? (~static_cast<std::uint64_t>(value) + 1) : value;
  std::vector<std::uint32_t> digits(g.depth + 1, 0);
  for (auto& dgt : digits) {
    dgt = static_cast<std::uint32_t>(mag % g.prime);
    mag /= g.prime;
  }
  auto x = padic_digits(g, std::move(digits));
  return negative ? neg(x) : x;
}

namespace {

// Splits a real r into (k mod m, u) with r = k + u and u in [-1/2, 1/2).
std::pair<std::uint64_t, double> split_real(long double r, std::uint64_t m) {
  long double k = std::nearbyint(r);
  double u = static_cast<double>(r - k);
  if (u >= 0.5) {
    u -= 1.0;
    k += 1;
  } else if (u < -0.5) {
    u += 1.0;
    k -= 1;
  }
  long double km = std::fmod(k, static_cast<long double>(m));
  if (km < 0) km += static_cast<long double>(m);
  return {static_cast<std::uint64_t>(km) % m, u};
}

}  // namespace

GroupElement GroupElement::solenoid_parts(const GroupId& g, std::uint64_t winding,
                                          double base_fraction) {
  if (g.kind != GroupKind::solenoid) throw GroupMismatch("solenoid element on " + to_string(g));
  const std::uint64_t m = checked_pow(g.prime, g.depth);
  if (!(base_fraction >= -0.5 && base_fraction < 0.5))
    throw DomainError("solenoid base fraction outside [-1/2, 1/2)");
  GroupElement x;
  x.group_ = g;
  x.winding_ = winding % m;
  x.base_ = base_fraction;
  x.turns_ = x.coordinate_turns(g.depth);
  return x;
}

GroupElement GroupElement::solenoid_turns(const GroupId& g, double deep_turns) {
  if (g.kind != GroupKind::solenoid) throw GroupMismatch("solenoid_turns on " + to_string(g));
  if (!std::isfinite(deep_turns)) throw DomainError("non-finite solenoid angle");
  const std::uint64_t m = checked_pow(g.prime, g.depth);
  // R = p^D * (deep_turns mod 1)
  const long double w =
      static_cast<long double>(deep_turns) - std::floor(static_cast<long double>(deep_turns));
  const auto [k, u] = split_real(w * static_cast<long double>(m), m);
  return solenoid_parts(g, k, u);
}

GroupElement GroupElement::solenoid_radians(const GroupId& g, double deep_theta) {
  return solenoid_turns(g, deep_theta / kTwoPi);
}

GroupElement GroupElement::solenoid_from_base(const GroupId& g, double base_theta) {
  if (g.kind != GroupKind::solenoid) throw GroupMismatch("solenoid_from_base on " + to_string(g));
  if (!std::isfinite(base_theta)) throw DomainError("non-finite solenoid base angle");
  const std::uint64_t m = checked_pow(g.prime, g.depth);
  const auto [k, u] = split_real(static_cast<long double>(base_theta / kTwoPi), m);
  return solenoid_parts(g, k, u);
}

double GroupElement::coordinate_turns(std::uint32_t j) const {
  switch (group_.kind) {
    case GroupKind::torus:
      if (j != 0) throw DomainError("torus element has a single coordinate");
      return turns_;
    case GroupKind::solenoid: {
      if (j > group_.depth)
        throw DepthOverflow("solenoid coordinate " + std::to_string(j) + " beyond depth " +
                            std::to_string(group_.depth));
      const std::uint64_t pj = checked_pow(group_.prime, j);
      const auto low = static_cast<double>(winding_ % pj);
      return wrap_turns((low + base_) / static_cast<double>(pj));
    }
    case GroupKind::padic:
      break;
  }
  throw GroupMismatch("coordinate_turns on a padic element");
}

std::string to_string(const GroupElement& x) {
  char buf[64];
  switch (x.kind()) {
    case GroupKind::torus:
      std::snprintf(buf, sizeof buf, "torus(%.17g rad)", x.radians());
      return buf;
    case GroupKind::solenoid:
      std::snprintf(buf, sizeof buf, "solenoid(y_%u at %.17g rad)", x.group().depth,
                    x.radians());
      return buf;
    case GroupKind::padic: {
      std::string s = "padic(";
      for (std::size_t j = 0; j < x.digits().size(); ++j) {
        if (j) s += ',';
        s += std::to_string(x.digits()[j]);
      }
      return s + ")";
    }
  }
  return "?";
}

bool same_point(const GroupElement& x, const GroupElement& y) {
  if (x.group() != y.group()) return false;
  if (x.kind() == GroupKind::padic) return std::ranges::equal(x.digits(), y.digits());
  if (x.kind() == GroupKind::solenoid) {
    // R(x - y) within tolerance of 0 modulo p^D
    const auto d = sub(x, y);
    return d.winding() == 0 && std::abs(d.base_fraction()) <= kSamePointTurns;
  }
  return std::abs(wrap_turns(x.turns() - y.turns())) <= kSamePointTurns;
}

void require_same_group(const GroupElement& x, const GroupElement& y) {
  if (x.group() != y.group())
    throw GroupMismatch("group mismatch: " + to_string(x.group()) + " vs " + to_string(y.group()));
}

void require_kind(const GroupElement& x, const Character& chi) {
  if (x.kind() != chi.kind)
    throw GroupMismatch("character of " + to_string(chi.kind) + " applied to " +
                        to_string(x.group()));
}

GroupElement identity(const GroupId& g) {
  switch (g.kind) {
    case GroupKind::torus:
      return GroupElement::torus_turns(0.0);
    case GroupKind::padic:
      return GroupElement::padic_digits(g, {});
    case GroupKind::solenoid:
      return GroupElement::solenoid_parts(g, 0, 0.0);
  }
  throw DomainError("unknown group kind");
}

GroupElement add(const GroupElement& x, const GroupElement& y) {
  require_same_group(x, y);
  const auto& g = x.group();
  switch (g.kind) {
    case GroupKind::torus:
      return GroupElement::torus_turns(x.turns() + y.turns());
    case GroupKind::solenoid: {
      const std::uint64_t m = checked_pow(g.prime, g.depth);
      double u = x.base_fraction() + y.base_fraction();
      std::uint64_t k = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(x.winding()) + y.winding()) % m);
      if (u >= 0.5) {
        u -= 1.0;
        k = (k + 1) % m;
      } else if (u < -0.5) {
        u += 1.0;
        k = (k + m - 1) % m;
      }
      return GroupElement::solenoid_parts(g, k, u);
    }
    case GroupKind::padic: {
      std::vector<std::uint32_t> z(g.depth + 1);
      std::uint32_t carry = 0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const std::uint64_t s = std::uint64_t{x.digits()[j]} + y.digits()[j] + carry;
        z[j] = static_cast<std::uint32_t>(s % g.prime);
        carry = static_cast<std::uint32_t>(s / g.prime);
      }
      return GroupElement::padic_digits(g, std::move(z));
    }
  }
  throw DomainError("unknown group kind");
}

GroupElement neg(const GroupElement& x) {
  const auto& g = x.group();
  switch (g.kind) {
    case GroupKind::torus:
      return GroupElement::torus_turns(-x.turns());
    case GroupKind::solenoid: {
      const std::uint64_t m = checked_pow(g.prime, g.depth);
      double u = -x.base_fraction();
      std::uint64_t k = (m - x.winding()) % m;
      if (u >= 0.5) {  // -(-1/2) folds back to -1/2 with one more winding
        u -= 1.0;
        k = (k + 1) % m;
      }
      return GroupElement::solenoid_parts(g, k, u);
    }
    case GroupKind::padic: {
      // p^(D+1) - v: complement every digit to p-1, then add one.
      std::vector<std::uint32_t> z(g.depth + 1);
      std::uint32_t carry = 1;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const std::uint32_t s = (g.prime - 1 - x.digits()[j]) + carry;
        z[j] = s % g.prime;
        carry = s / g.prime;
      }
      return GroupElement::padic_digits(g, std::move(z));
    }
  }
  throw DomainError("unknown group kind");
}

GroupElement sub(const GroupElement& x, const GroupElement& y) { return add(x, neg(y)); }

GroupElement scale(const GroupElement& x, std::int64_t m) {
  const auto& g = x.group();
  if (g.kind == GroupKind::torus) {
    const long double prod = static_cast<long double>(m) * x.turns();
    return GroupElement::torus_turns(static_cast<double>(prod - std::nearbyint(prod)));
  }
  if (g.kind == GroupKind::solenoid) {
    if (m == std::numeric_limits<std::int64_t>::min())
      return neg(add(scale(x, std::numeric_limits<std::int64_t>::max()), x));
    if (m < 0) return neg(scale(x, -m));
    // m * (k + u) mod p^D, integer and fractional parts kept apart
    const std::uint64_t mod = checked_pow(g.prime, g.depth);
    const long double prod = static_cast<long double>(m) * x.base_fraction();
    const auto [whole, u] = split_real(prod, mod);
    const auto k = (static_cast<unsigned __int128>(x.winding()) * static_cast<std::uint64_t>(m) + whole) % mod;
    return GroupElement::solenoid_parts(g, static_cast<std::uint64_t>(k), u);
  }
  const bool negative = m < 0;
  std::uint64_t k = negative ? (~static_cast<std::uint64_t>(m) + 1) : m;
  GroupElement acc = identity(g);
  GroupElement base = x;
  while (k) {
    if (k & 1) acc = add(acc, base);
    k >>= 1;
    if (k) base = add(base, base);
  }
  return negative ? neg(acc) : acc;
}

bool is_identity(const GroupElement& x) {
  if (x.kind() == GroupKind::padic)
    return std::ranges::all_of(x.digits(), [](std::uint32_t d) { return d == 0; });
  if (x.kind() == GroupKind::solenoid) return x.winding() == 0 && x.base_fraction() == 0.0;
  return x.turns() == 0.0;
}

double arg_of(const GroupElement& x) {
  if (x.kind() != GroupKind::torus) throw GroupMismatch("arg_of expects a torus element");
  return x.radians();
}

double h_trunc(double t) {
  if (t < -kPi || t >= kPi) return 0.0;
  if (t < -kPi / 2) return -t - kPi;
  if (t < kPi / 2) return t;
  return -t + kPi;
}

std::uint32_t padic_valuation(const GroupElement& x) {
  if (x.kind() != GroupKind::padic) throw GroupMismatch("padic_valuation on a non-padic element");
  const auto digits = x.digits();
  const auto it = std::ranges::find_if(digits, [](std::uint32_t d) { return d != 0; });
  return static_cast<std::uint32_t>(it - digits.begin());
}

// ---------------------------------------------------------------------------
// Characters

std::string char_id(const Character& chi) {
  if (chi.kind == GroupKind::torus) return "l:" + std::to_string(chi.l);
  return "d:" + std::to_string(chi.d) + ",l:" + std::to_string(chi.l);
}

std::uint64_t checked_pow(std::uint64_t p, std::uint32_t e) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    if (r > kLimit / p)
      throw DepthOverflow(std::to_string(p) + "^" + std::to_string(e) + " exceeds 63 bits");
    r *= p;
  }
  return r;
}

namespace {

void check_depth(const Character& chi, const GroupId& g) {
  if (chi.d > g.depth)
    throw DepthOverflow("character depth " + std::to_string(chi.d) + " exceeds working depth " +
                        std::to_string(g.depth));
}

std::uint64_t padic_low_residue(const GroupElement& x, std::uint32_t d) {
  std::uint64_t v = 0;
  std::uint64_t pw = 1;
  for (std::uint32_t j = 0; j <= d; ++j) {
    v += x.digits()[j] * pw;
    if (j < d) pw *= x.group().prime;
  }
  return v;
}

// fractional part of l * t, t in turns
double mul_turns(std::int64_t l, double t) {
  const long double prod = static_cast<long double>(l) * t;
  // nearest-integer reduction keeps small negative products exact
  return wrap_turns(static_cast<double>(prod - std::nearbyint(prod)));
}

}  // namespace

double char_turns(const Character& chi, const GroupElement& x) {
  require_kind(x, chi);
  const auto& g = x.group();
  switch (g.kind) {
    case GroupKind::torus:
      return mul_turns(chi.l, x.turns());
    case GroupKind::solenoid:
      check_depth(chi, g);
      return mul_turns(chi.l, x.coordinate_turns(chi.d));
    case GroupKind::padic: {
      check_depth(chi, g);
      const std::uint64_t m = checked_pow(g.prime, chi.d + 1);
      if (chi.l < 0 || static_cast<std::uint64_t>(chi.l) >= m)
        throw DomainError("padic character index " + std::to_string(chi.l) + " outside [0, " +
                          std::to_string(m) + ")");
      const auto v = padic_low_residue(x, chi.d);
      const auto r = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(chi.l) * v) % m);
      // r/m in [0,1); fold the upper half to negative turns exactly
      return 2 * r >= m ? -static_cast<double>(m - r) / static_cast<double>(m)
                        : static_cast<double>(r) / static_cast<double>(m);
    }
  }
  throw DomainError("unknown group kind");
}

Complex char_eval(const Character& chi, const GroupElement& x) {
  return unit_from_turns(char_turns(chi, x));
}

Complex char_eval_minus_one(const Character& chi, const GroupElement& x) {
  return unit_minus_one(char_turns(chi, x));
}

namespace {

std::uint64_t padic_modulus(const Character& chi, std::uint32_t p) {
  if (!is_prime(p)) throw DomainError("padic character arithmetic needs the prime");
  return checked_pow(p, chi.d + 1);
}

std::int64_t mod_nonneg(std::int64_t a, std::uint64_t m) {
  const auto r = static_cast<std::int64_t>(static_cast<__int128>(a) % static_cast<__int128>(m));
  return r < 0 ? r + static_cast<std::int64_t>(m) : r;
}

Character refine(const Character& chi, std::uint32_t depth, std::uint32_t p) {
  Character out = chi;
  for (std::uint32_t d = chi.d; d < depth; ++d) {
    if (chi.kind == GroupKind::torus) break;
    const auto next = static_cast<__int128>(out.l) * p;
    if (next > std::numeric_limits<std::int64_t>::max() ||
        next < std::numeric_limits<std::int64_t>::min())
      throw DepthOverflow("character refinement overflows 64 bits");
    out.l = static_cast<std::int64_t>(next);
    out.d = d + 1;
  }
  return out;
}

}  // namespace

Character canonical(const Character& chi, std::uint32_t p) {
  if (chi.kind == GroupKind::torus) return chi;
  Character out = chi;
  if (chi.kind == GroupKind::padic) out.l = mod_nonneg(chi.l, padic_modulus(chi, p));
  if (!is_prime(p)) throw DomainError("character canonical form needs the prime");
  while (out.d > 0 && out.l % static_cast<std::int64_t>(p) == 0) {
    out.l /= static_cast<std::int64_t>(p);
    --out.d;
  }
  if (out.l == 0) out.d = 0;
  return out;
}

Character char_mul(const Character& a, const Character& b, std::uint32_t p) {
  if (a.kind != b.kind) throw GroupMismatch("characters of different groups");
  if (a.kind == GroupKind::torus) return Character::torus(a.l + b.l);
  const std::uint32_t depth = std::max(a.d, b.d);
  const auto ra = refine(a, depth, p);
  const auto rb = refine(b, depth, p);
  Character out{a.kind, depth, ra.l + rb.l};
  if (a.kind == GroupKind::padic) out.l = mod_nonneg(out.l, padic_modulus(out, p));
  return canonical(out, p);
}

Character char_inv(const Character& chi, std::uint32_t p) {
  Character out = chi;
  out.l = -chi.l;
  if (chi.kind == GroupKind::padic) out.l = mod_nonneg(out.l, padic_modulus(out, p));
  return chi.kind == GroupKind::torus ? out : canonical(out, p);
}

double local_inner(const GroupElement& x, const Character& chi) {
  require_kind(x, chi);
  switch (x.kind()) {
    case GroupKind::torus:
      return static_cast<double>(chi.l) * h_trunc(x.radians());
    case GroupKind::padic:
      return 0.0;
    case GroupKind::solenoid: {
      const double h0 = h_trunc(kTwoPi * x.coordinate_turns(0));
      double denom = 1.0;
      for (std::uint32_t j = 0; j < chi.d; ++j) denom *= x.group().prime;
      return static_cast<double>(chi.l) * h0 / denom;
    }
  }
  throw DomainError("unknown group kind");
}

// ---------------------------------------------------------------------------
// Neighborhoods, metric, subgroups

Neighborhood Neighborhood::torus(double eps) {
  if (!(eps > 0.0 && eps <= kPi)) throw DomainError("neighborhood radius must lie in (0, pi]");
  return {GroupKind::torus, eps, 0};
}

Neighborhood Neighborhood::padic(std::uint32_t r) { return {GroupKind::padic, 0.0, r}; }

Neighborhood Neighborhood::solenoid(std::uint32_t d, double eps) {
  if (!(eps > 0.0 && eps <= kPi)) throw DomainError("neighborhood radius must lie in (0, pi]");
  return {GroupKind::solenoid, eps, d};
}

std::string nbhd_id(const Neighborhood& u) {
  char buf[64];
  switch (u.kind) {
    case GroupKind::torus:
      std::snprintf(buf, sizeof buf, "eps:%.6g", u.eps);
      break;
    case GroupKind::padic:
      std::snprintf(buf, sizeof buf, "r:%u", u.rank);
      break;
    case GroupKind::solenoid:
      std::snprintf(buf, sizeof buf, "d:%u,eps:%.6g", u.rank, u.eps);
      break;
  }
  return buf;
}

bool in_nbhd(const GroupElement& x, const Neighborhood& u) {
  if (x.kind() != u.kind) throw GroupMismatch("neighborhood of another group");
  const auto& g = x.group();
  switch (u.kind) {
    case GroupKind::torus:
      return std::abs(x.radians()) < u.eps;
    case GroupKind::padic: {
      if (u.rank > g.depth)
        throw DepthOverflow("Lambda_" + std::to_string(u.rank) + " beyond working depth");
      for (std::uint32_t j = 0; j < u.rank; ++j)
        if (x.digits()[j] != 0) return false;
      return true;
    }
    case GroupKind::solenoid: {
      if (u.rank > g.depth) throw DepthOverflow("solenoid neighborhood beyond working depth");
      for (std::uint32_t j = 0; j <= u.rank; ++j)
        if (std::abs(kTwoPi * x.coordinate_turns(j)) >= u.eps) return false;
      return true;
    }
  }
  return false;
}

bool on_boundary(const GroupElement& x, const Neighborhood& u) {
  constexpr double kTol = 1e-12;
  if (x.kind() != u.kind) throw GroupMismatch("neighborhood of another group");
  switch (u.kind) {
    case GroupKind::torus:
      return std::abs(std::abs(x.radians()) - u.eps) <= kTol;
    case GroupKind::padic:
      return false;
    case GroupKind::solenoid: {
      if (u.rank > x.group().depth)
        throw DepthOverflow("solenoid neighborhood beyond working depth");
      for (std::uint32_t j = 0; j <= u.rank; ++j)
        if (std::abs(std::abs(kTwoPi * x.coordinate_turns(j)) - u.eps) <= kTol) return true;
      return false;
    }
  }
  return false;
}

double padic_metric(const GroupElement& x, const GroupElement& y) {
  if (x.kind() != GroupKind::padic || y.kind() != GroupKind::padic)
    throw GroupMismatch("padic_metric needs padic elements");
  require_same_group(x, y);
  const auto xd = x.digits();
  const auto yd = y.digits();
  for (std::size_t m = 0; m < xd.size(); ++m)
    if (xd[m] != yd[m]) return std::ldexp(1.0, -static_cast<int>(m));
  return 0.0;
}

CompactSubgroup CompactSubgroup::cyclic(std::uint64_t r) {
  if (r < 1) throw DomainError("cyclic subgroup order must be >= 1");
  return {Kind::cyclic, r};
}

std::string to_string(const CompactSubgroup& h) {
  switch (h.kind) {
    case CompactSubgroup::Kind::trivial:
      return "trivial";
    case CompactSubgroup::Kind::full:
      return "full";
    case CompactSubgroup::Kind::cyclic:
      return "H_" + std::to_string(h.r);
    case CompactSubgroup::Kind::lambda:
      return "Lambda_" + std::to_string(h.r);
  }
  return "?";
}

bool is_trivial_subgroup(const CompactSubgroup& h) {
  return h.kind == CompactSubgroup::Kind::trivial ||
         (h.kind == CompactSubgroup::Kind::cyclic && h.r == 1);
}

void check_subgroup(const CompactSubgroup& h, const GroupId& g) {
  using K = CompactSubgroup::Kind;
  const bool ok = h.kind == K::trivial || h.kind == K::full ||
                  (h.kind == K::cyclic && g.kind == GroupKind::torus && h.r >= 1) ||
                  (h.kind == K::lambda && g.kind == GroupKind::padic);
  if (!ok) throw GroupMismatch("subgroup " + to_string(h) + " is not supported on " + to_string(g));
  if (h.kind == K::lambda && h.r > g.depth + 1)
    throw DepthOverflow("Lambda_" + std::to_string(h.r) + " beyond working depth");
}

bool annihilator_contains(const CompactSubgroup& h, const Character& chi, std::uint32_t p) {
  using K = CompactSubgroup::Kind;
  switch (h.kind) {
    case K::trivial:
      return true;
    case K::full:
      return chi.l == 0;
    case K::cyclic:
      if (chi.kind != GroupKind::torus) throw GroupMismatch("H_r lives on the torus");
      return chi.l % static_cast<std::int64_t>(h.r) == 0;
    case K::lambda: {
      if (chi.kind != GroupKind::padic) throw GroupMismatch("Lambda_r lives on Delta_p");
      if (chi.d + 1 <= h.r) return true;
      const auto m = padic_modulus(chi, p);
      const auto l = mod_nonneg(chi.l, m);
      const auto q = checked_pow(p, static_cast<std::uint32_t>(chi.d + 1 - h.r));
      return static_cast<std::uint64_t>(l) % q == 0;
    }
  }
  return false;
}

GroupElement solenoid_lift(const GroupElement& x, std::uint32_t branch) {
  if (x.kind() != GroupKind::solenoid) throw GroupMismatch("solenoid_lift on non-solenoid");
  const auto& g = x.group();
  if (branch >= g.prime)
    throw DomainError("branch " + std::to_string(branch) + " outside [0, p)");
  const GroupId lifted = GroupId::solenoid(g.prime, g.depth + 1);
  // y'_{D+1} has turns (t_D + branch) / p with t_D in [-1/2, 1/2); in terms of
  // R' = R + b p^D, with R in [-1/2, p^D - 1/2), that is
  // b = branch - [R >= p^D / 2] (mod p)
  const std::uint64_t m = checked_pow(g.prime, g.depth);
  const bool upper_half = 2.0L * (static_cast<long double>(x.winding()) + x.base_fraction()) >=
                          static_cast<long double>(m);
  const std::uint32_t shift = upper_half ? 1 : 0;
  const std::uint64_t b = (branch + g.prime - shift) % g.prime;
  return GroupElement::solenoid_parts(lifted, x.winding() + b * m, x.base_fraction());
}

GroupElement solenoid_project(const GroupElement& x) {
  if (x.kind() != GroupKind::solenoid) throw GroupMismatch("solenoid_project on non-solenoid");
  const auto& g = x.group();
  if (g.depth == 0) throw DepthOverflow("cannot project a depth-0 solenoid element");
  const GroupId projected{GroupKind::solenoid, g.prime, g.depth - 1};
  return GroupElement::solenoid_parts(projected, x.winding() % checked_pow(g.prime, g.depth - 1),
                                      x.base_fraction());
}

}  // namespace lcalim
