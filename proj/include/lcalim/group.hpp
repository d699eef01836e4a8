#pragma once

// Elements, characters, neighborhoods and local inner products of the three
// concrete groups: the circle T, the p-adic integers Delta_p and the p-adic
// solenoid S_p.
//
// Angles are stored in turns t in [-1/2, 1/2) and exposed in radians. A
// Delta_p element is its residue mod p^(D+1), held as D+1 base-p digits. A
// solenoid element of depth D is a real R modulo p^D, held as an integer
// winding k in [0, p^D) plus a base fraction u in [-1/2, 1/2); coordinate j
// has turns R / p^j mod 1, so every y_j keeps full relative precision.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lcalim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr std::uint32_t kDefaultDepth = 16;

enum class GroupKind { torus, padic, solenoid };

struct GroupId {
  GroupKind kind = GroupKind::torus;
  std::uint32_t prime = 0;  // padic / solenoid only
  std::uint32_t depth = 0;  // working depth D, padic / solenoid only

  static GroupId torus();
  static GroupId padic(std::uint32_t p, std::uint32_t depth = kDefaultDepth);
  static GroupId solenoid(std::uint32_t p, std::uint32_t depth = kDefaultDepth);

  bool operator==(const GroupId&) const = default;
};

std::string to_string(GroupKind kind);
std::string to_string(const GroupId& g);
bool is_prime(std::uint64_t n);

/// Reduces t modulo 1 into [-1/2, 1/2).
double wrap_turns(double t);
/// Reduces an angle modulo 2*pi into [-pi, pi).
double wrap_radians(double theta);

using Complex = std::complex<double>;

/// e^{2 pi i t}, exact at multiples of a quarter turn.
Complex unit_from_turns(double t);
/// e^{2 pi i t} - 1 without cancellation near t = 0.
Complex unit_minus_one(double t);

class GroupElement {
 public:
  GroupElement() = default;

  static GroupElement torus_radians(double theta);
  static GroupElement torus_turns(double t);
  /// Missing high digits are zero. More than D+1 digits is a DepthOverflow.
  static GroupElement padic_digits(const GroupId& g, std::vector<std::uint32_t> digits);
  /// Residue class of an ordinary integer (negative values allowed).
  static GroupElement padic_integer(const GroupId& g, std::int64_t value);
  static GroupElement solenoid_turns(const GroupId& g, double deep_turns);
  static GroupElement solenoid_radians(const GroupId& g, double deep_theta);
  /// Lift of a real base angle: arg y_j = theta0 / p^j (mod 2 pi) for j <= D.
  /// theta0 is not reduced first, so |theta0| > pi selects another branch.
  static GroupElement solenoid_from_base(const GroupId& g, double base_theta);
  /// R = winding + base_fraction, with winding < p^D and base_fraction in
  /// [-1/2, 1/2).
  static GroupElement solenoid_parts(const GroupId& g, std::uint64_t winding,
                                     double base_fraction);

  const GroupId& group() const { return group_; }
  GroupKind kind() const { return group_.kind; }

  /// Torus angle, or the deepest solenoid coordinate, in turns.
  double turns() const { return turns_; }
  double radians() const { return kTwoPi * turns_; }
  std::span<const std::uint32_t> digits() const { return digits_; }
  /// Solenoid representation R = winding() + base_fraction() modulo p^D.
  std::uint64_t winding() const { return winding_; }
  double base_fraction() const { return base_; }

  /// Turns of coordinate y_j (solenoid, j <= D) or of the torus angle (j = 0).
  double coordinate_turns(std::uint32_t j) const;

  bool operator==(const GroupElement&) const = default;

 private:
  GroupId group_{};
  double turns_ = 0.0;
  std::vector<std::uint32_t> digits_;
  std::uint64_t winding_ = 0;
  double base_ = 0.0;
};

std::string to_string(const GroupElement& x);

/// Equality used for atom deduplication: padic digits exactly, angles within
/// 1e-12 turns.
bool same_point(const GroupElement& x, const GroupElement& y);

GroupElement identity(const GroupId& g);
GroupElement add(const GroupElement& x, const GroupElement& y);
GroupElement neg(const GroupElement& x);
GroupElement sub(const GroupElement& x, const GroupElement& y);
/// m-fold sum m*x for any integer m.
GroupElement scale(const GroupElement& x, std::int64_t m);
bool is_identity(const GroupElement& x);

/// arg of a torus element, in [-pi, pi).
double arg_of(const GroupElement& x);

/// The truncation h: identity on [-pi/2, pi/2), reflected towards 0 on the
/// rest of [-pi, pi), zero outside.
double h_trunc(double t);

/// Index of the first nonzero digit; D+1 for the identity.
std::uint32_t padic_valuation(const GroupElement& x);

/// Characters: torus chi_l(y) = y^l; padic chi_{d,l}(x) =
/// exp(2 pi i l (x_0 + p x_1 + ... + p^d x_d) / p^(d+1)), 0 <= l < p^(d+1);
/// solenoid chi_{d,l}(y) = y_d^l.
struct Character {
  GroupKind kind = GroupKind::torus;
  std::uint32_t d = 0;
  std::int64_t l = 0;

  static Character torus(std::int64_t l) { return {GroupKind::torus, 0, l}; }
  static Character padic(std::uint32_t d, std::int64_t l) { return {GroupKind::padic, d, l}; }
  static Character solenoid(std::uint32_t d, std::int64_t l) {
    return {GroupKind::solenoid, d, l};
  }

  bool trivial() const { return l == 0; }
  bool operator==(const Character&) const = default;
};

/// "l:<l>" for torus, "d:<d>,l:<l>" otherwise.
std::string char_id(const Character& chi);

/// p^e, throwing DepthOverflow when it does not fit in 63 bits.
std::uint64_t checked_pow(std::uint64_t p, std::uint32_t e);

/// Phase of chi(x) in turns, reduced into [-1/2, 1/2).
double char_turns(const Character& chi, const GroupElement& x);
Complex char_eval(const Character& chi, const GroupElement& x);
/// chi(x) - 1, computed without cancellation.
Complex char_eval_minus_one(const Character& chi, const GroupElement& x);

/// Product chi1*chi2 in the dual group. p is needed for padic/solenoid
/// characters of different depths, which are first refined to a common depth.
Character char_mul(const Character& a, const Character& b, std::uint32_t p = 0);
Character char_inv(const Character& chi, std::uint32_t p = 0);
/// Solenoid: divides l by p while possible and d > 0. Padic: the same on the
/// residue l mod p^(d+1). Torus: unchanged.
Character canonical(const Character& chi, std::uint32_t p = 0);

/// The explicit local inner product: torus l*h(arg y); padic 0; solenoid
/// l*h(arg y_0)/p^d.
double local_inner(const GroupElement& x, const Character& chi);

/// Basis neighborhoods of the identity: torus {|arg| < eps}; padic Lambda_r;
/// solenoid {|arg y_j| < eps for j <= d}.
struct Neighborhood {
  GroupKind kind = GroupKind::torus;
  double eps = kPi;
  std::uint32_t rank = 0;  // padic r, solenoid d

  static Neighborhood torus(double eps);
  static Neighborhood padic(std::uint32_t r);
  static Neighborhood solenoid(std::uint32_t d, double eps);
};

std::string nbhd_id(const Neighborhood& u);
bool in_nbhd(const GroupElement& x, const Neighborhood& u);
/// True when x lies on the topological boundary of u (within 1e-12 rad).
/// Padic neighborhoods are clopen and have empty boundary.
bool on_boundary(const GroupElement& x, const Neighborhood& u);

/// 2^-m where m is the first differing digit; 0 when equal to depth D.
double padic_metric(const GroupElement& x, const GroupElement& y);

struct CompactSubgroup {
  enum class Kind { trivial, full, cyclic, lambda };
  Kind kind = Kind::trivial;
  std::uint64_t r = 0;  // cyclic order (torus) or Lambda rank (padic)

  static CompactSubgroup trivial() { return {Kind::trivial, 0}; }
  static CompactSubgroup full() { return {Kind::full, 0}; }
  /// H_r = r-th roots of unity on the torus; r = 1 is the trivial subgroup.
  static CompactSubgroup cyclic(std::uint64_t r);
  /// Lambda_r on Delta_p; Lambda_0 is the whole group.
  static CompactSubgroup lambda(std::uint64_t r) { return {Kind::lambda, r}; }

  bool operator==(const CompactSubgroup&) const = default;
};

std::string to_string(const CompactSubgroup& h);
/// True when h is {e}, including H_1.
bool is_trivial_subgroup(const CompactSubgroup& h);
/// Checks that h is a subgroup kind supported on g.
void check_subgroup(const CompactSubgroup& h, const GroupId& g);

/// chi in H^perp, i.e. chi == 1 on all of H.
bool annihilator_contains(const CompactSubgroup& h, const Character& chi, std::uint32_t p = 0);

/// Depth D+1 element on branch k of the p-th root: theta' = (theta + 2 pi k)/p.
GroupElement solenoid_lift(const GroupElement& x, std::uint32_t branch);
/// Depth D-1 element obtained by forgetting y_D.
GroupElement solenoid_project(const GroupElement& x);

void require_same_group(const GroupElement& x, const GroupElement& y);
void require_kind(const GroupElement& x, const Character& chi);

}  // namespace lcalim
