#pragma once

// Finite discrete measures on the groups, Levy measures, quadratic forms and
// the Fourier transforms of the factors of omega_H * delta_a * gamma_psi *
// pi_{eta,g}.

#include <span>
#include <vector>

#include "lcalim/group.hpp"

namespace lcalim {

struct Atom {
  GroupElement x;
  double weight = 0.0;
};

/// A finite, nonnegative, atom-deduplicated measure. Zero-weight atoms are
/// dropped. Atoms are kept in a canonical order (digits lexicographically,
/// angles ascending) so that equal measures compare equal.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(GroupId g) : group_(g) {}
  /// Throws DomainError on a negative or non-finite weight and GroupMismatch
  /// when an atom lives on another group.
  DiscreteMeasure(GroupId g, std::vector<Atom> atoms);

  static DiscreteMeasure dirac(const GroupElement& x, double weight = 1.0);

  const GroupId& group() const { return group_; }
  std::span<const Atom> atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double total_mass() const;
  /// Weight of the atom at x (0 if none).
  double mass_at(const GroupElement& x) const;

  DiscreteMeasure scaled(double factor) const;

 private:
  void normalize();

  GroupId group_;
  std::vector<Atom> atoms_;
};

/// A DiscreteMeasure with no atom at the identity. Only constructible through
/// validate_levy.
class LevyMeasure {
 public:
  const DiscreteMeasure& measure() const { return measure_; }
  const GroupId& group() const { return measure_.group(); }
  std::span<const Atom> atoms() const { return measure_.atoms(); }

  static LevyMeasure zero(const GroupId& g);

 private:
  friend LevyMeasure validate_levy(const DiscreteMeasure& eta);
  explicit LevyMeasure(DiscreteMeasure m) : measure_(std::move(m)) {}
  DiscreteMeasure measure_;
};

LevyMeasure validate_levy(const DiscreteMeasure& eta);
LevyMeasure validate_levy(const GroupId& g, std::vector<Atom> atoms);

struct QuadraticFormParam {
  double b = 0.0;
};

/// psi_b(chi): b l^2 on the torus, b l^2 / p^(2d) on S_p, 0 on Delta_p (where
/// b > 0 is rejected).
double qform_eval(QuadraticFormParam b, const Character& chi, const GroupId& g);
/// e^{-psi(chi)/2}.
double gauss_ft(QuadraticFormParam b, const Character& chi, const GroupId& g);

/// Plain Fourier transform sum_x w chi(x).
Complex measure_ft(const DiscreteMeasure& mu, const Character& chi);
/// FT of the compound Poisson law e(eta): exp(sum w (chi(x) - 1)).
Complex cpoisson_ft(const DiscreteMeasure& eta, const Character& chi);
/// FT of the generalized Poisson law: exp(sum w (chi(x) - 1 - i g(x,chi))).
Complex genpoisson_ft(const LevyMeasure& eta, const Character& chi);

/// The element m with chi(m) = exp(i * integral g(., chi) dmu) for all chi.
GroupElement local_mean(const DiscreteMeasure& mu);

/// integral g(x,chi) dmu and integral g(x,chi)^2 dmu.
double integral_g(const DiscreteMeasure& mu, const Character& chi);
double integral_g2(const DiscreteMeasure& mu, const Character& chi);

DiscreteMeasure convolve(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Mass of the cylinder x + Lambda_r, i.e. of atoms agreeing with x on the
/// first r digits.
double cylinder_mass(const DiscreteMeasure& eta, const GroupElement& x, std::uint32_t r);
/// Mass outside the neighborhood U.
double tail_mass_measure(const DiscreteMeasure& eta, const Neighborhood& u);

struct LimitLaw {
  CompactSubgroup H;
  GroupElement a;
  QuadraticFormParam b;
  LevyMeasure eta;

  const GroupId& group() const { return a.group(); }
};

/// Validates group consistency, b >= 0, and b == 0 on Delta_p.
LimitLaw make_law(CompactSubgroup h, GroupElement a, QuadraticFormParam b, LevyMeasure eta);

LimitLaw dirac_law(const GroupElement& a);
LimitLaw gauss_law(const GroupId& g, double b);
LimitLaw haar_law(const GroupId& g, CompactSubgroup h);
/// e(eta) written as pi_{eta,g} * delta_{m_g(eta)}.
LimitLaw compound_poisson_law(const LevyMeasure& eta);

/// 1[chi in H^perp] * chi(a) * gauss_ft * genpoisson_ft.
Complex limit_law_ft(const LimitLaw& law, const Character& chi);

std::string describe(const LimitLaw& law);

}  // namespace lcalim
