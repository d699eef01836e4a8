#include "lcalim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lcalim/error.hpp"

namespace lcalim {

namespace {

bool atom_less(const Atom& a, const Atom& b) {
  if (a.x.kind() == GroupKind::padic)
    return std::ranges::lexicographical_compare(a.x.digits(), b.x.digits());
  if (a.x.kind() == GroupKind::solenoid)
    return std::pair(a.x.winding(), a.x.base_fraction()) <
           std::pair(b.x.winding(), b.x.base_fraction());
  return a.x.turns() < b.x.turns();
}

double power_of(std::uint32_t p, std::uint32_t e) {
  double r = 1.0;
  for (std::uint32_t i = 0; i < e; ++i) r *= p;
  return r;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(GroupId g, std::vector<Atom> atoms)
    : group_(g), atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (a.x.group() != group_)
      throw GroupMismatch("atom on " + to_string(a.x.group()) + " in a measure on " +
                          to_string(group_));
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw DomainError("negative or non-finite atom weight");
  }
  normalize();
}

DiscreteMeasure DiscreteMeasure::dirac(const GroupElement& x, double weight) {
  return DiscreteMeasure(x.group(), {{x, weight}});
}

void DiscreteMeasure::normalize() {
  std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
  std::ranges::sort(atoms_, atom_less);
  std::vector<Atom> merged;
  merged.reserve(atoms_.size());
  for (auto& a : atoms_) {
    if (!merged.empty() && same_point(merged.back().x, a.x))
      merged.back().weight += a.weight;
    else
      merged.push_back(std::move(a));
  }
  // angles near -1/2 and +1/2 are neighbours on the circle
  if (merged.size() > 1 && group_.kind != GroupKind::padic &&
      same_point(merged.front().x, merged.back().x)) {
    merged.front().weight += merged.back().weight;
    merged.pop_back();
  }
  atoms_ = std::move(merged);
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

double DiscreteMeasure::mass_at(const GroupElement& x) const {
  for (const auto& a : atoms_)
    if (same_point(a.x, x)) return a.weight;
  return 0.0;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  for (auto& a : out) a.weight *= factor;
  return DiscreteMeasure(group_, std::move(out));
}

LevyMeasure LevyMeasure::zero(const GroupId& g) { return LevyMeasure(DiscreteMeasure(g)); }

LevyMeasure validate_levy(const DiscreteMeasure& eta) {
  for (const auto& a : eta.atoms())
    if (is_identity(a.x)) throw DomainError("Levy measure has an atom at the identity");
  return LevyMeasure(eta);
}

LevyMeasure validate_levy(const GroupId& g, std::vector<Atom> atoms) {
  return validate_levy(DiscreteMeasure(g, std::move(atoms)));
}

double qform_eval(QuadraticFormParam b, const Character& chi, const GroupId& g) {
  if (chi.kind != g.kind) throw GroupMismatch("character of another group");
  if (!(b.b >= 0.0)) throw DomainError("quadratic form parameter must be >= 0");
  const double l2 = static_cast<double>(chi.l) * static_cast<double>(chi.l);
  switch (g.kind) {
    case GroupKind::torus:
      return b.b * l2;
    case GroupKind::padic:
      if (b.b != 0.0) throw DomainError("quadratic form must be 0 on p-adic groups");
      return 0.0;
    case GroupKind::solenoid: {
      const double pd = power_of(g.prime, chi.d);
      return b.b * l2 / (pd * pd);
    }
  }
  return 0.0;
}

double gauss_ft(QuadraticFormParam b, const Character& chi, const GroupId& g) {
  return std::exp(-qform_eval(b, chi, g) / 2.0);
}

Complex measure_ft(const DiscreteMeasure& mu, const Character& chi) {
  Complex s{0.0, 0.0};
  for (const auto& a : mu.atoms()) s += a.weight * char_eval(chi, a.x);
  return s;
}

Complex cpoisson_ft(const DiscreteMeasure& eta, const Character& chi) {
  Complex s{0.0, 0.0};
  for (const auto& a : eta.atoms()) s += a.weight * char_eval_minus_one(chi, a.x);
  return std::exp(s);
}

Complex genpoisson_ft(const LevyMeasure& eta, const Character& chi) {
  Complex s{0.0, 0.0};
  for (const auto& a : eta.atoms())
    s += a.weight * (char_eval_minus_one(chi, a.x) - Complex{0.0, local_inner(a.x, chi)});
  return std::exp(s);
}

double integral_g(const DiscreteMeasure& mu, const Character& chi) {
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.weight * local_inner(a.x, chi);
  return s;
}

double integral_g2(const DiscreteMeasure& mu, const Character& chi) {
  double s = 0.0;
  for (const auto& a : mu.atoms()) {
    const double g = local_inner(a.x, chi);
    s += a.weight * g * g;
  }
  return s;
}

GroupElement local_mean(const DiscreteMeasure& mu) {
  const auto& g = mu.group();
  switch (g.kind) {
    case GroupKind::padic:
      return identity(g);
    case GroupKind::torus: {
      double s = 0.0;
      for (const auto& a : mu.atoms()) s += a.weight * h_trunc(a.x.radians());
      return GroupElement::torus_radians(s);
    }
    case GroupKind::solenoid: {
      double s = 0.0;
      for (const auto& a : mu.atoms()) s += a.weight * h_trunc(kTwoPi * a.x.coordinate_turns(0));
      return GroupElement::solenoid_from_base(g, s);
    }
  }
  throw DomainError("unknown group kind");
}

DiscreteMeasure convolve(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.group() != b.group()) throw GroupMismatch("convolution of measures on different groups");
  std::vector<Atom> out;
  out.reserve(a.atoms().size() * b.atoms().size());
  for (const auto& u : a.atoms())
    for (const auto& v : b.atoms()) out.push_back({add(u.x, v.x), u.weight * v.weight});
  return DiscreteMeasure(a.group(), std::move(out));
}

double cylinder_mass(const DiscreteMeasure& eta, const GroupElement& x, std::uint32_t r) {
  if (x.kind() != GroupKind::padic || eta.group().kind != GroupKind::padic)
    throw GroupMismatch("cylinder_mass is defined on Delta_p");
  if (x.group() != eta.group()) throw GroupMismatch("cylinder centre on another group");
  if (r > x.group().depth) throw DepthOverflow("cylinder rank beyond working depth");
  double s = 0.0;
  for (const auto& a : eta.atoms())
    if (std::ranges::equal(a.x.digits().first(r), x.digits().first(r))) s += a.weight;
  return s;
}

double tail_mass_measure(const DiscreteMeasure& eta, const Neighborhood& u) {
  double s = 0.0;
  for (const auto& a : eta.atoms())
    if (!in_nbhd(a.x, u)) s += a.weight;
  return s;
}

LimitLaw make_law(CompactSubgroup h, GroupElement a, QuadraticFormParam b, LevyMeasure eta) {
  const auto& g = a.group();
  if (eta.group() != g) throw GroupMismatch("Levy measure and shift live on different groups");
  check_subgroup(h, g);
  if (!(b.b >= 0.0) || !std::isfinite(b.b))
    throw DomainError("quadratic form parameter must be a finite value >= 0");
  if (g.kind == GroupKind::padic && b.b != 0.0)
    throw DomainError("quadratic form must be 0 on p-adic groups");
  return LimitLaw{h, std::move(a), b, std::move(eta)};
}

LimitLaw dirac_law(const GroupElement& a) {
  return make_law(CompactSubgroup::trivial(), a, {0.0}, LevyMeasure::zero(a.group()));
}

LimitLaw gauss_law(const GroupId& g, double b) {
  return make_law(CompactSubgroup::trivial(), identity(g), {b}, LevyMeasure::zero(g));
}

LimitLaw haar_law(const GroupId& g, CompactSubgroup h) {
  return make_law(h, identity(g), {0.0}, LevyMeasure::zero(g));
}

LimitLaw compound_poisson_law(const LevyMeasure& eta) {
  return make_law(CompactSubgroup::trivial(), local_mean(eta.measure()), {0.0}, eta);
}

Complex limit_law_ft(const LimitLaw& law, const Character& chi) {
  const auto& g = law.group();
  if (chi.kind != g.kind) throw GroupMismatch("character of another group");
  if (chi.kind != GroupKind::torus && chi.d > g.depth)
    throw DepthOverflow("character depth exceeds working depth");
  if (!annihilator_contains(law.H, chi, g.prime)) return {0.0, 0.0};
  return char_eval(chi, law.a) * gauss_ft(law.b, chi, g) * genpoisson_ft(law.eta, chi);
}

std::string describe(const LimitLaw& law) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", law.b.b);
  std::string s = "H=" + to_string(law.H) + " a=" + to_string(law.a) + " b=" + buf + " eta={";
  bool first = true;
  for (const auto& at : law.eta.atoms()) {
    std::snprintf(buf, sizeof buf, "%.17g", at.weight);
    s += (first ? "" : ", ") + to_string(at.x) + ":" + buf;
    first = false;
  }
  return s + "}";
}

}  // namespace lcalim
