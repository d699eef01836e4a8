#include "lcalim/array.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcalim/error.hpp"

namespace lcalim {

namespace {

constexpr double kMassTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

RowDistribution symmetric_row(const GroupId& g, const std::vector<SymmetricAtom>& atoms,
                              std::int64_t n) {
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    const auto x = a.x.at(g, n);
    out.push_back({x, a.weight / 2.0});
    out.push_back({neg(x), a.weight / 2.0});
  }
  return RowDistribution(DiscreteMeasure(g, std::move(out)));
}

}  // namespace

std::vector<RowBlock> row_blocks(const TriangularArraySpec& spec, std::int64_t n) {
  const std::int64_t k_n = spec.K_at(n);
  const auto& g = spec.group;
  return std::visit(
      overloaded{
          [&](const RademacherRows& r) -> std::vector<RowBlock> {
            return {{symmetric_row(g, {{r.x, 1.0}}, n), k_n}};
          },
          [&](const IIDSymmetricRows& r) -> std::vector<RowBlock> {
            return {{symmetric_row(g, r.atoms, n), k_n}};
          },
          [&](const BernoulliRows& r) -> std::vector<RowBlock> {
            const double p = r.p(n);
            if (!(p >= 0.0 && p <= 1.0))
              throw DomainError("Bernoulli p_n outside [0,1] at n=" + std::to_string(n));
            return {{RowDistribution(DiscreteMeasure(g, {{r.x, p}, {identity(g), 1.0 - p}})),
                     k_n}};
          },
          [&](const GeneralRows& r) -> std::vector<RowBlock> {
            const auto len = static_cast<std::int64_t>(r.cycle.size());
            std::vector<RowBlock> blocks;
            for (std::int64_t j = 0; j < len && j < k_n; ++j)
              blocks.push_back({r.cycle[j], k_n / len + (j < k_n % len ? 1 : 0)});
            return blocks;
          },
      },
      spec.kind);
}

namespace {

Complex log1p_complex(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

}  // namespace

RowDistribution::RowDistribution(DiscreteMeasure mu) : mu_(std::move(mu)) {
  const double mass = mu_.total_mass();
  if (std::abs(mass - 1.0) > kMassTol)
    throw DomainError("row distribution has total mass " + std::to_string(mass));
}

// ---------------------------------------------------------------------------
// Element rules

ElementRule ElementRule::fixed(GroupElement x) {
  ElementRule r;
  r.kind_ = Kind::fixed;
  r.fixed_ = std::move(x);
  return r;
}

ElementRule ElementRule::torus_angle(Schedule angle) {
  ElementRule r;
  r.kind_ = Kind::torus_angle;
  r.schedule_ = std::move(angle);
  return r;
}

ElementRule ElementRule::solenoid_base_angle(Schedule angle) {
  ElementRule r;
  r.kind_ = Kind::solenoid_base_angle;
  r.schedule_ = std::move(angle);
  return r;
}

ElementRule ElementRule::padic_power(Schedule valuation, std::int64_t unit) {
  ElementRule r;
  r.kind_ = Kind::padic_power;
  r.schedule_ = std::move(valuation);
  r.unit_ = unit;
  return r;
}

GroupElement ElementRule::at(const GroupId& g, std::int64_t n) const {
  switch (kind_) {
    case Kind::fixed:
      if (fixed_.group() != g) throw GroupMismatch("fixed element on another group");
      return fixed_;
    case Kind::torus_angle:
      if (g.kind != GroupKind::torus) throw GroupMismatch("angle rule needs the torus");
      return GroupElement::torus_radians(schedule_(n));
    case Kind::solenoid_base_angle:
      if (g.kind != GroupKind::solenoid) throw GroupMismatch("base-angle rule needs S_p");
      return GroupElement::solenoid_from_base(g, schedule_(n));
    case Kind::padic_power: {
      if (g.kind != GroupKind::padic) throw GroupMismatch("valuation rule needs Delta_p");
      const double v = schedule_(n);
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("valuation must be >= 0");
      const auto val = static_cast<std::uint64_t>(std::llround(v));
      if (val > g.depth) return identity(g);
      auto x = GroupElement::padic_integer(g, unit_);
      std::vector<std::uint32_t> digits(g.depth + 1, 0);
      for (std::uint64_t j = 0; j + val <= g.depth; ++j) digits[j + val] = x.digits()[j];
      return GroupElement::padic_digits(g, std::move(digits));
    }
  }
  throw DomainError("unknown element rule");
}

std::string ElementRule::describe() const {
  switch (kind_) {
    case Kind::fixed:
      return to_string(fixed_);
    case Kind::torus_angle:
      return "angle=" + schedule_.describe();
    case Kind::solenoid_base_angle:
      return "base_angle=" + schedule_.describe();
    case Kind::padic_power:
      return std::to_string(unit_) + "*p^(" + schedule_.describe() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Spec

bool TriangularArraySpec::iid() const { return !std::holds_alternative<GeneralRows>(kind); }

bool TriangularArraySpec::symmetric() const {
  return std::holds_alternative<RademacherRows>(kind) ||
         std::holds_alternative<IIDSymmetricRows>(kind);
}

std::string TriangularArraySpec::kind_name() const {
  return std::visit(overloaded{
                        [](const RademacherRows&) { return std::string("rademacher"); },
                        [](const BernoulliRows&) { return std::string("bernoulli"); },
                        [](const IIDSymmetricRows&) { return std::string("iid_symmetric"); },
                        [](const GeneralRows&) { return std::string("general"); },
                    },
                    kind);
}

double distance_to_identity(const GroupElement& x) {
  switch (x.kind()) {
    case GroupKind::torus:
      return std::abs(x.radians());
    case GroupKind::padic:
      return padic_metric(x, identity(x.group()));
    case GroupKind::solenoid: {
      double d = 0.0;
      for (std::uint32_t j = 0; j <= x.group().depth; ++j)
        d = std::max(d, std::abs(kTwoPi * x.coordinate_turns(j)));
      return d;
    }
  }
  return 0.0;
}

void validate_array(const TriangularArraySpec& spec, std::span<const std::int64_t> grid) {
  const auto& g = spec.group;
  std::visit(
      overloaded{
          [&](const RademacherRows& r) {
            double prev = std::numeric_limits<double>::infinity();
            for (auto n : grid) {
              const double d = distance_to_identity(r.x.at(g, n));
              if (d > prev + 1e-15)
                throw ConfigError("Rademacher x_n does not approach e along the grid");
              prev = d;
            }
          },
          [&](const IIDSymmetricRows& r) {
            if (r.atoms.empty()) throw ConfigError("symmetric array needs at least one atom");
            double total = 0.0;
            for (const auto& a : r.atoms) {
              if (!(a.weight >= 0.0)) throw ConfigError("negative symmetric atom weight");
              total += a.weight;
            }
            if (std::abs(total - 1.0) > kMassTol)
              throw ConfigError("symmetric atom weights must sum to 1");
            for (auto n : grid) (void)row_dist(spec, n, 1);
          },
          [&](const BernoulliRows& r) {
            if (r.x.group() != g) throw ConfigError("Bernoulli atom on another group");
            if (is_identity(r.x)) throw ConfigError("Bernoulli atom must differ from e");
            double prev = std::numeric_limits<double>::infinity();
            for (auto n : grid) {
              const double p = r.p(n);
              if (!(p >= 0.0 && p <= 1.0))
                throw ConfigError("Bernoulli p_n outside [0,1] at n=" + std::to_string(n));
              if (p > prev) throw ConfigError("Bernoulli p_n does not decrease along the grid");
              prev = p;
            }
          },
          [&](const GeneralRows& r) {
            if (r.cycle.empty()) throw ConfigError("general array needs at least one row");
            for (const auto& d : r.cycle)
              if (d.group() != g) throw ConfigError("row distribution on another group");
          },
      },
      spec.kind);
  for (auto n : grid) (void)spec.K_at(n);
}

RowDistribution row_dist(const TriangularArraySpec& spec, std::int64_t n, std::int64_t k) {
  const auto k_n = spec.K_at(n);
  if (k < 1 || k > k_n)
    throw DomainError("row index k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(k_n) + "]");
  if (const auto* gen = std::get_if<GeneralRows>(&spec.kind))
    return gen->cycle[static_cast<std::size_t>((k - 1) % static_cast<std::int64_t>(gen->cycle.size()))];
  return row_blocks(spec, n).front().dist;
}

Complex char_moment(const RowDistribution& dist, const Character& chi) {
  return measure_ft(dist.measure(), chi);
}

Complex char_moment_minus_one(const RowDistribution& dist, const Character& chi) {
  Complex s{0.0, 0.0};
  for (const auto& a : dist.atoms()) s += a.weight * char_eval_minus_one(chi, a.x);
  return s;
}

Complex power_one_plus(Complex z, std::int64_t k) {
  if (k == 0) return {1.0, 0.0};
  if (z == Complex{-1.0, 0.0}) return {0.0, 0.0};
  return std::exp(static_cast<double>(k) * log1p_complex(z));
}

Complex row_ft_exact(const TriangularArraySpec& spec, std::int64_t n, const Character& chi) {
  Complex result{1.0, 0.0};
  for (const auto& block : row_blocks(spec, n))
    result *= power_one_plus(char_moment_minus_one(block.dist, chi), block.count);
  return result;
}

GroupElement sum_local_means(const TriangularArraySpec& spec, std::int64_t n) {
  GroupElement sum = identity(spec.group);
  for (const auto& block : row_blocks(spec, n))
    sum = add(sum, scale(local_mean(block.dist.measure()), block.count));
  return sum;
}

double sum_var_g(const TriangularArraySpec& spec, std::int64_t n, const Character& chi) {
  double s = 0.0;
  for (const auto& block : row_blocks(spec, n)) {
    const double m1 = integral_g(block.dist.measure(), chi);
    const double m2 = integral_g2(block.dist.measure(), chi);
    s += static_cast<double>(block.count) * std::max(0.0, m2 - m1 * m1);
  }
  return s;
}

double sum_tail(const TriangularArraySpec& spec, std::int64_t n, const Neighborhood& u) {
  double s = 0.0;
  for (const auto& block : row_blocks(spec, n))
    s += static_cast<double>(block.count) * tail_mass_measure(block.dist.measure(), u);
  return s;
}

DiscreteMeasure row_levy_measure(const TriangularArraySpec& spec, std::int64_t n) {
  std::vector<Atom> atoms;
  for (const auto& block : row_blocks(spec, n))
    for (const auto& a : block.dist.atoms())
      if (!is_identity(a.x)) atoms.push_back({a.x, static_cast<double>(block.count) * a.weight});
  return DiscreteMeasure(spec.group, std::move(atoms));
}

double sum_cylinder(const TriangularArraySpec& spec, std::int64_t n, const GroupElement& x0,
                    std::uint32_t r) {
  return cylinder_mass(row_levy_measure(spec, n), x0, r);
}

double infinitesimality_stat(const TriangularArraySpec& spec, std::int64_t n,
                             const Neighborhood& u) {
  double m = 0.0;
  for (const auto& block : row_blocks(spec, n))
    m = std::max(m, tail_mass_measure(block.dist.measure(), u));
  return m;
}

double symmetric_stat(const TriangularArraySpec& spec, std::int64_t n, const Character& chi) {
  if (!spec.iid()) throw DomainError("symmetric_stat needs an i.i.d. array");
  const auto blocks = row_blocks(spec, n);
  const auto& block = blocks.front();
  return static_cast<double>(block.count) * -char_moment_minus_one(block.dist, chi).real();
}

double bernoulli_rate(const TriangularArraySpec& spec, std::int64_t n) {
  const auto* b = std::get_if<BernoulliRows>(&spec.kind);
  if (!b) throw DomainError("bernoulli_rate needs a Bernoulli array");
  return static_cast<double>(spec.K_at(n)) * b->p(n);
}

double rademacher_rate(const TriangularArraySpec& spec, std::int64_t n) {
  const auto* r = std::get_if<RademacherRows>(&spec.kind);
  if (!r) throw DomainError("rademacher_rate needs a Rademacher array");
  const auto x = r->x.at(spec.group, n);
  double a = 0.0;
  switch (spec.group.kind) {
    case GroupKind::torus:
      a = x.radians();
      break;
    case GroupKind::solenoid:
      a = kTwoPi * x.coordinate_turns(0);
      break;
    case GroupKind::padic:
      throw DomainError("rademacher_rate is defined on the torus and S_p");
  }
  return static_cast<double>(spec.K_at(n)) * a * a;
}

// ---------------------------------------------------------------------------
// Prediction

std::optional<CompactSubgroup> generated_subgroup(const GroupElement& x,
                                                  std::uint64_t max_cyclic_order) {
  if (is_identity(x)) return CompactSubgroup::trivial();
  switch (x.kind()) {
    case GroupKind::torus: {
      const double t = x.turns();
      constexpr double eps = std::numeric_limits<double>::epsilon();
      for (std::uint64_t r = 1; r <= max_cyclic_order; ++r) {
        const double rt = static_cast<double>(r) * t;
        if (std::abs(rt - std::round(rt)) <= 64.0 * static_cast<double>(r) * eps)
          return CompactSubgroup::cyclic(r);
      }
      return CompactSubgroup::full();
    }
    case GroupKind::padic: {
      const auto v = padic_valuation(x);
      return v == 0 ? CompactSubgroup::full() : CompactSubgroup::lambda(v);
    }
    case GroupKind::solenoid:
      return std::nullopt;
  }
  return std::nullopt;
}

Prediction predict_limit(const TriangularArraySpec& spec, const PredictConfig& cfg) {
  const auto& g = spec.group;
  Prediction out;
  out.tag = "unclassified";
  if (cfg.grid.size() < cfg.trend.window) {
    out.reason = "grid shorter than the trend window";
    return out;
  }
  validate_array(spec, cfg.grid);

  if (const auto* r = std::get_if<RademacherRows>(&spec.kind)) {
    if (g.kind == GroupKind::padic) {
      // every fixed character is eventually 1 at x_n, so the sum tends to e
      std::vector<std::uint32_t> vals;
      for (auto n : cfg.grid) vals.push_back(padic_valuation(r->x.at(g, n)));
      const auto tail = std::span(vals).last(cfg.trend.window);
      bool increasing = true;
      for (std::size_t i = 1; i < tail.size(); ++i)
        if (tail[i] <= tail[i - 1]) increasing = false;
      if (tail.back() > g.depth || increasing) {
        out.law = dirac_law(identity(g));
        out.tag = "rademacher-padic-degenerate";
      } else {
        out.reason = "x_n does not visibly tend to e on the grid";
      }
      return out;
    }
    Sequence seq;
    for (auto n : cfg.grid) seq.emplace_back(n, rademacher_rate(spec, n));
    const auto v = trend_classify(seq, cfg.trend);
    if (v.kind == TrendVerdict::Kind::converges) {
      out.law = gauss_law(g, std::max(0.0, v.value));
      out.tag = "rademacher-clt";
    } else if (v.kind == TrendVerdict::Kind::diverges) {
      out.law = haar_law(g, CompactSubgroup::full());
      out.tag = "rademacher-haar";
    } else {
      out.reason = "K_n (arg x_n)^2 is inconclusive on the grid";
    }
    return out;
  }

  if (const auto* b = std::get_if<BernoulliRows>(&spec.kind)) {
    Sequence seq;
    for (auto n : cfg.grid) seq.emplace_back(n, bernoulli_rate(spec, n));
    const auto v = trend_classify(seq, cfg.trend);
    if (v.kind == TrendVerdict::Kind::converges) {
      const double lambda = std::max(0.0, v.value);
      out.law = compound_poisson_law(validate_levy(DiscreteMeasure::dirac(b->x, lambda)));
      out.tag = "bernoulli-poisson";
    } else if (v.kind == TrendVerdict::Kind::diverges) {
      const auto h = generated_subgroup(b->x, cfg.max_cyclic_order);
      if (!h) {
        out.reason = "closed subgroup generated by x is not modelled on this group";
        return out;
      }
      out.law = haar_law(g, *h);
      out.tag = "bernoulli-haar";
    } else {
      out.reason = "K_n p_n is inconclusive on the grid";
    }
    return out;
  }

  out.reason = "prediction covers Rademacher and Bernoulli arrays only";
  return out;
}

}  // namespace lcalim
