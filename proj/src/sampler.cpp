#include "lcalim/sampler.hpp"

#include <cmath>

#include "lcalim/error.hpp"
#include "lcalim/kernels.hpp"

namespace lcalim {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GroupElement block_sum_shortcut(const RowBlock& block, SeededStream& s) {
  const auto atoms = block.dist.atoms();
  GroupElement sum = identity(block.dist.group());
  std::int64_t remaining = block.count;
  double remaining_mass = 1.0;
  for (std::size_t i = 0; i < atoms.size() && remaining > 0; ++i) {
    std::int64_t c = remaining;
    if (i + 1 < atoms.size()) {
      const double q = remaining_mass > 0.0 ? atoms[i].weight / remaining_mass : 1.0;
      c = sample_binomial(remaining, std::min(1.0, q), s);
      remaining_mass -= atoms[i].weight;
    }
    remaining -= c;
    if (c > 0) sum = add(sum, scale(atoms[i].x, c));
  }
  return sum;
}

GroupElement block_sum_direct(const RowBlock& block, SeededStream& s) {
  const auto atoms = block.dist.atoms();
  GroupElement sum = identity(block.dist.group());
  for (std::int64_t k = 0; k < block.count; ++k) {
    double u = s.uniform();
    std::size_t i = 0;
    while (i + 1 < atoms.size() && u >= atoms[i].weight) u -= atoms[i++].weight;
    sum = add(sum, atoms[i].x);
  }
  return sum;
}

std::int64_t poisson_inversion(double lambda, SeededStream& s) {
  double p = std::exp(-lambda);
  double cdf = p;
  const double u = s.uniform();
  std::int64_t k = 0;
  while (u > cdf && k < 10'000) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Hormann's transformed rejection with squeeze (PTRD).
std::int64_t poisson_ptrd(double lambda, SeededStream& s) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = s.uniform() - 0.5;
    const double v = s.uniform();
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + lambda + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + static_cast<double>(k) * loglam - std::lgamma(static_cast<double>(k) + 1.0))
      return k;
  }
}

GroupElement sample_haar(const CompactSubgroup& h, const GroupId& g, SeededStream& s) {
  switch (h.kind) {
    case CompactSubgroup::Kind::trivial:
      return identity(g);
    case CompactSubgroup::Kind::cyclic: {
      std::uniform_int_distribution<std::uint64_t> pick(0, h.r - 1);
      return GroupElement::torus_turns(static_cast<double>(pick(s.engine())) /
                                       static_cast<double>(h.r));
    }
    case CompactSubgroup::Kind::full:
    case CompactSubgroup::Kind::lambda: {
      if (g.kind == GroupKind::torus) return GroupElement::torus_turns(s.uniform() - 0.5);
      const std::uint64_t r = h.kind == CompactSubgroup::Kind::full ? 0 : h.r;
      std::vector<std::uint32_t> digits(g.depth + 1, 0);
      std::uniform_int_distribution<std::uint32_t> digit(0, g.prime - 1);
      for (std::uint64_t j = r; j <= g.depth; ++j) digits[j] = digit(s.engine());
      return GroupElement::padic_digits(g, std::move(digits));
    }
  }
  throw DomainError("unknown subgroup kind");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> path) {
  std::uint64_t h = splitmix(master);
  for (std::uint64_t v : path) h = splitmix(h ^ splitmix(v + 0x632BE59BD9B4E019ULL));
  return h;
}

SeededStream::SeededStream(std::uint64_t master, std::vector<std::uint64_t> path)
    : master_(master), path_(std::move(path)), engine_(derive_seed(master_, path_)) {}

SeededStream SeededStream::child(std::uint64_t index) const {
  auto p = path_;
  p.push_back(index);
  return SeededStream(master_, std::move(p));
}

double SeededStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::int64_t sample_poisson(double lambda, SeededStream& s) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("Poisson mean must be >= 0");
  if (lambda == 0.0) return 0;
  return lambda <= 30.0 ? poisson_inversion(lambda, s) : poisson_ptrd(lambda, s);
}

std::int64_t sample_binomial(std::int64_t trials, double p, SeededStream& s) {
  if (trials < 0 || !(p >= 0.0 && p <= 1.0)) throw DomainError("bad binomial parameters");
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(trials, p);
  return dist(s.engine());
}

GroupElement sample_row_sum(const TriangularArraySpec& spec, std::int64_t n, SeededStream& s,
                            const SampleOptions& opts) {
  const auto blocks = row_blocks(spec, n);
  if (!opts.shortcut && spec.K_at(n) > opts.budget)
    throw BudgetExceeded("K_n = " + std::to_string(spec.K_at(n)) +
                         " exceeds the direct sampling budget " + std::to_string(opts.budget));
  GroupElement sum = identity(spec.group);
  for (const auto& block : blocks)
    sum = add(sum, opts.shortcut ? block_sum_shortcut(block, s) : block_sum_direct(block, s));
  return sum;
}

EmpiricalFT empirical_ft(const TriangularArraySpec& spec, std::int64_t n,
                         std::span<const Character> chars, std::int64_t M, std::uint64_t seed,
                         const SampleOptions& opts, bool parallel) {
  if (M < 1) throw DomainError("replicate count must be >= 1");
  if (!opts.shortcut && spec.K_at(n) > opts.budget)
    throw BudgetExceeded("K_n exceeds the direct sampling budget");
  const SeededStream base(seed, {static_cast<std::uint64_t>(n)});
  const ReplicateFn fn = [&](std::int64_t m, std::span<Complex> out) {
    auto stream = base.child(static_cast<std::uint64_t>(m));
    const auto x = sample_row_sum(spec, n, stream, opts);
    for (std::size_t c = 0; c < chars.size(); ++c) out[c] = char_eval(chars[c], x);
  };
  EmpiricalFT ft;
  ft.chars.assign(chars.begin(), chars.end());
  ft.estimate = parallel ? replicate_means(M, chars.size(), fn)
                         : replicate_means_serial(M, chars.size(), fn);
  ft.replicates = M;
  ft.stderr_bound = 1.0 / std::sqrt(static_cast<double>(M));
  return ft;
}

GroupElement sample_limit_law(const LimitLaw& law, SeededStream& s) {
  const auto& g = law.group();
  if (g.kind == GroupKind::solenoid)
    throw DomainError("limit-law sampling is not supported on the solenoid");
  if (g.kind == GroupKind::padic && law.b.b != 0.0)
    throw DomainError("quadratic form must be 0 on p-adic groups");

  GroupElement x = add(law.a, sample_haar(law.H, g, s));
  if (law.b.b > 0.0) {
    std::normal_distribution<double> normal(0.0, std::sqrt(law.b.b));
    x = add(x, GroupElement::torus_radians(normal(s.engine())));
  }
  for (const auto& atom : law.eta.atoms()) {
    const auto count = sample_poisson(atom.weight, s);
    if (count > 0) x = add(x, scale(atom.x, count));
  }
  if (!law.eta.atoms().empty()) x = sub(x, local_mean(law.eta.measure()));
  return x;
}

EmpiricalFT empirical_law_ft(const LimitLaw& law, std::span<const Character> chars,
                             std::int64_t M, std::uint64_t seed) {
  if (M < 1) throw DomainError("replicate count must be >= 1");
  const SeededStream base(seed);
  EmpiricalFT ft;
  ft.chars.assign(chars.begin(), chars.end());
  ft.estimate = replicate_means(M, chars.size(), [&](std::int64_t m, std::span<Complex> out) {
    auto stream = base.child(static_cast<std::uint64_t>(m));
    const auto x = sample_limit_law(law, stream);
    for (std::size_t c = 0; c < chars.size(); ++c) out[c] = char_eval(chars[c], x);
  });
  ft.replicates = M;
  ft.stderr_bound = 1.0 / std::sqrt(static_cast<double>(M));
  return ft;
}

}  // namespace lcalim
