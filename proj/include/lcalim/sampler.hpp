#pragma once

// Seeded Monte Carlo draws of row sums and limit laws, and empirical
// characteristic functions for cross-validating the exact engine.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "lcalim/array.hpp"

namespace lcalim {

/// SplitMix64-style derivation: deterministic, and distinct paths give
/// unrelated seeds. The empty path returns the mixed master seed.
std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> path);

/// A random stream identified by (master seed, derivation path).
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t master, std::vector<std::uint64_t> path = {});

  std::uint64_t master() const { return master_; }
  std::span<const std::uint64_t> path() const { return path_; }
  /// The stream for path + {index}.
  SeededStream child(std::uint64_t index) const;

  std::mt19937_64& engine() { return engine_; }
  /// Uniform on [0, 1).
  double uniform();

 private:
  std::uint64_t master_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
};

/// Poisson(lambda): inversion for lambda <= 30, transformed rejection (PTRD)
/// above.
std::int64_t sample_poisson(double lambda, SeededStream& s);
std::int64_t sample_binomial(std::int64_t trials, double p, SeededStream& s);

struct SampleOptions {
  /// Largest K_n accepted by the entry-by-entry sampler.
  std::int64_t budget = 10'000'000;
  /// Draw atom counts of each i.i.d. block jointly (binomial / multinomial)
  /// instead of summing K_n single draws.
  bool shortcut = true;
};

/// One draw of sum_k X_{n,k}. Throws BudgetExceeded when the direct sampler
/// would need more than `budget` draws.
GroupElement sample_row_sum(const TriangularArraySpec& spec, std::int64_t n, SeededStream& s,
                            const SampleOptions& opts = {});

struct EmpiricalFT {
  std::vector<Character> chars;
  std::vector<Complex> estimate;
  std::int64_t replicates = 0;
  double stderr_bound = 0.0;  // 1/sqrt(M)
};

/// Mean of chi(sample) over M replicates; replicate m draws from the stream
/// (seed, {n, m}). Bit-identical for any thread count.
EmpiricalFT empirical_ft(const TriangularArraySpec& spec, std::int64_t n,
                         std::span<const Character> chars, std::int64_t M, std::uint64_t seed,
                         const SampleOptions& opts = {}, bool parallel = true);

/// One draw of omega_H * delta_a * gamma_psi * pi_{eta,g}. Torus and Delta_p
/// only; throws DomainError for solenoid laws and for b > 0 on Delta_p.
GroupElement sample_limit_law(const LimitLaw& law, SeededStream& s);

/// Empirical FT of the limit law; replicate m uses the stream (seed, {m}).
EmpiricalFT empirical_law_ft(const LimitLaw& law, std::span<const Character> chars,
                             std::int64_t M, std::uint64_t seed);

}  // namespace lcalim
