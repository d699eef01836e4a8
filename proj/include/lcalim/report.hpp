#pragma once

// Report files for experiments: the FT table and condition sequences as CSV,
// and a one-object JSON verdict summary.

#include <filesystem>
#include <ostream>
#include <span>

#include "lcalim/config.hpp"
#include "lcalim/sampler.hpp"

namespace lcalim {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInvalidConfig = 2, kExitIo = 3 };

/// 17 significant digits, as used in every report.
std::string format_double(double v);

/// Columns: n,char_id,re_exact,im_exact,re_limit,im_limit,abs_err.
void write_ft_table_csv(const std::filesystem::path& path, std::span<const FtRow> rows);
/// Columns: name,param,n,value,expect,target,verdict,pass (one row per grid point).
void write_conditions_csv(const std::filesystem::path& path,
                          std::span<const ConditionSeries> conditions);

struct MonteCarloRow {
  std::int64_t n = 0;
  Character chi;
  Complex empirical;
  Complex exact;
  double abs_err = 0.0;
  double bound = 0.0;  // 4 / sqrt(M)
};

/// Empirical vs exact row FT at every Monte Carlo n for the configured characters.
std::vector<MonteCarloRow> monte_carlo_check(const ExperimentConfig& cfg);
/// Columns: n,char_id,re_empirical,im_empirical,re_exact,im_exact,abs_err,bound.
void write_monte_carlo_csv(const std::filesystem::path& path, std::span<const MonteCarloRow> rows);

/// verify: ft_table.csv, conditions.csv, verdict.json (plus mc.csv when the
/// Monte Carlo block is enabled). Returns kExitPass or kExitFail.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);
/// conditions: conditions.csv and verdict.json for the hypotheses only.
int run_conditions(const ExperimentConfig& cfg, std::ostream& log);
/// sample: mc.csv and mc_summary.json.
int run_sample(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace lcalim
