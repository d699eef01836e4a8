#pragma once

// Experiment descriptions in JSON. Every parse failure is a ConfigError whose
// message names the offending field.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lcalim/verify.hpp"

namespace lcalim {

struct MonteCarloConfig {
  bool enabled = false;
  std::int64_t replicates = 100'000;
  std::uint64_t seed = 42;
  std::vector<std::int64_t> n;  // defaults to the first grid point
};

struct ExperimentConfig {
  std::string name;
  GroupId group;
  TriangularArraySpec array;
  std::optional<LimitLaw> law;  // always set by parse_config
  bool law_predicted = false;  // law came from predict_limit
  std::string prediction_tag;
  VerifyConfig verify;
  MonteCarloConfig monte_carlo;
  std::filesystem::path out_dir = "out";
};

ExperimentConfig parse_config(std::string_view text);
/// Reads and parses a file; an unreadable file is an IoError.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace lcalim
