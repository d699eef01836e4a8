#include "lcalim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "lcalim/error.hpp"

namespace lcalim {

namespace {

using nlohmann::json;

// Monte Carlo acceptance band: four standard errors of a modulus-1 mean.
constexpr double kMcSigmas = 4.0;

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("error while writing " + path.string());
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string expectation(const ConditionSeries& c) {
  return c.expect_divergence ? "diverges" : "converges";
}

json condition_json(const ConditionSeries& c) {
  json j = {{"name", c.name},
            {"param", c.param},
            {"expect", expectation(c)},
            {"verdict", to_string(c.verdict)},
            {"pass", c.pass}};
  if (!c.expect_divergence) j["target"] = c.target;
  return j;
}

json header_json(const ExperimentConfig& cfg) {
  return {{"name", cfg.name},
          {"group", to_string(cfg.group)},
          {"array", cfg.array.kind_name() + " K=" + cfg.array.K.describe()},
          {"law", describe(*cfg.law)},
          {"law_predicted", cfg.law_predicted},
          {"prediction_tag", cfg.prediction_tag}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

json monte_carlo_json(const ExperimentConfig& cfg, std::span<const MonteCarloRow> rows,
                      bool pass) {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.abs_err);
  return {{"replicates", cfg.monte_carlo.replicates},
          {"seed", cfg.monte_carlo.seed},
          {"n", cfg.monte_carlo.n},
          {"bound", rows.empty() ? 0.0 : rows.front().bound},
          {"max_abs_err", worst},
          {"pass", pass}};
}

bool all_within(std::span<const MonteCarloRow> rows) {
  for (const auto& r : rows)
    if (!(r.abs_err <= r.bound)) return false;
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_ft_table_csv(const std::filesystem::path& path, std::span<const FtRow> rows) {
  auto out = open_output(path);
  out << "n,char_id,re_exact,im_exact,re_limit,im_limit,abs_err\n";
  for (const auto& r : rows)
    out << r.n << ',' << csv_quote(char_id(r.chi)) << ',' << format_double(r.exact.real()) << ','
        << format_double(r.exact.imag()) << ',' << format_double(r.limit.real()) << ','
        << format_double(r.limit.imag()) << ',' << format_double(r.abs_err) << '\n';
  finish(out, path);
}

void write_conditions_csv(const std::filesystem::path& path,
                          std::span<const ConditionSeries> conditions) {
  auto out = open_output(path);
  out << "name,param,n,value,expect,target,verdict,pass\n";
  for (const auto& c : conditions)
    for (const auto& [n, value] : c.values)
      out << c.name << ',' << csv_quote(c.param) << ',' << n << ',' << format_double(value) << ','
          << expectation(c) << ',' << (c.expect_divergence ? "" : format_double(c.target)) << ','
          << csv_quote(to_string(c.verdict)) << ',' << (c.pass ? "true" : "false") << '\n';
  finish(out, path);
}

std::vector<MonteCarloRow> monte_carlo_check(const ExperimentConfig& cfg) {
  const auto& mc = cfg.monte_carlo;
  const double bound = kMcSigmas / std::sqrt(static_cast<double>(mc.replicates));
  std::vector<MonteCarloRow> rows;
  for (auto n : mc.n) {
    const auto ft = empirical_ft(cfg.array, n, cfg.verify.chars, mc.replicates, mc.seed);
    for (std::size_t c = 0; c < ft.chars.size(); ++c) {
      MonteCarloRow r;
      r.n = n;
      r.chi = ft.chars[c];
      r.empirical = ft.estimate[c];
      r.exact = row_ft_exact(cfg.array, n, r.chi);
      r.abs_err = std::abs(r.empirical - r.exact);
      r.bound = bound;
      rows.push_back(r);
    }
  }
  return rows;
}

void write_monte_carlo_csv(const std::filesystem::path& path,
                           std::span<const MonteCarloRow> rows) {
  auto out = open_output(path);
  out << "n,char_id,re_empirical,im_empirical,re_exact,im_exact,abs_err,bound\n";
  for (const auto& r : rows)
    out << r.n << ',' << csv_quote(char_id(r.chi)) << ',' << format_double(r.empirical.real())
        << ',' << format_double(r.empirical.imag()) << ',' << format_double(r.exact.real()) << ','
        << format_double(r.exact.imag()) << ',' << format_double(r.abs_err) << ','
        << format_double(r.bound) << '\n';
  finish(out, path);
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  const auto report = check_theorem(cfg.array, *cfg.law, cfg.verify);
  write_ft_table_csv(cfg.out_dir / "ft_table.csv", report.ft_table);
  write_conditions_csv(cfg.out_dir / "conditions.csv", report.conditions);

  json summary = header_json(cfg);
  summary["tag"] = report.tag;
  summary["verdict"] = to_string(report.verdict);
  summary["hypotheses_pass"] = report.hypotheses_pass;
  summary["ft_pass"] = report.ft_pass;
  json dist = json::array();
  for (const auto& [n, v] : report.ft_distance.values) dist.push_back({n, v});
  summary["ft_distance"] = {{"verdict", to_string(report.ft_distance.verdict)},
                            {"tol", cfg.verify.ft_tol},
                            {"values", dist}};
  json conds = json::array();
  for (const auto& c : report.conditions) conds.push_back(condition_json(c));
  summary["conditions"] = conds;
  if (cfg.monte_carlo.enabled) {
    const auto rows = monte_carlo_check(cfg);
    write_monte_carlo_csv(cfg.out_dir / "mc.csv", rows);
    summary["monte_carlo"] = monte_carlo_json(cfg, rows, all_within(rows));
  }
  write_json(cfg.out_dir / "verdict.json", summary);

  log << "theorem: " << report.tag << "\nverdict: " << to_string(report.verdict)
      << "\nreports: " << cfg.out_dir.string() << '\n';
  return report.verdict == OverallVerdict::pass ? kExitPass : kExitFail;
}

int run_conditions(const ExperimentConfig& cfg, std::ostream& log) {
  std::string tag;
  const auto conditions = theorem_conditions(cfg.array, *cfg.law, cfg.verify, &tag);
  write_conditions_csv(cfg.out_dir / "conditions.csv", conditions);
  bool pass = true;
  json summary = header_json(cfg);
  json conds = json::array();
  for (const auto& c : conditions) {
    conds.push_back(condition_json(c));
    pass = pass && c.pass;
  }
  summary["tag"] = tag;
  summary["hypotheses_pass"] = pass;
  summary["conditions"] = conds;
  write_json(cfg.out_dir / "verdict.json", summary);
  log << "theorem: " << tag << "\nhypotheses: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitPass : kExitFail;
}

int run_sample(const ExperimentConfig& cfg, std::ostream& log) {
  const auto rows = monte_carlo_check(cfg);
  write_monte_carlo_csv(cfg.out_dir / "mc.csv", rows);
  const bool pass = all_within(rows);
  json summary = header_json(cfg);
  summary["monte_carlo"] = monte_carlo_json(cfg, rows, pass);
  write_json(cfg.out_dir / "mc_summary.json", summary);
  log << "monte carlo: " << (pass ? "pass" : "fail") << " (M=" << cfg.monte_carlo.replicates
      << ", seed=" << cfg.monte_carlo.seed << ")\n";
  return pass ? kExitPass : kExitFail;
}

}  // namespace lcalim
