#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lcalim/config.hpp"
#include "lcalim/error.hpp"
#include "lcalim/report.hpp"

using namespace lcalim;
namespace fs = std::filesystem;

namespace {

const char* kMinimalTorus = R"({
  "group": {"kind": "torus"},
  "array": {"kind": "rademacher", "x": {"angle": {"kind": "power", "coef": 1.0, "exp": -0.5}},
            "K": {"kind": "linear", "coef": 1}},
  "law": {"b": 1.0}
})";

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

/// The last `count` comma-separated fields of a CSV line.
std::vector<std::string> tail_fields(const std::string& line, std::size_t count) {
  std::vector<std::string> out;
  std::size_t end = line.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto comma = line.rfind(',', end - 1);
    out.insert(out.begin(), line.substr(comma + 1, end - comma - 1));
    end = comma;
  }
  return out;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("lcalim_test_" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path source_path(const std::string& rel) { return fs::path(LCALIM_SOURCE_DIR) / rel; }

}  // namespace

TEST_CASE("parse_config: minimal torus config") {
  const auto cfg = parse_config(kMinimalTorus);
  CHECK(cfg.group == GroupId::torus());
  CHECK(cfg.array.group == GroupId::torus());
  REQUIRE(cfg.law);
  CHECK(cfg.law->b.b == 1.0);
  CHECK_FALSE(cfg.law_predicted);
  CHECK_FALSE(cfg.monte_carlo.enabled);
  CHECK(cfg.verify.grid == default_verify_config(GroupId::torus()).grid);
  CHECK(cfg.verify.chars.size() == default_characters(GroupId::torus()).size());
}

TEST_CASE("parse_config: semantic errors") {
  const std::string padic_gauss = R"({
    "group": {"kind": "padic", "prime": 2},
    "array": {"kind": "bernoulli", "x": {"digits": [1]}, "p": {"kind": "power", "coef": 2.0, "exp": -1.0},
              "K": {"kind": "linear", "coef": 1}},
    "law": {"b": 0.5}
  })";
  CHECK(error_of(padic_gauss).find("quadratic form must be 0 on p-adic groups") != std::string::npos);

  std::string no_prime = padic_gauss;
  no_prime.replace(no_prime.find(", \"prime\": 2"), std::string(", \"prime\": 2").size(), "");
  const auto msg = error_of(no_prime);
  CHECK(msg.find("group.prime") != std::string::npos);

  CHECK_FALSE(error_of(R"({"group": {"kind": "torus"}, "array": )").empty());
  CHECK_FALSE(error_of("[]").empty());
  CHECK_FALSE(error_of(R"({"group": {"kind": "klein"}})").empty());
  CHECK(error_of(kMinimalTorus).empty());
}

TEST_CASE("load_config") {
  CHECK_THROWS_AS(load_config(source_path("configs/does_not_exist.json")), IoError);
  CHECK_THROWS_AS(load_config(source_path("tests/data/malformed.json")), ConfigError);
  for (const auto& entry : fs::directory_iterator(source_path("configs"))) {
    CAPTURE(entry.path().string());
    if (entry.path().filename() == "padic_gauss_invalid.json")
      CHECK_THROWS_AS(load_config(entry.path()), ConfigError);
    else
      CHECK_NOTHROW(load_config(entry.path()));
  }
}

TEST_CASE("predicted laws are resolved at parse time") {
  const auto cfg = load_config(source_path("configs/padic_poisson.json"));
  CHECK(cfg.law_predicted);
  CHECK(cfg.prediction_tag == "bernoulli-poisson");
  REQUIRE(cfg.law);
  CHECK(cfg.law->eta.atoms().size() == 1);
  CHECK(cfg.law->eta.atoms()[0].weight == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("run_experiment writes reproducible reports") {
  auto cfg = load_config(source_path("configs/torus_clt.json"));
  TempDir dir("run");
  cfg.out_dir = dir.path;
  std::ostringstream log;
  CHECK(run_experiment(cfg, log) == kExitPass);
  CHECK(log.str().find("verdict: pass") != std::string::npos);

  const auto ft = lines_of(dir.path / "ft_table.csv");
  REQUIRE(!ft.empty());
  CHECK(ft[0] == "n,char_id,re_exact,im_exact,re_limit,im_limit,abs_err");
  CHECK(lines_of(dir.path / "conditions.csv").at(0) == "name,param,n,value,expect,target,verdict,pass");
  CHECK(lines_of(dir.path / "mc.csv").at(0) == "n,char_id,re_empirical,im_empirical,re_exact,im_exact,abs_err,bound");

  // each table row holds the library values at full precision
  const auto report = check_theorem(cfg.array, *cfg.law, cfg.verify);
  REQUIRE(ft.size() == report.ft_table.size() + 1);
  for (std::size_t i = 0; i < report.ft_table.size(); ++i) {
    const auto& r = report.ft_table[i];
    CHECK(ft[i + 1].starts_with(std::to_string(r.n) + ","));
    CHECK(tail_fields(ft[i + 1], 5) == std::vector<std::string>{format_double(r.exact.real()), format_double(r.exact.imag()),
                                                              format_double(r.limit.real()), format_double(r.limit.imag()),
                                                              format_double(r.abs_err)});
  }

  const auto verdict = nlohmann::json::parse(slurp(dir.path / "verdict.json"));
  CHECK(verdict.at("verdict") == "pass");
  CHECK(verdict.at("tag") == "rademacher-clt");

  // a second run reproduces every file byte for byte
  std::vector<std::string> first;
  for (const char* f : {"ft_table.csv", "conditions.csv", "mc.csv", "verdict.json"}) first.push_back(slurp(dir.path / f));
  std::ostringstream log2;
  CHECK(run_experiment(cfg, log2) == kExitPass);
  std::size_t i = 0;
  for (const char* f : {"ft_table.csv", "conditions.csv", "mc.csv", "verdict.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir.path / f) == first[i++]);
  }
}

TEST_CASE("run_experiment reports a failing convergence check") {
  auto cfg = load_config(source_path("configs/bernoulli_mismatch.json"));
  TempDir dir("fail");
  cfg.out_dir = dir.path;
  std::ostringstream log;
  CHECK(run_experiment(cfg, log) == kExitFail);
  CHECK(nlohmann::json::parse(slurp(dir.path / "verdict.json")).at("verdict") == "fail");
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-17})
    CHECK(std::stod(format_double(v)) == v);
}
