#include "lcalim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lcalim/error.hpp"

namespace lcalim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.2e18)
      return static_cast<std::int64_t>(v);
  }
  fail(path, "expected an integer");
}

std::uint32_t small_unsigned(const json& j, const std::string& path) {
  const auto v = integer(j, path);
  if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) fail(path, "out of range");
  return static_cast<std::uint32_t>(v);
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// Re-raises library validation errors with the field path attached.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

GroupId parse_group(const json& j, const std::string& path) {
  const auto kind = text(require(j, "kind", path), path + ".kind");
  if (kind == "torus") return GroupId::torus();
  if (kind != "padic" && kind != "solenoid")
    fail(path + ".kind", "unknown group kind '" + kind + "' (torus, padic, solenoid)");
  const auto p = small_unsigned(require(j, "prime", path), path + ".prime");
  std::uint32_t depth = kDefaultDepth;
  if (const auto* d = optional_field(j, "depth")) depth = small_unsigned(*d, path + ".depth");
  return at_path(path, [&] {
    return kind == "padic" ? GroupId::padic(p, depth) : GroupId::solenoid(p, depth);
  });
}

Schedule parse_schedule(const json& j, const std::string& path) {
  if (j.is_number()) return Schedule::constant(number(j, path));
  const auto kind = text(require(j, "kind", path), path + ".kind");
  if (kind == "constant") return Schedule::constant(number(require(j, "value", path), path + ".value"));
  if (kind == "power")
    return Schedule::power(number(require(j, "coef", path), path + ".coef"),
                           number(require(j, "exp", path), path + ".exp"));
  if (kind == "linear")
    return Schedule::power(number(require(j, "coef", path), path + ".coef"), 1.0);
  if (kind == "table") {
    const auto& values = require(j, "values", path);
    std::map<std::int64_t, double> table;
    if (values.is_object()) {
      for (const auto& [key, v] : values.items()) {
        std::int64_t n = 0;
        std::istringstream in(key);
        if (!(in >> n) || !in.eof()) fail(path + ".values." + key, "key is not an integer");
        table[n] = number(v, path + ".values." + key);
      }
    } else if (values.is_array()) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto p = path + ".values[" + std::to_string(i) + "]";
        if (!values[i].is_array() || values[i].size() != 2) fail(p, "expected [n, value]");
        table[integer(values[i][0], p)] = number(values[i][1], p);
      }
    } else {
      fail(path + ".values", "expected an object or a list of [n, value] pairs");
    }
    if (table.empty()) fail(path + ".values", "empty table");
    return Schedule::table(std::move(table));
  }
  fail(path + ".kind", "unknown schedule kind '" + kind + "' (constant, power, linear, table)");
}

GroupElement parse_element(const json& j, const GroupId& g, const std::string& path) {
  return at_path(path, [&]() -> GroupElement {
    switch (g.kind) {
      case GroupKind::torus:
        if (const auto* a = optional_field(j, "angle"))
          return GroupElement::torus_radians(number(*a, path + ".angle"));
        if (const auto* t = optional_field(j, "turns"))
          return GroupElement::torus_turns(number(*t, path + ".turns"));
        fail(path, "torus element needs 'angle' or 'turns'");
      case GroupKind::padic:
        if (const auto* d = optional_field(j, "digits")) {
          if (!d->is_array()) fail(path + ".digits", "expected a list");
          std::vector<std::uint32_t> digits;
          for (std::size_t i = 0; i < d->size(); ++i) {
            const auto v = small_unsigned((*d)[i], path + ".digits[" + std::to_string(i) + "]");
            if (v >= g.prime)
              fail(path + ".digits[" + std::to_string(i) + "]", "digit must be < p");
            digits.push_back(v);
          }
          return GroupElement::padic_digits(g, std::move(digits));
        }
        if (const auto* v = optional_field(j, "value"))
          return GroupElement::padic_integer(g, integer(*v, path + ".value"));
        fail(path, "p-adic element needs 'digits' or 'value'");
      case GroupKind::solenoid:
        if (const auto* a = optional_field(j, "angle"))
          return GroupElement::solenoid_radians(g, number(*a, path + ".angle"));
        if (const auto* a = optional_field(j, "base_angle"))
          return GroupElement::solenoid_from_base(g, number(*a, path + ".base_angle"));
        fail(path, "solenoid element needs 'angle' (deepest coordinate) or 'base_angle'");
    }
    fail(path, "unknown group kind");
  });
}

ElementRule parse_rule(const json& j, const GroupId& g, const std::string& path) {
  if (const auto* f = optional_field(j, "fixed"))
    return ElementRule::fixed(parse_element(*f, g, path + ".fixed"));
  switch (g.kind) {
    case GroupKind::torus:
      return ElementRule::torus_angle(parse_schedule(require(j, "angle", path), path + ".angle"));
    case GroupKind::solenoid:
      return ElementRule::solenoid_base_angle(
          parse_schedule(require(j, "base_angle", path), path + ".base_angle"));
    case GroupKind::padic: {
      std::int64_t unit = 1;
      if (const auto* u = optional_field(j, "unit")) unit = integer(*u, path + ".unit");
      if (unit % static_cast<std::int64_t>(g.prime) == 0) fail(path + ".unit", "must not be divisible by p");
      return ElementRule::padic_power(
          parse_schedule(require(j, "valuation", path), path + ".valuation"), unit);
    }
  }
  fail(path, "unknown group kind");
}

std::vector<Atom> parse_atoms(const json& j, const GroupId& g, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of {x, weight}");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    const double w = number(require(j[i], "weight", p), p + ".weight");
    if (w < 0.0) fail(p + ".weight", "must be >= 0");
    atoms.push_back({parse_element(require(j[i], "x", p), g, p + ".x"), w});
  }
  return atoms;
}

TriangularArraySpec parse_array(const json& j, const GroupId& g, const std::string& path) {
  TriangularArraySpec spec;
  spec.group = g;
  spec.K = parse_schedule(require(j, "K", path), path + ".K");
  const auto kind = text(require(j, "kind", path), path + ".kind");
  if (kind == "rademacher") {
    spec.kind = RademacherRows{parse_rule(require(j, "x", path), g, path + ".x")};
  } else if (kind == "bernoulli") {
    spec.kind = BernoulliRows{parse_element(require(j, "x", path), g, path + ".x"),
                              parse_schedule(require(j, "p", path), path + ".p")};
  } else if (kind == "iid_symmetric") {
    const auto& atoms = require(j, "atoms", path);
    if (!atoms.is_array() || atoms.empty()) fail(path + ".atoms", "expected a non-empty list");
    IIDSymmetricRows rows;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto p = path + ".atoms[" + std::to_string(i) + "]";
      rows.atoms.push_back({parse_rule(require(atoms[i], "x", p), g, p + ".x"),
                            number(require(atoms[i], "weight", p), p + ".weight")});
    }
    spec.kind = std::move(rows);
  } else if (kind == "general") {
    const auto& rows = require(j, "rows", path);
    if (!rows.is_array() || rows.empty()) fail(path + ".rows", "expected a non-empty list");
    GeneralRows general;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto p = path + ".rows[" + std::to_string(i) + "]";
      auto atoms = parse_atoms(rows[i], g, p);
      general.cycle.push_back(
          at_path(p, [&] { return RowDistribution(DiscreteMeasure(g, std::move(atoms))); }));
    }
    spec.kind = std::move(general);
  } else {
    fail(path + ".kind",
         "unknown array kind '" + kind + "' (rademacher, bernoulli, iid_symmetric, general)");
  }
  return spec;
}

CompactSubgroup parse_subgroup(const json& j, const std::string& path) {
  const auto kind = text(require(j, "kind", path), path + ".kind");
  if (kind == "trivial") return CompactSubgroup::trivial();
  if (kind == "full") return CompactSubgroup::full();
  const auto r = integer(require(j, "r", path), path + ".r");
  if (r < 0) fail(path + ".r", "must be >= 0");
  if (kind == "cyclic")
    return at_path(path, [&] { return CompactSubgroup::cyclic(static_cast<std::uint64_t>(r)); });
  if (kind == "lambda") return CompactSubgroup::lambda(static_cast<std::uint64_t>(r));
  fail(path + ".kind", "unknown subgroup kind '" + kind + "' (trivial, full, cyclic, lambda)");
}

LimitLaw parse_law(const json& j, const GroupId& g, const std::string& path) {
  CompactSubgroup h = CompactSubgroup::trivial();
  if (const auto* hj = optional_field(j, "H")) h = parse_subgroup(*hj, path + ".H");
  GroupElement a = identity(g);
  if (const auto* aj = optional_field(j, "a")) a = parse_element(*aj, g, path + ".a");
  double b = 0.0;
  if (const auto* bj = optional_field(j, "b")) b = number(*bj, path + ".b");
  std::vector<Atom> atoms;
  if (const auto* ej = optional_field(j, "eta")) atoms = parse_atoms(*ej, g, path + ".eta");
  if (!j.is_object()) fail(path, "expected an object or \"predict\"");
  if (b != 0.0 && g.kind == GroupKind::padic)
    fail(path + ".b", "quadratic form must be 0 on p-adic groups");
  const auto eta = at_path(path + ".eta", [&] { return validate_levy(g, std::move(atoms)); });
  return at_path(path, [&] { return make_law(h, a, {b}, eta); });
}

std::vector<std::int64_t> parse_grid(const json& j, const std::string& path) {
  std::vector<std::int64_t> grid;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      grid.push_back(integer(j[i], path + "[" + std::to_string(i) + "]"));
  } else if (j.is_object()) {
    const auto from = integer(require(j, "from", path), path + ".from");
    const auto to = integer(require(j, "to", path), path + ".to");
    const auto factor = integer(require(j, "factor", path), path + ".factor");
    if (from < 1 || factor < 2 || to < from) fail(path, "need 1 <= from <= to and factor >= 2");
    for (std::int64_t n = from; n <= to; n *= factor) {
      grid.push_back(n);
      if (n > std::numeric_limits<std::int64_t>::max() / factor) break;
    }
  } else {
    fail(path, "expected a list of integers or {from, to, factor}");
  }
  if (grid.empty()) fail(path, "empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) fail(path, "grid points must be >= 1");
    if (i > 0 && grid[i] <= grid[i - 1]) fail(path, "grid must be strictly increasing");
  }
  return grid;
}

std::vector<Character> parse_characters(const json& j, const GroupId& g, const std::string& path) {
  std::vector<Character> chars;
  if (j.is_object()) {
    // {"max_l": L} on the torus, {"max_d": D} on Delta_p (all l),
    // {"max_d": D, "max_l": L} on S_p; the trivial character is skipped
    const auto max_d = g.kind == GroupKind::torus
                           ? 0u
                           : small_unsigned(require(j, "max_d", path), path + ".max_d");
    if (g.kind != GroupKind::torus && max_d > g.depth) fail(path + ".max_d", "exceeds working depth");
    for (std::uint32_t d = 0; d <= max_d; ++d) {
      if (g.kind == GroupKind::padic) {
        const auto m = at_path(path, [&] { return checked_pow(g.prime, d + 1); });
        if (m > 100'000) fail(path + ".max_d", "too many characters");
        for (std::int64_t l = 1; l < static_cast<std::int64_t>(m); ++l)
          chars.push_back(Character::padic(d, l));
      } else {
        const auto max_l = integer(require(j, "max_l", path), path + ".max_l");
        if (max_l < 1) fail(path + ".max_l", "must be >= 1");
        for (std::int64_t l = -max_l; l <= max_l; ++l)
          if (l != 0) chars.push_back({g.kind, d, l});
      }
    }
    return chars;
  }
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list or {max_d, max_l}");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    const auto l = integer(require(j[i], "l", p), p + ".l");
    std::uint32_t d = 0;
    if (g.kind != GroupKind::torus) {
      d = small_unsigned(require(j[i], "d", p), p + ".d");
      if (d > g.depth) fail(p + ".d", "exceeds working depth");
    }
    chars.push_back({g.kind, d, l});
  }
  return chars;
}

std::vector<Neighborhood> parse_neighborhoods(const json& j, const GroupId& g,
                                              const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list");
  std::vector<Neighborhood> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    out.push_back(at_path(p, [&] {
      switch (g.kind) {
        case GroupKind::torus:
          return Neighborhood::torus(number(require(j[i], "eps", p), p + ".eps"));
        case GroupKind::padic: {
          const auto r = small_unsigned(require(j[i], "r", p), p + ".r");
          if (r > g.depth) fail(p + ".r", "exceeds working depth");
          return Neighborhood::padic(r);
        }
        case GroupKind::solenoid: {
          const auto d = small_unsigned(require(j[i], "d", p), p + ".d");
          if (d > g.depth) fail(p + ".d", "exceeds working depth");
          return Neighborhood::solenoid(d, number(require(j[i], "eps", p), p + ".eps"));
        }
      }
      fail(p, "unknown group kind");
    }));
  }
  return out;
}

void parse_tolerances(const json& j, VerifyConfig& cfg, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (const auto* v = optional_field(j, "tol")) cfg.trend.tol = number(*v, path + ".tol");
  if (const auto* v = optional_field(j, "window")) {
    const auto w = integer(*v, path + ".window");
    if (w < 1) fail(path + ".window", "must be >= 1");
    cfg.trend.window = static_cast<std::size_t>(w);
  }
  if (const auto* v = optional_field(j, "divergence"))
    cfg.trend.divergence = number(*v, path + ".divergence");
  if (const auto* v = optional_field(j, "ft_tol")) cfg.ft_tol = number(*v, path + ".ft_tol");
  if (!(cfg.trend.tol > 0.0)) fail(path + ".tol", "must be > 0");
  if (!(cfg.ft_tol > 0.0)) fail(path + ".ft_tol", "must be > 0");
}

MonteCarloConfig parse_monte_carlo(const json& j, const std::string& path) {
  MonteCarloConfig mc;
  if (!j.is_object()) fail(path, "expected an object");
  if (const auto* v = optional_field(j, "enabled")) {
    if (!v->is_boolean()) fail(path + ".enabled", "expected true or false");
    mc.enabled = v->get<bool>();
  }
  if (const auto* v = optional_field(j, "M")) {
    mc.replicates = integer(*v, path + ".M");
    if (mc.replicates < 1) fail(path + ".M", "must be >= 1");
  }
  if (const auto* v = optional_field(j, "seed")) {
    if (!v->is_number_unsigned()) fail(path + ".seed", "expected an unsigned 64-bit integer");
    mc.seed = v->get<std::uint64_t>();
  }
  if (const auto* v = optional_field(j, "n")) mc.n = parse_grid(*v, path + ".n");
  return mc;
}

}  // namespace

ExperimentConfig parse_config(std::string_view input) {
  json root;
  try {
    root = json::parse(input.begin(), input.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  if (!root.is_object()) fail("(root)", "expected an object");

  ExperimentConfig cfg;
  if (const auto* v = optional_field(root, "name")) cfg.name = text(*v, "name");
  cfg.group = parse_group(require(root, "group", "(root)"), "group");
  cfg.array = parse_array(require(root, "array", "(root)"), cfg.group, "array");

  cfg.verify = default_verify_config(cfg.group);
  if (const auto* v = optional_field(root, "grid")) cfg.verify.grid = parse_grid(*v, "grid");
  if (const auto* v = optional_field(root, "characters"))
    cfg.verify.chars = parse_characters(*v, cfg.group, "characters");
  if (const auto* v = optional_field(root, "neighborhoods"))
    cfg.verify.nbhds = parse_neighborhoods(*v, cfg.group, "neighborhoods");
  if (const auto* v = optional_field(root, "tolerances"))
    parse_tolerances(*v, cfg.verify, "tolerances");
  if (cfg.verify.grid.size() < cfg.verify.trend.window)
    fail("grid", "fewer points than the trend window");
  at_path("array", [&] {
    validate_array(cfg.array, cfg.verify.grid);
    return 0;
  });

  const auto& law = require(root, "law", "(root)");
  if (law.is_string()) {
    if (law.get<std::string>() != "predict") fail("law", "expected an object or \"predict\"");
    PredictConfig pc{cfg.verify.grid, cfg.verify.trend};
    const auto prediction = at_path("law", [&] { return predict_limit(cfg.array, pc); });
    if (!prediction.law) fail("law", "prediction unavailable: " + prediction.reason);
    cfg.law = prediction.law;
    cfg.law_predicted = true;
    cfg.prediction_tag = prediction.tag;
  } else {
    cfg.law = parse_law(law, cfg.group, "law");
  }

  if (const auto* v = optional_field(root, "monte_carlo"))
    cfg.monte_carlo = parse_monte_carlo(*v, "monte_carlo");
  if (cfg.monte_carlo.n.empty()) cfg.monte_carlo.n = {cfg.verify.grid.front()};
  if (const auto* v = optional_field(root, "output"))
    if (const auto* d = optional_field(*v, "dir")) cfg.out_dir = text(*d, "output.dir");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return parse_config(buf.str());
}

}  // namespace lcalim
