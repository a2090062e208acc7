#include "nchodge/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "nchodge/linalg.hpp"

namespace nchodge {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path.empty() ? "config" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

double need_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double need_positive(const json& j, const std::string& path) {
  const double v = need_number(j, path);
  if (!(v > 0.0)) fail(path, "must be positive");
  return v;
}

int need_int_at_least(const json& j, const std::string& path, int lo) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const int v = j.get<int>();
  if (v < lo) fail(path, "must be >= " + std::to_string(lo));
  return v;
}

std::vector<double> need_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(need_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::MatrixXd need_theta(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected an array of rows");
  const int n = static_cast<int>(j.size());
  Eigen::MatrixXd theta(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(path + "[" + std::to_string(r) + "]", "expected a row of length " +
                                                     std::to_string(n));
    for (int c = 0; c < n; ++c)
      theta(r, c) = need_number(row[c], path + "[" + std::to_string(r) + "][" +
                                            std::to_string(c) + "]");
  }
  if ((theta + theta.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    fail(path, "must be antisymmetric");
  return theta;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

int RunConfig::lie_dimension() const {
  if (lie_preset == "su2") return 3;
  if (lie_preset.rfind("abelian_", 0) == 0)
    return std::stoi(lie_preset.substr(8));
  return lie_n;
}

RunConfig parse_config(const nlohmann::json& doc) {
  RunConfig cfg;
  check_keys(doc, "", {"model", "lie", "conformal", "u", "t_grid", "p_values",
                       "family", "tolerances", "output_dir", "seed"});

  // model
  if (!doc.contains("model")) fail("model", "required section missing");
  const json& model = doc["model"];
  if (!model.contains("type")) fail("model.type", "required key missing");
  cfg.model_type = model["type"].is_string() ? model["type"].get<std::string>() : "";
  if (cfg.model_type == "fuzzy_sphere") {
    check_keys(model, "model", {"type", "N"});
    if (model.contains("N")) cfg.N = need_int_at_least(model["N"], "model.N", 2);
  } else if (cfg.model_type == "nc_torus") {
    check_keys(model, "model", {"type", "theta", "M", "padding"});
    if (!model.contains("theta")) fail("model.theta", "required for nc_torus");
    cfg.theta = need_theta(model["theta"], "model.theta");
    if (model.contains("M")) cfg.M = need_int_at_least(model["M"], "model.M", 1);
    if (model.contains("padding"))
      cfg.padding = need_int_at_least(model["padding"], "model.padding", 0);
  } else {
    fail("model.type", "must be \"fuzzy_sphere\" or \"nc_torus\"");
  }
  const int model_n = cfg.model_type == "fuzzy_sphere"
                          ? 3
                          : static_cast<int>(cfg.theta.rows());

  // lie
  if (doc.contains("lie")) {
    const json& lie = doc["lie"];
    check_keys(lie, "lie", {"preset", "n", "constants"});
    if (lie.contains("preset")) {
      if (lie.contains("n") || lie.contains("constants"))
        fail("lie", "give either a preset or explicit constants, not both");
      cfg.lie_preset = lie["preset"].is_string() ? lie["preset"].get<std::string>() : "";
      bool abelian = cfg.lie_preset.rfind("abelian_", 0) == 0;
      if (abelian) {
        const std::string tail = cfg.lie_preset.substr(8);
        abelian = !tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos;
      }
      if (cfg.lie_preset != "su2" && !abelian)
        fail("lie.preset", "unknown preset \"" + cfg.lie_preset + "\"");
    } else {
      if (!lie.contains("n") || !lie.contains("constants"))
        fail("lie", "explicit form needs both n and constants");
      cfg.lie_n = need_int_at_least(lie["n"], "lie.n", 1);
      cfg.lie_constants = need_number_list(lie["constants"], "lie.constants");
      const std::size_t want = static_cast<std::size_t>(cfg.lie_n) * cfg.lie_n * cfg.lie_n;
      if (cfg.lie_constants.size() != want)
        fail("lie.constants", "expected n^3 = " + std::to_string(want) + " entries");
    }
  } else {
    cfg.lie_preset = cfg.model_type == "fuzzy_sphere"
                         ? "su2"
                         : "abelian_" + std::to_string(model_n);
  }
  if (cfg.lie_dimension() != model_n)
    fail("lie", "dimension " + std::to_string(cfg.lie_dimension()) +
                    " does not match the model's " + std::to_string(model_n) +
                    " derivations");

  // conformal
  cfg.conformal_template = cfg.model_type == "fuzzy_sphere" ? "j3" : "cos1";
  cfg.amplitudes = {0.0, 0.3};
  if (doc.contains("conformal")) {
    const json& conf = doc["conformal"];
    check_keys(conf, "conformal", {"template", "amplitudes"});
    if (conf.contains("template")) {
      cfg.conformal_template =
          conf["template"].is_string() ? conf["template"].get<std::string>() : "";
      const bool sphere_tpl = cfg.conformal_template == "j3";
      const bool torus_tpl = cfg.conformal_template == "cos1";
      if (!sphere_tpl && !torus_tpl)
        fail("conformal.template", "unknown template \"" + cfg.conformal_template + "\"");
      if (sphere_tpl != (cfg.model_type == "fuzzy_sphere"))
        fail("conformal.template",
             "template \"" + cfg.conformal_template + "\" does not fit " + cfg.model_type);
    }
    if (conf.contains("amplitudes"))
      cfg.amplitudes = need_number_list(conf["amplitudes"], "conformal.amplitudes");
  }
  if (cfg.model_type == "nc_torus") {
    for (std::size_t i = 0; i < cfg.amplitudes.size(); ++i)
      if (std::abs(cfg.amplitudes[i]) > 0.5)
        cfg.warnings.push_back("conformal.amplitudes[" + std::to_string(i) + "] = " +
                               fmt(cfg.amplitudes[i]) +
                               " exceeds 0.5 on a truncated model");
  }

  // u
  cfg.u_values = {0.0, 0.5, 1.0};
  if (doc.contains("u")) cfg.u_values = need_number_list(doc["u"], "u");
  for (std::size_t i = 0; i < cfg.u_values.size(); ++i)
    if (cfg.u_values[i] < 0.0 || cfg.u_values[i] > 1.0)
      cfg.warnings.push_back("u[" + std::to_string(i) + "] = " + fmt(cfg.u_values[i]) +
                             " outside [0, 1]");

  // t grid
  if (doc.contains("t_grid")) {
    const json& tg = doc["t_grid"];
    check_keys(tg, "t_grid", {"min", "max", "points_per_decade"});
    if (tg.contains("min")) cfg.t_min = need_positive(tg["min"], "t_grid.min");
    if (tg.contains("max")) cfg.t_max = need_positive(tg["max"], "t_grid.max");
    if (tg.contains("points_per_decade"))
      cfg.t_points_per_decade =
          need_int_at_least(tg["points_per_decade"], "t_grid.points_per_decade", 1);
    if (!(cfg.t_max > cfg.t_min)) fail("t_grid.max", "must exceed t_grid.min");
  }

  // p values
  cfg.p_values = {1.0, 2.0, 3.0};
  if (doc.contains("p_values")) {
    cfg.p_values = need_number_list(doc["p_values"], "p_values");
    for (std::size_t i = 0; i < cfg.p_values.size(); ++i)
      if (cfg.p_values[i] < 1.0)
        fail("p_values[" + std::to_string(i) + "]", "must be >= 1");
  }

  // family
  cfg.family_sizes = cfg.model_type == "fuzzy_sphere" ? std::vector<int>{4, 8, 12, 16}
                                                      : std::vector<int>{4, 8, 16};
  cfg.family_settings = {{0.0, 0.0}, {0.3, 0.5}};
  if (doc.contains("family")) {
    const json& fam = doc["family"];
    check_keys(fam, "family", {"sizes", "settings"});
    if (fam.contains("sizes")) {
      const json& sizes = fam["sizes"];
      if (!sizes.is_array() || sizes.empty())
        fail("family.sizes", "expected a nonempty array");
      cfg.family_sizes.clear();
      const int lo = cfg.model_type == "fuzzy_sphere" ? 2 : 1;
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        const int s = need_int_at_least(sizes[i],
                                        "family.sizes[" + std::to_string(i) + "]", lo);
        if (!cfg.family_sizes.empty() && s <= cfg.family_sizes.back())
          fail("family.sizes[" + std::to_string(i) + "]", "must be strictly increasing");
        cfg.family_sizes.push_back(s);
      }
    }
    if (fam.contains("settings")) {
      const json& st = fam["settings"];
      if (!st.is_array() || st.empty()) fail("family.settings", "expected a nonempty array");
      cfg.family_settings.clear();
      for (std::size_t i = 0; i < st.size(); ++i) {
        const std::string path = "family.settings[" + std::to_string(i) + "]";
        check_keys(st[i], path, {"amplitude", "u"});
        FamilySetting fs;
        if (st[i].contains("amplitude"))
          fs.amplitude = need_number(st[i]["amplitude"], path + ".amplitude");
        if (st[i].contains("u")) fs.u = need_number(st[i]["u"], path + ".u");
        cfg.family_settings.push_back(fs);
      }
    }
  }

  // tolerances
  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    check_keys(tol, "tolerances",
               {"kernel_tau", "min_gap_ratio", "exact_residual", "truncated_residual",
                "orthogonality", "mckean_singer", "conjugation", "growth_factor",
                "twisted_variation"});
    auto set = [&](const char* key, double& slot) {
      if (tol.contains(key))
        slot = need_positive(tol[key], std::string("tolerances.") + key);
    };
    set("kernel_tau", cfg.tol.kernel_tau);
    set("min_gap_ratio", cfg.tol.min_gap_ratio);
    set("exact_residual", cfg.tol.exact_residual);
    set("truncated_residual", cfg.tol.truncated_residual);
    set("orthogonality", cfg.tol.orthogonality);
    set("mckean_singer", cfg.tol.mckean_singer);
    set("conjugation", cfg.tol.conjugation);
    set("growth_factor", cfg.tol.growth_factor);
    set("twisted_variation", cfg.tol.twisted_variation);
  }

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) fail("output_dir", "expected a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      fail("seed", "expected a nonnegative integer");
    const auto s = doc["seed"].get<long long>();
    if (s < 0) fail("seed", "expected a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

LieAlgebra build_lie(const RunConfig& cfg) {
  if (cfg.lie_preset == "su2") return LieAlgebra::su2();
  if (cfg.lie_preset.rfind("abelian_", 0) == 0)
    return LieAlgebra::abelian(cfg.lie_dimension());
  try {
    return LieAlgebra::from_constants(cfg.lie_n, cfg.lie_constants);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("lie.constants: ") + e.what());
  }
}

SystemModel build_model(const RunConfig& cfg) {
  return build_model_at_size(cfg, cfg.model_type == "fuzzy_sphere" ? cfg.N : cfg.M);
}

SystemModel build_model_at_size(const RunConfig& cfg, int size) {
  if (cfg.model_type == "fuzzy_sphere") return build_fuzzy_sphere(size);
  return build_nc_torus(cfg.theta, size);
}

nlohmann::json RunConfig::echo() const {
  json j;
  if (model_type == "fuzzy_sphere") {
    j["model"] = {{"type", model_type}, {"N", N}};
  } else {
    json rows = json::array();
    for (Eigen::Index r = 0; r < theta.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < theta.cols(); ++c) row.push_back(theta(r, c));
      rows.push_back(row);
    }
    j["model"] = {{"type", model_type}, {"theta", rows}, {"M", M}, {"padding", padding}};
  }
  if (!lie_preset.empty()) {
    j["lie"] = {{"preset", lie_preset}};
  } else {
    j["lie"] = {{"n", lie_n}, {"constants", lie_constants}};
  }
  j["conformal"] = {{"template", conformal_template}, {"amplitudes", amplitudes}};
  j["u"] = u_values;
  j["t_grid"] = {{"min", t_min}, {"max", t_max}, {"points_per_decade", t_points_per_decade}};
  j["p_values"] = p_values;
  json settings = json::array();
  for (const FamilySetting& fs : family_settings)
    settings.push_back({{"amplitude", fs.amplitude}, {"u", fs.u}});
  j["family"] = {{"sizes", family_sizes}, {"settings", settings}};
  j["tolerances"] = {{"kernel_tau", tol.kernel_tau},
                     {"min_gap_ratio", tol.min_gap_ratio},
                     {"exact_residual", tol.exact_residual},
                     {"truncated_residual", tol.truncated_residual},
                     {"orthogonality", tol.orthogonality},
                     {"mckean_singer", tol.mckean_singer},
                     {"conjugation", tol.conjugation},
                     {"growth_factor", tol.growth_factor},
                     {"twisted_variation", tol.twisted_variation}};
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  return j;
}

std::string RunConfig::content_hash() const { return fnv1a64_hex(echo().dump()); }

}  // namespace nchodge
