#include "slowfast/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "slowfast/errors.hpp"
#include "slowfast/io.hpp"
#include "slowfast/numerics.hpp"

namespace slowfast {

using ordered_json = nlohmann::ordered_json;

bool RunConfig::operator==(const RunConfig& other) const {
  return system_name == other.system_name && params == other.params && x0 == other.x0 &&
         z0 == other.z0 && eps == other.eps && eps_ladder == other.eps_ladder &&
         e1_values == other.e1_values && alpha == other.alpha && x_exit == other.x_exit &&
         grid_n == other.grid_n && degree == other.degree && mode == other.mode &&
         tol.rel == other.tol.rel && tol.abs == other.tol.abs &&
         tol.h_min == other.tol.h_min && tol.h_max == other.tol.h_max &&
         tol.max_steps == other.tol.max_steps && out == other.out;
}

SlowFastSystem RunConfig::make_system() const { return builtin(system_name, params); }

void RunConfig::validate() const {
  if (!(eps > 0.0)) throw ConfigError("config: eps must be > 0");
  if (!(z0 > 0.0)) throw ConfigError("config: z0 must be > 0");
  for (double e1 : e1_values)
    if (!(e1 > 0.0)) throw ConfigError("config: E1 values must be > 0");
  if (e1_values.empty()) throw ConfigError("config: need at least one E1 value");
  if (grid_n < 2) throw ConfigError("config: grid_n must be >= 2");
  if (degree < 0) throw ConfigError("config: degree must be >= 0");
  if (!(tol.rel > 0.0) || !(tol.abs > 0.0))
    throw ConfigError("config: tolerances must be positive");
  if (mode != "singular" && mode != "pipeline" && mode != "polar")
    throw ConfigError("config: mode must be singular, pipeline or polar");
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] < eps_ladder[i - 1]))
      throw ConfigError("config: eps_ladder must be strictly decreasing");
  for (double e : eps_ladder)
    if (!(e > 0.0)) throw ConfigError("config: eps_ladder values must be > 0");
}

namespace {

void reject_unknown_keys(const ordered_json& j, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config: unknown key '" + key + "' in " + where);
  }
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(j,
                      {"system", "x0", "z0", "eps", "eps_ladder", "E1", "alpha", "x_exit",
                       "grid_n", "degree", "mode", "tolerances", "out"},
                      "top level");
  RunConfig config;
  if (j.contains("system")) {
    const auto& sys = j.at("system");
    if (!sys.is_object()) throw ConfigError("config: 'system' must be an object");
    reject_unknown_keys(sys, {"name", "params"}, "system");
    if (sys.contains("name")) config.system_name = sys.at("name").get<std::string>();
    if (sys.contains("params")) {
      for (const auto& [key, value] : sys.at("params").items())
        config.params[key] = value.get<double>();
    }
  }
  if (j.contains("x0")) config.x0 = j.at("x0").get<double>();
  if (j.contains("z0")) config.z0 = j.at("z0").get<double>();
  if (j.contains("eps")) config.eps = j.at("eps").get<double>();
  if (j.contains("eps_ladder"))
    config.eps_ladder = j.at("eps_ladder").get<std::vector<double>>();
  if (j.contains("E1")) {
    if (j.at("E1").is_array())
      config.e1_values = j.at("E1").get<std::vector<double>>();
    else
      config.e1_values = {j.at("E1").get<double>()};
  }
  if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
  if (j.contains("x_exit")) config.x_exit = j.at("x_exit").get<double>();
  if (j.contains("grid_n")) config.grid_n = j.at("grid_n").get<int>();
  if (j.contains("degree")) config.degree = j.at("degree").get<int>();
  if (j.contains("mode")) config.mode = j.at("mode").get<std::string>();
  if (j.contains("tolerances")) {
    const auto& tol = j.at("tolerances");
    reject_unknown_keys(tol, {"rel", "abs", "h_min", "h_max", "max_steps"}, "tolerances");
    if (tol.contains("rel")) config.tol.rel = tol.at("rel").get<double>();
    if (tol.contains("abs")) config.tol.abs = tol.at("abs").get<double>();
    if (tol.contains("h_min")) config.tol.h_min = tol.at("h_min").get<double>();
    if (tol.contains("h_max")) {
      // JSON has no infinity; null stands for "no step cap"
      if (tol.at("h_max").is_null())
        config.tol.h_max = std::numeric_limits<double>::infinity();
      else
        config.tol.h_max = tol.at("h_max").get<double>();
    }
    if (tol.contains("max_steps"))
      config.tol.max_steps = tol.at("max_steps").get<std::int64_t>();
  }
  if (j.contains("out")) config.out = j.at("out").get<std::string>();
  config.validate();
  return config;
}

std::string config_to_json(const RunConfig& config) {
  ordered_json j;
  j["system"] = {{"name", config.system_name}, {"params", ordered_json::object()}};
  for (const auto& [key, value] : config.params) j["system"]["params"][key] = value;
  j["x0"] = config.x0;
  j["z0"] = config.z0;
  j["eps"] = config.eps;
  j["eps_ladder"] = config.eps_ladder;
  j["E1"] = config.e1_values;
  j["alpha"] = config.alpha;
  j["x_exit"] = config.x_exit;
  j["grid_n"] = config.grid_n;
  j["degree"] = config.degree;
  j["mode"] = config.mode;
  j["tolerances"] = {{"rel", config.tol.rel},
                     {"abs", config.tol.abs},
                     {"h_min", config.tol.h_min},
                     {"h_max", config.tol.h_max},
                     {"max_steps", config.tol.max_steps}};
  j["out"] = config.out;
  return j.dump(2) + "\n";
}

std::string system_to_json(const SlowFastSystem& sys) {
  ordered_json j;
  j["name"] = sys.name();
  j["params"] = ordered_json::object();
  for (const auto& [key, value] : sys.params()) j["params"][key] = value;
  j["domain"] = {{"x_min", sys.domain().x_min},
                 {"x_max", sys.domain().x_max},
                 {"z_max", sys.domain().z_max}};
  return j.dump();
}

std::vector<double> parse_ladder(const std::string& text) {
  bool logspace = false;
  std::string body = text;
  if (body.size() >= 3 && body.substr(body.size() - 3) == "log") {
    logspace = true;
    body = body.substr(0, body.size() - 3);
  }
  const auto first = body.find(':');
  const auto second = body.find(':', first == std::string::npos ? 0 : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw ConfigError("ladder: expected lo:hi:n or lo:hi:nlog, got '" + text + "'");
  double lo, hi;
  int n;
  try {
    lo = std::stod(body.substr(0, first));
    hi = std::stod(body.substr(first + 1, second - first - 1));
    n = std::stoi(body.substr(second + 1));
  } catch (const std::exception&) {
    throw ConfigError("ladder: could not parse '" + text + "'");
  }
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("ladder: need 0 < lo < hi");
  if (n < 2) throw ConfigError("ladder: need n >= 2");
  if (logspace) return num::log_ladder(lo, hi, n);
  std::vector<double> ladder(n);
  for (int i = 0; i < n; ++i) ladder[i] = hi - (hi - lo) * i / (n - 1);
  return ladder;
}

}  // namespace slowfast
