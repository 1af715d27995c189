// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include "irs/experiment.hpp"

namespace irs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "config key " + key + ": not a number: " + v);
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != static_cast<double>(static_cast<long long>(x)))
    throw Error(ErrorCode::InvalidArgument, "config key " + key + ": not an integer: " + v);
  return static_cast<int>(x);
}

}  // namespace

ConfigMap parse_config(std::istream& is) {
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot open config " + path);
  return parse_config(is);
}

void apply_config(const ConfigMap& cfg, ExperimentSpec& spec) {
  ScenarioConfig& sc = spec.scenario;
  for (const auto& [key, v] : cfg) {
    if (key == "figure") {
      // Callers pick figure defaults before applying the rest of the file.
      spec.figure = parse_figure(v);
    } else if (key == "m" || key == "d" || key == "e" || key == "n" || key == "power_dbm" || key == "gamma" ||
               key == "noise_dbm") {
      set_parameter(spec, key, to_double(key, v));
    } else if (key == "trials") {
      sc.trials = to_int(key, v);
    } else if (key == "seed") {
      const long long s = to_int(key, v);
      if (s < 0) throw Error(ErrorCode::InvalidArgument, "seed must be non-negative");
      sc.rng_seed = static_cast<std::uint64_t>(s);
    } else if (key == "path_loss_ref_db") {
      sc.path_loss_ref_db = to_double(key, v);
    } else if (key == "path_loss_exponent") {
      sc.path_loss_exponent = to_double(key, v);
    } else if (key == "dist_alice_bob") {
      sc.distances.alice_bob = to_double(key, v);
    } else if (key == "dist_alice_irs") {
      sc.distances.alice_irs = to_double(key, v);
    } else if (key == "dist_alice_eve") {
      sc.distances.alice_eve = to_double(key, v);
    } else if (key == "dist_irs_bob") {
      sc.distances.irs_bob = to_double(key, v);
    } else if (key == "dist_irs_eve") {
      sc.distances.irs_eve = to_double(key, v);
    } else if (key == "eps_outer") {
      spec.ao.eps_outer = to_double(key, v);
    } else if (key == "max_outer") {
      spec.ao.max_outer = to_int(key, v);
    } else if (key == "power_budget") {
      spec.ao.power_budget = to_double(key, v);
    } else if (key == "mm_tol") {
      spec.ao.mm_tol = to_double(key, v);
    } else if (key == "phase_method") {
      if (v == "obo") spec.ao.phase_method = PhaseMethod::Obo;
      else if (v == "mm") spec.ao.phase_method = PhaseMethod::Mm;
      else throw Error(ErrorCode::InvalidArgument, "phase_method must be obo or mm");
    } else if (key == "t0") {
      spec.ao.barrier.t0 = to_double(key, v);
    } else if (key == "t_max") {
      spec.ao.barrier.t_max = to_double(key, v);
    } else if (key == "mu") {
      spec.ao.barrier.mu = to_double(key, v);
    } else if (key == "alpha") {
      spec.ao.barrier.alpha = to_double(key, v);
    } else if (key == "beta") {
      spec.ao.barrier.beta = to_double(key, v);
    } else if (key == "eps1") {
      spec.ao.barrier.eps1 = to_double(key, v);
    } else if (key == "sweep") {
      // sweep = name:v1,v2,...   or empty for a single point
      if (v.empty()) {
        spec.sweep_param.clear();
        spec.sweep_values.clear();
        continue;
      }
      const auto colon = v.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "sweep must look like name:v1,v2");
      spec.sweep_param = trim(v.substr(0, colon));
      spec.sweep_values.clear();
      for (const auto& x : split(v.substr(colon + 1), ',')) spec.sweep_values.push_back(to_double(key, x));
    } else if (key == "baselines") {
      spec.baselines.clear();
      for (const auto& b : split(v, ',')) spec.baselines.push_back(parse_baseline(b));
    } else if (key == "record_timing") {
      spec.record_timing = v == "1" || v == "true";
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown config key: " + key);
    }
  }
}

}  // namespace irs
