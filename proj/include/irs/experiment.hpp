// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte-Carlo runner for the figure experiments, CSV emission and the
// key=value scenario config.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irs/channel.hpp"
#include "irs/schemes.hpp"

namespace irs {

enum class FigureId {
  Fig2RateVsPower,
  Fig3RateVsNE,
  Fig4AnVsGamma,
  Fig5Tradeoff,
  Fig6Blocked,
  Fig7AoConvergence,
  Fig8PowerminConvergence,
  Fig9MmVsObo,
  Fig10SaddleTrace,
};

enum class Baseline { Optimized, ZeroPhase, NoIrs, NoAn };

std::string to_string(FigureId id);
std::string to_string(Baseline b);
FigureId parse_figure(const std::string& s);
Baseline parse_baseline(const std::string& s);

/// Trace figures emit one row per iteration (sweep_value = iteration index).
bool is_trace_figure(FigureId id);

struct ExperimentSpec {
  FigureId figure = FigureId::Fig2RateVsPower;
  ScenarioConfig scenario;
  AoConfig ao;
  /// One of power_dbm, gamma, n, e, d, m, noise_dbm. Empty means a single run
  /// at the scenario values (sweep_value 0).
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::vector<Baseline> baselines;
  bool record_timing = false;

  void validate() const;
};

/// Default settings for a figure: dims, sweep, baselines, trial count.
ExperimentSpec default_spec(FigureId id);

struct TrialRecord {
  std::string figure_id;
  std::uint64_t seed = 0;
  double sweep_value = 0.0;
  std::string algorithm_label;
  double c_s = 0.0;
  double c_b = 0.0;
  double c_e = 0.0;
  std::optional<double> p_min;
  int iterations = 0;
  std::optional<double> wall_time_ms;
  /// Error code name when the pipeline failed; empty otherwise.
  std::string error;

  bool operator==(const TrialRecord&) const = default;
};

enum class ExecPolicy { Serial, Parallel };

/// Runs every (trial, sweep value, baseline) and returns the rows sorted by
/// (seed, sweep value, label), followed by the "_mean" summary rows. Output
/// is identical under both policies.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, ExecPolicy policy = ExecPolicy::Parallel);

/// True if any row carries an error.
bool any_errors(const std::vector<TrialRecord>& rows);

void emit_csv(const std::vector<TrialRecord>& rows, std::ostream& os);
void emit_csv(const std::vector<TrialRecord>& rows, const std::string& path);
std::vector<TrialRecord> parse_csv(std::istream& is);

/// Flat key=value text: one assignment per line, '#' starts a comment.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(std::istream& is);
ConfigMap load_config(const std::string& path);

/// Applies recognised keys to `spec`; unknown keys throw InvalidArgument.
void apply_config(const ConfigMap& cfg, ExperimentSpec& spec);

/// Sets one scenario parameter by name (also used for sweeps).
void set_parameter(ExperimentSpec& spec, const std::string& name, double value);

}  // namespace irs
