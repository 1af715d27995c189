// SPDX-License-Identifier: Apache-2.0
#include "irs/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "irs/saddle.hpp"

namespace irs {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct FigureName {
  FigureId id;
  const char* name;
};

constexpr FigureName kFigures[] = {
    {FigureId::Fig2RateVsPower, "fig2_rate_vs_power"},
    {FigureId::Fig3RateVsNE, "fig3_rate_vs_n_e"},
    {FigureId::Fig4AnVsGamma, "fig4_an_vs_gamma"},
    {FigureId::Fig5Tradeoff, "fig5_tradeoff"},
    {FigureId::Fig6Blocked, "fig6_blocked"},
    {FigureId::Fig7AoConvergence, "fig7_ao_convergence"},
    {FigureId::Fig8PowerminConvergence, "fig8_powermin_convergence"},
    {FigureId::Fig9MmVsObo, "fig9_mm_vs_obo"},
    {FigureId::Fig10SaddleTrace, "fig10_saddle_trace"},
};

std::vector<Baseline> allowed_baselines(FigureId id) {
  switch (id) {
    case FigureId::Fig2RateVsPower:
    case FigureId::Fig3RateVsNE:
      return {Baseline::Optimized, Baseline::ZeroPhase, Baseline::NoIrs};
    case FigureId::Fig4AnVsGamma:
    case FigureId::Fig5Tradeoff:
      return {Baseline::Optimized, Baseline::ZeroPhase, Baseline::NoIrs, Baseline::NoAn};
    case FigureId::Fig6Blocked:
      return {Baseline::Optimized, Baseline::ZeroPhase, Baseline::NoAn};
    case FigureId::Fig7AoConvergence:
    case FigureId::Fig8PowerminConvergence:
    case FigureId::Fig9MmVsObo:
      return {Baseline::Optimized};
    case FigureId::Fig10SaddleTrace:
      return {Baseline::ZeroPhase, Baseline::NoIrs};
  }
  return {};
}

TrialRecord blank(const ExperimentSpec& spec, std::uint64_t seed, double sweep_value, std::string label) {
  TrialRecord r;
  r.figure_id = to_string(spec.figure);
  r.seed = seed;
  r.sweep_value = sweep_value;
  r.algorithm_label = std::move(label);
  r.c_s = r.c_b = r.c_e = kNan;
  return r;
}

// Secrecy rate of the AN scheme for a covariance meeting the QoS target.
TrialRecord an_row(const ExperimentSpec& spec, std::uint64_t seed, double x, std::string label,
                   const EffectiveChannels& eff, const CMatrix& r, double p_min, bool with_an) {
  const double gamma = spec.scenario.qos_gamma;
  const double p_total = dbm_to_watts(spec.scenario.power_dbm);
  CMatrix r_an = CMatrix::Zero(r.rows(), r.cols());
  if (with_an) r_an = an_covariance(eff.h1, p_total, p_min).r_an;
  else if (p_min > p_total) throw Error(ErrorCode::InsufficientPower, "total power is below the QoS power");
  TrialRecord row = blank(spec, seed, x, std::move(label));
  row.c_s = actual_secrecy_rate(gamma, r, r_an, eff.h2);
  row.c_b = link_rate(eff.h1, r);
  row.c_e = gamma - row.c_s;
  row.p_min = p_min;
  return row;
}

AoConfig an_config(const ExperimentSpec& spec) {
  AoConfig cfg = spec.ao;
  cfg.power_budget = dbm_to_watts(spec.scenario.power_dbm);
  cfg.init_power = cfg.power_budget;
  return cfg;
}

using Emit = std::function<void(TrialRecord)>;

void run_full_csi(const ExperimentSpec& spec, const ChannelSet& ch, std::uint64_t seed, double x, Baseline b,
                  const Emit& emit) {
  const double p = dbm_to_watts(spec.scenario.power_dbm);
  const int n = spec.scenario.dims.n;
  AoResult res;
  if (b == Baseline::Optimized) res = ao_full_csi(ch, p, spec.ao);
  else res = fixed_phase_secrecy(ch, b == Baseline::NoIrs ? PhaseShift::zeros(n) : PhaseShift::ones(n), p, spec.ao.barrier);
  TrialRecord row = blank(spec, seed, x, to_string(b));
  row.c_s = res.rates.c_s;
  row.c_b = res.rates.c_b;
  row.c_e = res.rates.c_e;
  row.iterations = res.iterations;
  emit(std::move(row));
}

void run_an(const ExperimentSpec& spec, const ChannelSet& ch, std::uint64_t seed, double x, Baseline b,
            const Emit& emit) {
  const AoConfig cfg = an_config(spec);
  const double gamma = spec.scenario.qos_gamma;
  const int n = spec.scenario.dims.n;
  const bool blocked = spec.figure == FigureId::Fig6Blocked;

  if (b == Baseline::ZeroPhase || b == Baseline::NoIrs) {
    const PhaseShift q = b == Baseline::NoIrs ? PhaseShift::zeros(n) : PhaseShift::ones(n);
    const EffectiveChannels eff = effective_channels(ch, q);
    const MinPowerResult mp = min_power_given_q(eff.h1, gamma, cfg.power_budget, cfg.bisection_tol);
    emit(an_row(spec, seed, x, to_string(b), eff, mp.r.r, mp.p_min, true));
    return;
  }

  std::vector<PhaseMethod> methods{cfg.phase_method};
  if (blocked) methods = {PhaseMethod::Obo, PhaseMethod::Mm};
  for (PhaseMethod method : methods) {
    AoConfig run_cfg = cfg;
    run_cfg.phase_method = method;
    std::string label = to_string(b);
    if (blocked) label += method == PhaseMethod::Mm ? "_mm" : "_obo";
    const PowerMinResult pm = ao_power_min(ch, gamma, run_cfg);
    TrialRecord row = an_row(spec, seed, x, label, effective_channels(ch, pm.q_opt), pm.r_opt.r, pm.p_min,
                             b != Baseline::NoAn);
    row.iterations = pm.iterations;
    emit(std::move(row));
  }
}

void run_trace(const ExperimentSpec& spec, const ChannelSet& ch, std::uint64_t seed, Baseline b, const Emit& emit) {
  const double p = dbm_to_watts(spec.scenario.power_dbm);
  const int n = spec.scenario.dims.n;
  switch (spec.figure) {
    case FigureId::Fig7AoConvergence: {
      const AoResult res = ao_full_csi(ch, p, spec.ao);
      for (std::size_t k = 0; k < res.trace.size(); ++k) {
        TrialRecord row = blank(spec, seed, static_cast<double>(k), "ao");
        row.c_s = res.trace[k].c_s;
        row.c_b = res.trace[k].c_b;
        row.c_e = res.trace[k].c_e;
        row.iterations = static_cast<int>(k);
        emit(std::move(row));
      }
      return;
    }
    case FigureId::Fig8PowerminConvergence:
    case FigureId::Fig9MmVsObo: {
      std::vector<PhaseMethod> methods{spec.ao.phase_method};
      if (spec.figure == FigureId::Fig9MmVsObo) methods = {PhaseMethod::Obo, PhaseMethod::Mm};
      for (PhaseMethod method : methods) {
        AoConfig cfg = spec.ao;
        cfg.phase_method = method;
        cfg.init_power = p;
        const PowerMinResult res = ao_power_min(ch, spec.scenario.qos_gamma, cfg);
        for (std::size_t k = 0; k < res.power_trace.size(); ++k) {
          TrialRecord row = blank(spec, seed, static_cast<double>(k), method == PhaseMethod::Mm ? "mm" : "obo");
          row.p_min = res.power_trace[k];
          row.iterations = static_cast<int>(k);
          emit(std::move(row));
        }
      }
      return;
    }
    case FigureId::Fig10SaddleTrace: {
      const EffectiveChannels eff =
          effective_channels(ch, b == Baseline::NoIrs ? PhaseShift::zeros(n) : PhaseShift::ones(n));
      const SaddleResult res = solve_saddle(eff.h1, eff.h2, p, spec.ao.barrier);
      for (const SaddleTraceRow& t : res.trace) {
        for (const bool is_f : {true, false}) {
          TrialRecord row = blank(spec, seed, static_cast<double>(t.newton_step), is_f ? "saddle_f" : "saddle_c");
          row.c_s = is_f ? t.f : t.c;
          row.iterations = t.newton_step;
          emit(std::move(row));
        }
      }
      return;
    }
    default:
      throw Error(ErrorCode::InvalidArgument, "not a trace figure");
  }
}

ChannelSet draw(const ExperimentSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng = trial_rng(seed);
  ChannelSet ch = generate_channels(spec.scenario, rng);
  const bool blocked = spec.figure == FigureId::Fig6Blocked || spec.figure == FigureId::Fig9MmVsObo;
  return blocked ? ch.blocked_direct() : ch;
}

std::vector<TrialRecord> run_trial(const ExperimentSpec& spec, int trial) {
  const std::uint64_t seed = spec.scenario.rng_seed + static_cast<std::uint64_t>(trial);
  std::vector<TrialRecord> rows;
  std::vector<double> xs = spec.sweep_values;
  if (spec.sweep_param.empty()) xs = {0.0};

  for (double x : xs) {
    ExperimentSpec local = spec;
    if (!spec.sweep_param.empty()) set_parameter(local, spec.sweep_param, x);
    for (Baseline b : spec.baselines) {
      std::vector<TrialRecord> produced;
      const auto start = std::chrono::steady_clock::now();
      try {
        const ChannelSet ch = draw(local, seed);
        const Emit emit = [&](TrialRecord r) { produced.push_back(std::move(r)); };
        switch (spec.figure) {
          case FigureId::Fig2RateVsPower:
          case FigureId::Fig3RateVsNE:
            run_full_csi(local, ch, seed, x, b, emit);
            break;
          case FigureId::Fig4AnVsGamma:
          case FigureId::Fig5Tradeoff:
          case FigureId::Fig6Blocked:
            run_an(local, ch, seed, x, b, emit);
            break;
          default:
            run_trace(local, ch, seed, b, emit);
            break;
        }
      } catch (const Error& e) {
        produced.clear();
        TrialRecord row = blank(spec, seed, x, to_string(b));
        row.error = std::string(to_string(e.code()));
        produced.push_back(std::move(row));
      } catch (const std::exception&) {
        produced.clear();
        TrialRecord row = blank(spec, seed, x, to_string(b));
        row.error = "Exception";
        produced.push_back(std::move(row));
      }
      if (spec.record_timing) {
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        for (auto& r : produced) r.wall_time_ms = ms;
      }
      for (auto& r : produced) rows.push_back(std::move(r));
    }
  }
  return rows;
}

bool row_less(const TrialRecord& a, const TrialRecord& b) {
  if (a.seed != b.seed) return a.seed < b.seed;
  if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
  return a.algorithm_label < b.algorithm_label;
}

std::vector<TrialRecord> mean_rows(const ExperimentSpec& spec, const std::vector<TrialRecord>& rows) {
  struct Acc {
    double c_s = 0, c_b = 0, c_e = 0, p = 0, it = 0;
    int count = 0;
    int with_p = 0;
  };
  std::map<std::pair<double, std::string>, Acc> groups;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    Acc& a = groups[{r.sweep_value, r.algorithm_label}];
    a.c_s += r.c_s;
    a.c_b += r.c_b;
    a.c_e += r.c_e;
    a.it += r.iterations;
    if (r.p_min) {
      a.p += *r.p_min;
      ++a.with_p;
    }
    ++a.count;
  }
  std::vector<TrialRecord> out;
  for (const auto& [key, a] : groups) {
    TrialRecord r = blank(spec, spec.scenario.rng_seed, key.first, key.second + "_mean");
    r.c_s = a.c_s / a.count;
    r.c_b = a.c_b / a.count;
    r.c_e = a.c_e / a.count;
    r.iterations = static_cast<int>(std::lround(a.it / a.count));
    if (a.with_p == a.count) r.p_min = a.p / a.count;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string to_string(FigureId id) {
  for (const auto& f : kFigures)
    if (f.id == id) return f.name;
  return "unknown";
}

std::string to_string(Baseline b) {
  switch (b) {
    case Baseline::Optimized: return "optimized";
    case Baseline::ZeroPhase: return "zero_phase";
    case Baseline::NoIrs: return "no_irs";
    case Baseline::NoAn: return "no_an";
  }
  return "unknown";
}

FigureId parse_figure(const std::string& s) {
  for (const auto& f : kFigures) {
    const std::string name = f.name;
    // Accept the full name or its "figN" prefix.
    if (s == name || s == name.substr(0, name.find('_'))) return f.id;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown figure: " + s);
}

Baseline parse_baseline(const std::string& s) {
  for (Baseline b : {Baseline::Optimized, Baseline::ZeroPhase, Baseline::NoIrs, Baseline::NoAn})
    if (to_string(b) == s) return b;
  throw Error(ErrorCode::InvalidArgument, "unknown baseline: " + s);
}

bool is_trace_figure(FigureId id) {
  return id == FigureId::Fig7AoConvergence || id == FigureId::Fig8PowerminConvergence ||
         id == FigureId::Fig9MmVsObo || id == FigureId::Fig10SaddleTrace;
}

void ExperimentSpec::validate() const {
  scenario.validate();
  ao.validate();
  if (!sweep_param.empty() && sweep_values.empty())
    throw Error(ErrorCode::InvalidArgument, "sweep parameter given without values");
  if (sweep_param.empty() && !sweep_values.empty())
    throw Error(ErrorCode::InvalidArgument, "sweep values given without a parameter");
  if (!sweep_param.empty() && is_trace_figure(figure))
    throw Error(ErrorCode::InvalidArgument, "trace figures use the iteration index as sweep value");
  for (std::size_t i = 0; i < sweep_values.size(); ++i) {
    if (!std::isfinite(sweep_values[i])) throw Error(ErrorCode::InvalidArgument, "sweep values must be finite");
    if (i > 0 && sweep_values[i] < sweep_values[i - 1])
      throw Error(ErrorCode::InvalidArgument, "sweep values must be sorted");
  }
  if (!sweep_param.empty()) {
    ExperimentSpec probe = *this;
    for (double v : sweep_values) set_parameter(probe, sweep_param, v);
    probe.scenario.validate();
  }
  if (baselines.empty()) throw Error(ErrorCode::InvalidArgument, "no baselines selected");
  const auto allowed = allowed_baselines(figure);
  for (Baseline b : baselines)
    if (std::find(allowed.begin(), allowed.end(), b) == allowed.end())
      throw Error(ErrorCode::InvalidArgument, "baseline " + to_string(b) + " does not apply to " + to_string(figure));
}

ExperimentSpec default_spec(FigureId id) {
  ExperimentSpec s;
  s.figure = id;
  ScenarioConfig& sc = s.scenario;
  auto dims = [&](int m, int d, int e, int n) { sc.dims = {m, d, e, n}; };
  auto range = [](double a, double b, double step) {
    std::vector<double> v;
    for (double x = a; x <= b + 1e-9; x += step) v.push_back(x);
    return v;
  };
  switch (id) {
    case FigureId::Fig2RateVsPower:
      s.sweep_param = "power_dbm";
      s.sweep_values = range(20, 40, 5);
      s.baselines = {Baseline::Optimized, Baseline::ZeroPhase, Baseline::NoIrs};
      break;
    case FigureId::Fig3RateVsNE:
      dims(4, 3, 3, 6);
      s.sweep_param = "n";
      s.sweep_values = {2, 4, 6, 8};
      s.baselines = {Baseline::Optimized, Baseline::ZeroPhase, Baseline::NoIrs};
      break;
    case FigureId::Fig4AnVsGamma:
      dims(4, 2, 4, 8);
      s.sweep_param = "gamma";
      s.sweep_values = range(1, 10, 1);
      s.baselines = {Baseline::Optimized, Baseline::NoAn};
      break;
    case FigureId::Fig5Tradeoff:
      dims(4, 2, 4, 8);
      sc.power_dbm = 30.0;
      sc.trials = 1;
      s.sweep_param = "gamma";
      s.sweep_values = range(1, 16, 1);
      s.baselines = {Baseline::Optimized};
      break;
    case FigureId::Fig6Blocked:
      dims(4, 2, 2, 8);
      s.sweep_param = "gamma";
      s.sweep_values = range(1, 8, 1);
      s.baselines = {Baseline::Optimized};
      break;
    case FigureId::Fig7AoConvergence:
      sc.trials = 1;
      s.baselines = {Baseline::Optimized};
      break;
    case FigureId::Fig8PowerminConvergence:
      dims(4, 2, 2, 8);
      sc.trials = 1;
      s.baselines = {Baseline::Optimized};
      break;
    case FigureId::Fig9MmVsObo:
      dims(4, 2, 2, 8);
      sc.trials = 1;
      s.baselines = {Baseline::Optimized};
      break;
    case FigureId::Fig10SaddleTrace:
      sc.trials = 1;
      s.baselines = {Baseline::ZeroPhase};
      break;
  }
  return s;
}

void set_parameter(ExperimentSpec& spec, const std::string& name, double value) {
  ScenarioConfig& sc = spec.scenario;
  auto count = [&](int& slot) {
    if (value != std::floor(value) || value < 1.0)
      throw Error(ErrorCode::InvalidArgument, name + " must be a positive integer");
    slot = static_cast<int>(value);
  };
  if (name == "power_dbm") sc.power_dbm = value;
  else if (name == "gamma") sc.qos_gamma = value;
  else if (name == "noise_dbm") sc.noise_dbm = value;
  else if (name == "m") count(sc.dims.m);
  else if (name == "d") count(sc.dims.d);
  else if (name == "e") count(sc.dims.e);
  else if (name == "n") count(sc.dims.n);
  else throw Error(ErrorCode::InvalidArgument, "unknown sweep parameter: " + name);
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, ExecPolicy policy) {
  spec.validate();
  const int trials = spec.scenario.trials;
  std::vector<std::vector<TrialRecord>> per_trial(static_cast<std::size_t>(trials));
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < trials; ++t) per_trial[static_cast<std::size_t>(t)] = run_trial(spec, t);
  } else {
    for (int t = 0; t < trials; ++t) per_trial[static_cast<std::size_t>(t)] = run_trial(spec, t);
  }

  std::vector<TrialRecord> rows;
  for (auto& v : per_trial)
    for (auto& r : v) rows.push_back(std::move(r));
  std::stable_sort(rows.begin(), rows.end(), row_less);
  std::vector<TrialRecord> means = mean_rows(spec, rows);
  rows.insert(rows.end(), means.begin(), means.end());
  return rows;
}

bool any_errors(const std::vector<TrialRecord>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const TrialRecord& r) { return !r.error.empty(); });
}

}  // namespace irs
