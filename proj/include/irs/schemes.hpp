// SPDX-License-Identifier: Apache-2.0
//
// End-to-end pipelines built from the saddle solver and the two phase
// optimizers:
//
//   ao_full_csi    alternate OBO sweeps (wiretap objective) with the saddle
//                  solver until the secrecy rate settles.
//   ao_power_min   minimize tr(R) subject to a Bob rate of at least gamma,
//                  alternating a phase update (OBO on Bob's rate, or MM when
//                  the direct links are blocked) with water-filling bisection.
//   an_covariance  spend the leftover power on artificial noise in the null
//                  space of Bob's effective channel.
#pragma once

#include <vector>

#include "irs/channel.hpp"
#include "irs/saddle.hpp"

namespace irs {

enum class PhaseMethod { Obo, Mm };

struct AoConfig {
  double eps_outer = 1e-4;
  int max_outer = 500;
  BarrierConfig barrier;
  PhaseMethod phase_method = PhaseMethod::Obo;
  /// Upper bracket for the power bisection; QoS targets needing more are infeasible.
  double power_budget = 1e6;
  /// Total power used for the R = P I / m start of the MM pipeline.
  double init_power = 1.0;
  double mm_tol = 1e-4;
  double bisection_tol = 1e-12;

  void validate() const;
};

struct AoResult {
  TransmitCovariance r;
  PhaseShift q;
  Rates rates;
  int iterations = 0;
  /// Rates after initialization, then after every outer iteration.
  std::vector<Rates> trace;
};

AoResult ao_full_csi(const ChannelSet& ch, double p, const AoConfig& cfg = {});

/// Saddle solve for a fixed phase vector (zero-phase and no-IRS baselines).
AoResult fixed_phase_secrecy(const ChannelSet& ch, const PhaseShift& q, double p, const BarrierConfig& cfg = {});

struct MinPowerResult {
  TransmitCovariance r;
  double p_min = 0.0;
};

/// Smallest p whose water-filling capacity reaches gamma, by bisection.
/// Throws InfeasibleQoS when even p = power_cap falls short.
MinPowerResult min_power_given_q(const CMatrix& h1, double gamma, double power_cap = 1e6,
                                 double rel_tol = 1e-12);

struct PowerMinResult {
  TransmitCovariance r_opt;
  PhaseShift q_opt;
  double p_min = 0.0;
  int iterations = 0;
  /// tr(R) after initialization, then after every outer iteration.
  std::vector<double> power_trace;
};

PowerMinResult ao_power_min(const ChannelSet& ch, double gamma, const AoConfig& cfg = {});

struct AnResult {
  CMatrix r_an;
  double c_s_actual = 0.0;
  double residual_power = 0.0;
};

/// Equal-power AN over the null space of h1. c_s_actual is left at zero;
/// see actual_secrecy_rate.
AnResult an_covariance(const CMatrix& h1, double p_total, double p_min);

/// gamma - log2|I + h2 r h2^H (I + h2 r_an h2^H)^-1|
double actual_secrecy_rate(double gamma, const CMatrix& r, const CMatrix& r_an, const CMatrix& h2);

}  // namespace irs
