// SPDX-License-Identifier: Apache-2.0
//
// Minorization-maximization over all IRS phases at once, for the case where
// the Alice-Bob direct link is blocked:
//
//   g(Q) = log2 |I + H_IB Q L Q^H H_IB^H|,   L = H_AI R H_AI^H.
//
// Three stacked lower bounds (log-det concavity, matrix-fractional convexity,
// and the lambda_max majorizer of a quadratic form) give a surrogate that is
// linear in q on the unit-modulus set; its maximizer is q_i = exp(j arg v_i).
// The surrogate is evaluated in the same units as g (bits).
#pragma once

#include "irs/channel.hpp"

namespace irs {

struct MmState {
  CVector q_tilde;
  CMatrix l_half;     // n x n
  CMatrix p_tilde;    // d x n
  CMatrix q_tilde_b;  // d x d
  CMatrix j_b;        // d x n
  CMatrix a1;         // d x n
  CMatrix a2;         // n x n
  CMatrix a3;         // n x d
  CVector a4_diag;    // n
  CMatrix z;          // n x n, Hermitian PSD
  double lam1_z = 0.0;
  /// Constant part of the surrogate, natural-log units.
  double const_terms = 0.0;
};

/// g(Q) for the blocked-link Bob channel, in bits.
double mm_objective(const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch);

/// Builds the surrogate around q_tilde. h_ab is ignored.
MmState build_mm_state(const PhaseShift& q_tilde, const TransmitCovariance& r, const ChannelSet& ch);

/// Surrogate lower bound g~(q, q_tilde), bits. Equals g at q = q_tilde.
double surrogate_value(const PhaseShift& q, const MmState& state);

/// argmax over |q_i| = 1 of the surrogate; v_i = 0 keeps q_tilde_i.
PhaseShift mm_update(const MmState& state);

struct MmResult {
  PhaseShift q;
  int iterations = 0;
  std::vector<double> objective_trace;  // g(Q_k), bits
};

/// Iterates build/update from `start` (all ones by default) until the relative
/// surrogate change is <= tol. Throws IterationCap after `max_iterations`.
MmResult mm_solve(const TransmitCovariance& r, const ChannelSet& ch, double tol = 1e-4,
                  const PhaseShift* start = nullptr, int max_iterations = 500);

}  // namespace irs
