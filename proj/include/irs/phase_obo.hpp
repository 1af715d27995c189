// SPDX-License-Identifier: Apache-2.0
//
// Element-wise (one-by-one) phase optimization for fixed R.
//
// With every coefficient except q_i frozen, the Bob covariance factors as
//   I + H1 R H1^H = A_i + q_i B_i + conj(q_i) B_i^H,
// where B_i has rank <= 1. Hence
//   |I + q A^-1 B + q* A^-1 B^H| = c + 2 Re{q lambda},  lambda = tr(A^-1 B),
// and likewise for Eve with (C_i, D_i). Each single-element problem therefore
// reduces to a ratio of two affine functions of (cos theta, sin theta).
#pragma once

#include <vector>

#include "irs/channel.hpp"

namespace irs {

struct OboElementData {
  CMatrix a_i;  // d x d
  CMatrix b_i;  // d x d
  CMatrix c_i;  // e x e
  CMatrix d_i;  // e x e
  cplx lam_bar{0.0, 0.0};
  cplx lam_tilde{0.0, 0.0};
  double c_bar = 1.0;
  double c_tilde = 1.0;
};

enum class OboMode { Wiretap, BobOnly };

enum class OboCase { None = 1, BobOnly = 2, EveOnly = 3, Both = 4 };

/// R whitened into the channels: H_XY U_R Sigma_R^{1/2}.
struct WhitenedChannels {
  CMatrix h_ab;  // d x m
  CMatrix h_ae;  // e x m
  CMatrix h_ai;  // n x m; row j is t_j^H
  CMatrix h_ib;  // d x n; column j is r_j
  CMatrix h_ie;  // e x n; column j is s_j

  static WhitenedChannels make(const ChannelSet& ch, const TransmitCovariance& r);
};

OboElementData element_data(int i, const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch);
OboElementData element_data(int i, const CVector& q, const WhitenedChannels& w);

OboCase classify(const OboElementData& data);

/// Closed-form maximizer of log2(c_bar + 2Re{q lam_bar}) - log2(c_tilde + 2Re{q lam_tilde})
/// over |q| = 1. `incumbent` is returned when neither trace depends on q.
cplx optimize_element(const OboElementData& data, cplx incumbent);

/// Objective of the single-element problem at q.
double element_objective(const OboElementData& data, cplx q);

/// Dinkelbach function g(u) = c_bar - u c_tilde + 2|lam_bar - u lam_tilde|.
double dinkelbach_value(const OboElementData& data, double u);

struct OboSweepResult {
  PhaseShift q;
  /// Element objective before and after each update, in index order.
  std::vector<double> before;
  std::vector<double> after;
};

OboSweepResult obo_sweep_traced(const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch, OboMode mode);

/// One pass over q_1..q_n; C_s (or C_B in BobOnly mode) is non-decreasing.
PhaseShift obo_sweep(const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch, OboMode mode);

}  // namespace irs
