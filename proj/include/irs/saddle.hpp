// SPDX-License-Identifier: Apache-2.0
//
// Secrecy-capacity solver for a fixed IRS configuration.
//
// The wiretap problem  max_R log|I + H1 R H1^H| - log|I + H2 R H2^H|  is solved
// through its convex-concave max-min form over (R, K), where K is the joint
// Bob/Eve noise covariance [[I, N^H], [N, I]]. The inequality constraints are
// folded into a log barrier with weight 1/t, and for each t the stationarity
// residual r(z) = 0 is driven to zero by Newton steps on the stacked parameter
// vector z = [d_r^T vec(R); d_n^T vec(K - I)], with a backtracking line search
// on ||r(z)||. t grows geometrically from t0 to t_max.
//
// All objective values are in bits; residuals and Hessians carry the same
// 1/ln 2 scale so that the residual is the exact derivative of the objective.
#pragma once

#include <iosfwd>
#include <vector>

#include "irs/channel.hpp"
#include "irs/numerics.hpp"

namespace irs {

struct BarrierConfig {
  double alpha = 0.3;
  double beta = 0.5;
  double mu = 5.0;
  double t0 = 1e2;
  double t_max = 1e5;
  double eps1 = 1e-8;
  int max_newton = 200;
  int max_backtrack = 60;
  /// Finish with projected-gradient ascent on C(R) from the barrier iterate.
  bool polish = true;
  int max_polish = 5000;

  void validate() const;
};

struct NoiseCov {
  CMatrix k;        // (d+e) x (d+e)
  CMatrix n_block;  // e x d

  static NoiseCov from_block(const CMatrix& n_block, int d);
};

struct SaddleState {
  TransmitCovariance r_cov;
  NoiseCov noise;
  CVector z;
  double residual_norm = 0.0;
  double t = 1.0;
};

/// Fixed data of one saddle problem.
struct SaddleProblem {
  CMatrix h;   // [H1; H2], (d+e) x m
  CMatrix h2;  // e x m
  int d = 0;
  double p = 0.0;
  DuplicationMaps maps;

  static SaddleProblem make(const CMatrix& h1, const CMatrix& h2, double p);
};

/// Builds a state (z and residual norm included) from R and the block N.
SaddleState make_state(const SaddleProblem& prob, const CMatrix& r, const CMatrix& n_block, double t);

/// Unbarriered saddle objective f(R, K) in bits.
double saddle_objective(const CMatrix& r, const CMatrix& k, const CMatrix& h, const CMatrix& h2);

/// f(R,K) + t^-1 log2(p - tr R) + t^-1 log2|R| - t^-1 log2|K|.
/// Throws InfeasiblePoint when R, K or p - tr R leave the interior.
double barrier_objective(const SaddleState& state, const CMatrix& h, const CMatrix& h2, double p);

struct KktSystem {
  CVector residual;
  CMatrix hessian;
};

/// Residual [grad_{r*} f_t; grad_{n*} f_t] and its Jacobian T (Hermitian).
KktSystem kkt_system(const SaddleState& state, const CMatrix& h, const CMatrix& h2, double p,
                     const DuplicationMaps& maps);
CVector kkt_residual(const SaddleState& state, const CMatrix& h, const CMatrix& h2, double p,
                     const DuplicationMaps& maps);

/// One damped Newton step: solves T dz = -r, then backtracks s <- beta s from
/// s = 1 until ||r(z + s dz)|| <= (1 - alpha s)||r(z)|| (and strictly below
/// ||r(z)||) at a strictly feasible point. A state with ||r|| <= 1e-14 is
/// returned unchanged. Throws LineSearchStalled after max_backtrack halvings.
SaddleState newton_iterate(const SaddleState& state, const SaddleProblem& prob, const BarrierConfig& cfg);

struct SaddleTraceRow {
  double t = 0.0;
  int newton_step = 0;
  double residual_norm = 0.0;
  double f = 0.0;
  double c = 0.0;
};

struct SaddleResult {
  TransmitCovariance r_opt;
  NoiseCov noise;
  double secrecy_rate = 0.0;
  /// C(R) at the last barrier iterate, before polishing.
  double barrier_secrecy_rate = 0.0;
  double f_value = 0.0;
  int newton_steps = 0;
  std::vector<SaddleTraceRow> trace;
};

/// Euclidean projection of a Hermitian matrix onto {R >= 0, tr R <= p}.
CMatrix project_trace_psd(const CMatrix& a, double p);

/// Projected-gradient ascent on C(R) = log2|I + H1 R H1^H| - log2|I + H2 R H2^H|
/// with Armijo backtracking. Starts from the projection of `r`; C never decreases.
///
/// In directions where Eve's channel dominates, f(., K*) is flat at the
/// optimal K*, so the barrier alone sets the power there and C(R) can trail
/// the saddle value. This pass removes that power.
CMatrix polish_secrecy_covariance(const CMatrix& h1, const CMatrix& h2, const CMatrix& r, double p,
                                  int max_iterations = 5000);

/// Starts from R0 = p/(2m) I, K0 = I. A stage also ends when the line search
/// stalls with the residual already below sqrt(eps1).
SaddleResult solve_saddle(const CMatrix& h1, const CMatrix& h2, double p, const BarrierConfig& cfg = {});

/// CSV with header t,newton_step,residual_norm,f,c
void write_saddle_trace(std::ostream& os, const std::vector<SaddleTraceRow>& trace);

}  // namespace irs
