// SPDX-License-Identifier: Apache-2.0
#include "irs/schemes.hpp"

#include <cmath>

#include "irs/phase_mm.hpp"
#include "irs/phase_obo.hpp"

namespace irs {

void AoConfig::validate() const {
  if (!(eps_outer > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_outer must be positive");
  if (max_outer < 1) throw Error(ErrorCode::InvalidArgument, "max_outer must be at least 1");
  if (!(power_budget > 0.0)) throw Error(ErrorCode::InvalidArgument, "power_budget must be positive");
  if (!(init_power > 0.0)) throw Error(ErrorCode::InvalidArgument, "init_power must be positive");
  if (!(mm_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "mm_tol must be positive");
  if (!(bisection_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "bisection_tol must be positive");
  barrier.validate();
}

namespace {

// Relative change test; the absolute floor lets an all-zero objective converge.
bool settled(double now, double before, double eps) {
  return std::abs(now - before) <= eps * std::abs(before) + 1e-12;
}

}  // namespace

AoResult fixed_phase_secrecy(const ChannelSet& ch, const PhaseShift& q, double p, const BarrierConfig& cfg) {
  const EffectiveChannels eff = effective_channels(ch, q);
  const SaddleResult s = solve_saddle(eff.h1, eff.h2, p, cfg);
  AoResult out;
  out.r = s.r_opt;
  out.q = q;
  out.rates = secrecy_rate(eff, s.r_opt.r);
  out.iterations = s.newton_steps;
  out.trace.push_back(out.rates);
  return out;
}

AoResult ao_full_csi(const ChannelSet& ch, double p, const AoConfig& cfg) {
  cfg.validate();
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "transmit power must be positive");
  AoResult out = fixed_phase_secrecy(ch, PhaseShift::ones(static_cast<int>(ch.h_ai.rows())), p, cfg.barrier);
  out.iterations = 0;
  double c1 = out.rates.c_s;

  for (int it = 1; it <= cfg.max_outer; ++it) {
    const PhaseShift q = obo_sweep(out.q, out.r, ch, OboMode::Wiretap);
    const EffectiveChannels eff = effective_channels(ch, q);
    const SaddleResult s = solve_saddle(eff.h1, eff.h2, p, cfg.barrier);
    const Rates fresh = secrecy_rate(eff, s.r_opt.r);
    const Rates kept = secrecy_rate(eff, out.r.r);
    // The saddle solve is accurate to the barrier gap only; never step back.
    if (fresh.c_s >= kept.c_s) {
      out.r = s.r_opt;
      out.rates = fresh;
    } else {
      out.rates = kept;
    }
    out.q = q;
    out.iterations = it;
    const double c2 = out.rates.c_s;
    out.trace.push_back(out.rates);
    if (settled(c2, c1, cfg.eps_outer)) return out;
    c1 = c2;
  }
  throw Error(ErrorCode::IterationCap, "alternating optimization hit max_outer");
}

MinPowerResult min_power_given_q(const CMatrix& h1, double gamma, double power_cap, double rel_tol) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (!(power_cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "power cap must be positive");
  auto capacity = [&](double p) { return water_filling(h1, p).capacity_bits; };
  if (capacity(power_cap) < gamma)
    throw Error(ErrorCode::InfeasibleQoS, "QoS target not reachable within the power cap");

  double lo = 0.0;
  double hi = std::min(1.0, power_cap);
  while (capacity(hi) < gamma) {
    lo = hi;
    hi = std::min(2.0 * hi, power_cap);
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (capacity(mid) >= gamma) hi = mid; else lo = mid;
  }
  MinPowerResult out;
  out.r = water_filling(h1, hi).covariance;
  out.p_min = hi;
  return out;
}

PowerMinResult ao_power_min(const ChannelSet& ch, double gamma, const AoConfig& cfg) {
  cfg.validate();
  ch.validate();
  const int n = static_cast<int>(ch.h_ai.rows());
  const bool mm = cfg.phase_method == PhaseMethod::Mm;
  if (mm && (ch.h_ab.cwiseAbs().maxCoeff() != 0.0 || ch.h_ae.cwiseAbs().maxCoeff() != 0.0))
    throw Error(ErrorCode::InvalidArgument, "the MM pipeline needs blocked direct links");

  PowerMinResult out;
  out.q_opt = PhaseShift::ones(n);
  double p0 = 0.0;
  if (mm) {
    const int m = static_cast<int>(ch.h_ab.cols());
    out.r_opt = {cfg.init_power / m * CMatrix::Identity(m, m), cfg.power_budget};
    out.p_min = cfg.init_power;
    p0 = cfg.init_power;
  } else {
    const MinPowerResult first =
        min_power_given_q(effective_channels(ch, out.q_opt).h1, gamma, cfg.power_budget, cfg.bisection_tol);
    out.r_opt = first.r;
    out.p_min = first.p_min;
    out.power_trace.push_back(first.p_min);
    p0 = first.p_min;
  }

  for (int it = 1; it <= cfg.max_outer; ++it) {
    PhaseShift q = mm ? mm_solve(out.r_opt, ch, cfg.mm_tol, &out.q_opt).q
                      : obo_sweep(out.q_opt, out.r_opt, ch, OboMode::BobOnly);
    const MinPowerResult next =
        min_power_given_q(effective_channels(ch, q).h1, gamma, cfg.power_budget, cfg.bisection_tol);
    // The previous (R, Q) stays feasible after the phase update, so a larger
    // p here can only be bisection noise.
    if (next.p_min <= out.p_min || out.power_trace.empty()) {
      out.r_opt = next.r;
      out.q_opt = std::move(q);
      out.p_min = next.p_min;
    }
    out.iterations = it;
    out.power_trace.push_back(out.p_min);
    const double p1 = out.p_min;
    if (settled(p1, p0, cfg.eps_outer)) return out;
    p0 = p1;
  }
  throw Error(ErrorCode::IterationCap, "power minimization hit max_outer");
}

AnResult an_covariance(const CMatrix& h1, double p_total, double p_min) {
  const Eigen::Index m = h1.cols();
  if (m <= h1.rows()) throw Error(ErrorCode::NoNullSpace, "AN needs more transmit than receive antennas");
  if (p_total < p_min) throw Error(ErrorCode::InsufficientPower, "total power is below the QoS power");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(h1.adjoint() * h1));
  const RVector& ev = es.eigenvalues();
  const double cut = 1e-10 * std::max(ev.maxCoeff(), 0.0);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < m; ++i)
    if (ev(i) <= cut) null_cols.push_back(i);
  if (null_cols.empty()) throw Error(ErrorCode::NoNullSpace, "effective channel has full column rank");

  CMatrix u(m, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t k = 0; k < null_cols.size(); ++k) u.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(null_cols[k]);

  AnResult out;
  out.residual_power = p_total - p_min;
  out.r_an = hermitize(out.residual_power / static_cast<double>(null_cols.size()) * u * u.adjoint());
  return out;
}

double actual_secrecy_rate(double gamma, const CMatrix& r, const CMatrix& r_an, const CMatrix& h2) {
  return gamma - (link_rate(h2, r + r_an) - link_rate(h2, r_an));
}

}  // namespace irs
