// SPDX-License-Identifier: Apache-2.0
#include "irs/channel.hpp"

#include <cmath>
#include <string>

namespace irs {

void Dims::validate() const {
  if (m < 1 || d < 1 || e < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "all dimensions must be >= 1");
}

Dims ChannelSet::dims() const {
  return {static_cast<int>(h_ab.cols()), static_cast<int>(h_ab.rows()), static_cast<int>(h_ae.rows()),
          static_cast<int>(h_ai.rows())};
}

void ChannelSet::validate() const {
  const Dims k = dims();
  k.validate();
  auto shape = [](const CMatrix& a, Eigen::Index r, Eigen::Index c, const char* name) {
    if (a.rows() != r || a.cols() != c) throw Error(ErrorCode::InvalidArgument, std::string(name) + " has wrong shape");
    require_finite(a, name);
  };
  shape(h_ab, k.d, k.m, "h_ab");
  shape(h_ae, k.e, k.m, "h_ae");
  shape(h_ai, k.n, k.m, "h_ai");
  shape(h_ib, k.d, k.n, "h_ib");
  shape(h_ie, k.e, k.n, "h_ie");
}

ChannelSet ChannelSet::blocked_direct() const {
  ChannelSet out = *this;
  out.h_ab.setZero();
  out.h_ae.setZero();
  return out;
}

PhaseShift::PhaseShift(CVector q) : q_(std::move(q)) {
  require_finite(q_, "phase shift");
  off_ = q_.size() > 0 && q_.cwiseAbs().maxCoeff() == 0.0;
  if (!off_) {
    for (Eigen::Index i = 0; i < q_.size(); ++i)
      if (std::abs(std::abs(q_(i)) - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidArgument, "phase shift coefficients must have unit modulus");
  }
}

PhaseShift PhaseShift::ones(int n) { return PhaseShift(CVector::Ones(n)); }

PhaseShift PhaseShift::zeros(int n) { return PhaseShift(CVector::Zero(n)); }

PhaseShift PhaseShift::from_angles(const std::vector<double>& theta) {
  CVector q(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t i = 0; i < theta.size(); ++i) q(static_cast<Eigen::Index>(i)) = std::polar(1.0, theta[i]);
  return PhaseShift(std::move(q));
}

void ScenarioConfig::validate() const {
  dims.validate();
  for (double v : {distances.alice_bob, distances.alice_irs, distances.alice_eve, distances.irs_bob, distances.irs_eve})
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "distances must be positive");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_loss_gain(double distance_m, double ref_db, double exponent) {
  if (!(distance_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "distance must be positive");
  return std::pow(10.0, ref_db / 10.0) * std::pow(distance_m, -exponent);
}

std::mt19937_64 trial_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

namespace {

CMatrix gaussian(Eigen::Index rows, Eigen::Index cols, double amplitude, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = amplitude * cplx(re, im);
    }
  return out;
}

}  // namespace

ChannelSet generate_channels(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const Dims& k = cfg.dims;
  const double noise_amp = std::sqrt(dbm_to_watts(cfg.noise_dbm));
  auto amp = [&](double dist) { return std::sqrt(path_loss_gain(dist, cfg.path_loss_ref_db, cfg.path_loss_exponent)); };
  ChannelSet ch;
  ch.h_ab = gaussian(k.d, k.m, amp(cfg.distances.alice_bob) / noise_amp, rng);
  ch.h_ae = gaussian(k.e, k.m, amp(cfg.distances.alice_eve) / noise_amp, rng);
  ch.h_ai = gaussian(k.n, k.m, amp(cfg.distances.alice_irs), rng);
  ch.h_ib = gaussian(k.d, k.n, amp(cfg.distances.irs_bob) / noise_amp, rng);
  ch.h_ie = gaussian(k.e, k.n, amp(cfg.distances.irs_eve) / noise_amp, rng);
  return ch;
}

EffectiveChannels effective_channels(const ChannelSet& ch, const PhaseShift& q) {
  if (q.size() != ch.h_ai.rows()) throw Error(ErrorCode::InvalidArgument, "phase shift length must equal n");
  const CMatrix reflected = q.q().asDiagonal() * ch.h_ai;
  return {ch.h_ab + ch.h_ib * reflected, ch.h_ae + ch.h_ie * reflected};
}

double link_rate(const CMatrix& h, const CMatrix& r) {
  const CMatrix s = CMatrix::Identity(h.rows(), h.rows()) + h * r * h.adjoint();
  return ln_det_pd(s) / kLn2;
}

Rates secrecy_rate(const EffectiveChannels& eff, const CMatrix& r) {
  Rates out;
  out.c_b = link_rate(eff.h1, r);
  out.c_e = link_rate(eff.h2, r);
  out.c_s = out.c_b - out.c_e;
  return out;
}

Rates secrecy_rate(const ChannelSet& ch, const PhaseShift& q, const TransmitCovariance& r) {
  return secrecy_rate(effective_channels(ch, q), r.r);
}

}  // namespace irs
