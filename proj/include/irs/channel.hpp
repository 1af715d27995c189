// SPDX-License-Identifier: Apache-2.0
//
// Alice/Bob/Eve/IRS channel realizations, effective channels and rates.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "irs/numerics.hpp"

namespace irs {

struct Dims {
  int m = 4;  // Alice antennas
  int d = 4;  // Bob antennas
  int e = 4;  // Eve antennas
  int n = 6;  // IRS elements

  void validate() const;
};

struct ChannelSet {
  CMatrix h_ab;  // d x m
  CMatrix h_ae;  // e x m
  CMatrix h_ai;  // n x m
  CMatrix h_ib;  // d x n
  CMatrix h_ie;  // e x n

  Dims dims() const;
  void validate() const;
  /// Same channels with both direct links removed.
  ChannelSet blocked_direct() const;
};

/// Reflection coefficients of the IRS. Either unit-modulus, or all zero for
/// the "no IRS" baseline.
class PhaseShift {
 public:
  PhaseShift() = default;
  explicit PhaseShift(CVector q);

  static PhaseShift ones(int n);
  static PhaseShift zeros(int n);
  static PhaseShift from_angles(const std::vector<double>& theta);

  const CVector& q() const { return q_; }
  int size() const { return static_cast<int>(q_.size()); }
  bool is_off() const { return off_; }
  cplx operator[](int i) const { return q_(i); }

 private:
  CVector q_;
  bool off_ = false;
};

struct Distances {
  double alice_bob = 80.0;
  double alice_irs = 30.0;
  double alice_eve = 80.0;
  double irs_bob = 40.0;
  double irs_eve = 40.0;
};

struct ScenarioConfig {
  Dims dims;
  Distances distances;
  double path_loss_ref_db = -30.0;
  double path_loss_exponent = 3.0;
  double power_dbm = 35.0;
  /// Receiver noise power. 30 dBm (1 W) reproduces a literal unit-noise reading.
  double noise_dbm = -75.0;
  double qos_gamma = 3.0;
  int trials = 100;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

double dbm_to_watts(double dbm);

/// Large-scale power gain 10^(ref_db/10) * distance^-exponent.
double path_loss_gain(double distance_m, double ref_db, double exponent);

/// Generator for one trial; trial seeds are rng_seed + trial index.
std::mt19937_64 trial_rng(std::uint64_t seed);

/// Draws one realization. Receiver-side links (into Bob or Eve) are divided
/// by the noise amplitude so that all rate expressions use unit noise.
ChannelSet generate_channels(const ScenarioConfig& cfg, std::mt19937_64& rng);

struct EffectiveChannels {
  CMatrix h1;  // d x m, Bob
  CMatrix h2;  // e x m, Eve
};

EffectiveChannels effective_channels(const ChannelSet& ch, const PhaseShift& q);

struct Rates {
  double c_b = 0.0;
  double c_e = 0.0;
  double c_s = 0.0;
};

Rates secrecy_rate(const ChannelSet& ch, const PhaseShift& q, const TransmitCovariance& r);
Rates secrecy_rate(const EffectiveChannels& eff, const CMatrix& r);

/// log2 |I + h r h^H|
double link_rate(const CMatrix& h, const CMatrix& r);

}  // namespace irs
