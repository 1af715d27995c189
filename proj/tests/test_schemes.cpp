// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "irs/schemes.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace irs;
using testutil::code_of;

namespace {

ChannelSet random_set(const Dims& k, std::mt19937_64& rng, double reflect = 1.0) {
  ChannelSet ch;
  ch.h_ab = oracle::random_matrix(k.d, k.m, rng);
  ch.h_ae = oracle::random_matrix(k.e, k.m, rng, 0.8);
  ch.h_ai = oracle::random_matrix(k.n, k.m, rng, reflect);
  ch.h_ib = oracle::random_matrix(k.d, k.n, rng, reflect);
  ch.h_ie = oracle::random_matrix(k.e, k.n, rng, reflect);
  return ch;
}

CMatrix scalar(double v) { return CMatrix::Constant(1, 1, cplx(v, 0.0)); }

}  // namespace

TEST_CASE("AoConfig validation") {
  AoConfig c;
  CHECK_NOTHROW(c.validate());
  c.eps_outer = 0.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = {};
  c.max_outer = 0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = {};
  c.barrier.beta = 1.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("min_power_given_q scalar cases") {
  const MinPowerResult one = min_power_given_q(scalar(1.0), 1.0);
  CHECK(one.p_min == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(one.r.r(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
  const MinPowerResult two = min_power_given_q(scalar(2.0), 2.0);
  CHECK(two.p_min == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("min_power_given_q matches a power grid scan") {
  std::mt19937_64 rng(91);
  for (int k = 0; k < 5; ++k) {
    const CMatrix h = oracle::random_matrix(2, 4, rng);
    const MinPowerResult res = min_power_given_q(h, 3.0);
    CHECK(std::abs(res.p_min - oracle::power_grid_scan(h, 3.0)) <= 1e-3 * std::max(1.0, res.p_min));
    CHECK(std::abs(link_rate(h, res.r.r) - 3.0) <= 1e-4);
    CHECK(res.r.power() == doctest::Approx(res.p_min).epsilon(1e-9));
  }
}

TEST_CASE("min_power_given_q error paths") {
  CHECK(code_of([] { min_power_given_q(scalar(1.0), 30.0, 10.0); }) == ErrorCode::InfeasibleQoS);
  CHECK(code_of([] { min_power_given_q(CMatrix::Zero(2, 2), 1.0); }) == ErrorCode::ZeroChannel);
  CHECK(code_of([] { min_power_given_q(scalar(1.0), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("an_covariance examples") {
  CMatrix h(1, 2);
  h << 1.0, 0.0;
  const AnResult a = an_covariance(h, 3.0, 2.0);
  CHECK(std::abs(a.r_an(0, 0)) <= 1e-15);
  CHECK(std::abs(a.r_an(1, 1) - 1.0) <= 1e-15);
  CHECK(std::abs(a.r_an(0, 1)) <= 1e-15);
  CHECK(a.residual_power == 1.0);
  CHECK(an_covariance(h, 2.0, 2.0).r_an.norm() == 0.0);
}

TEST_CASE("an_covariance lies in the null space with the leftover power") {
  std::mt19937_64 rng(92);
  for (int k = 0; k < 20; ++k) {
    const CMatrix h1 = oracle::random_matrix(2, 4, rng);
    const AnResult a = an_covariance(h1, 5.0, 1.5);
    CHECK((h1 * a.r_an).norm() <= 1e-8 * std::max(1.0, a.r_an.norm()));
    CHECK((h1 * a.r_an * h1.adjoint()).norm() <= 1e-8 * a.r_an.norm() * h1.squaredNorm());
    CHECK(std::abs(a.r_an.trace().real() - 3.5) <= 1e-9);
    CHECK(std::abs(a.residual_power - 3.5) <= 1e-15);
    // Bob's rate ignores the AN.
    const CMatrix b = oracle::random_matrix(4, 4, rng);
    const CMatrix r = b * b.adjoint();
    CHECK(std::abs(link_rate(h1, r + a.r_an) - link_rate(h1, a.r_an) - link_rate(h1, r)) <= 1e-8);
  }
}

TEST_CASE("an_covariance error paths") {
  std::mt19937_64 rng(93);
  CHECK(code_of([&] { an_covariance(oracle::random_matrix(2, 2, rng), 2.0, 1.0); }) == ErrorCode::NoNullSpace);
  CHECK(code_of([&] { an_covariance(oracle::random_matrix(2, 4, rng), 1.0, 2.0); }) == ErrorCode::InsufficientPower);
}

TEST_CASE("actual_secrecy_rate examples and AN monotonicity") {
  CHECK(actual_secrecy_rate(2.5, scalar(1.0), scalar(0.3), scalar(0.0)) == doctest::Approx(2.5));
  CHECK(actual_secrecy_rate(1.0, scalar(1.0), scalar(0.0), scalar(1.0)) == doctest::Approx(0.0).scale(1.0));

  std::mt19937_64 rng(94);
  for (int k = 0; k < 20; ++k) {
    const CMatrix h2 = oracle::random_matrix(3, 4, rng);
    const CMatrix b = oracle::random_matrix(4, 2, rng);
    const CMatrix r = b * b.adjoint();
    const CMatrix c = oracle::random_matrix(4, 2, rng);
    const CMatrix an = c * c.adjoint();
    double prev = -1e300;
    for (double s : {0.0, 0.1, 0.5, 1.0, 4.0, 20.0}) {
      const double v = actual_secrecy_rate(3.0, r, s * an, h2);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("AO with silent reflecting links stops after one iteration") {
  std::mt19937_64 rng(95);
  ChannelSet ch = random_set({3, 2, 2, 4}, rng);
  ch.h_ib.setZero();
  ch.h_ie.setZero();
  const AoResult res = ao_full_csi(ch, 4.0);
  CHECK(res.iterations == 1);
  const SaddleResult ref = solve_saddle(ch.h_ab, ch.h_ae, 4.0);
  CHECK(std::abs(res.rates.c_s - ref.secrecy_rate) <= 1e-9);
  CHECK(res.trace.size() == 2);
}

TEST_CASE("AO trace is non-decreasing and beats its starting point") {
  std::mt19937_64 rng(96);
  for (int k = 0; k < 4; ++k) {
    const ChannelSet ch = random_set({3, 2, 2, 4}, rng, 0.8);
    const AoResult res = ao_full_csi(ch, 4.0);
    REQUIRE(res.trace.size() == static_cast<std::size_t>(res.iterations) + 1);
    for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i].c_s >= res.trace[i - 1].c_s - 1e-9);
    const AoResult zero = fixed_phase_secrecy(ch, PhaseShift::ones(4), 4.0);
    CHECK(res.rates.c_s >= zero.rates.c_s - 1e-9);
    const Rates check = secrecy_rate(ch, res.q, res.r);
    CHECK(std::abs(check.c_s - res.rates.c_s) <= 1e-12);
    CHECK(res.r.power() <= 4.0 + 1e-6);
  }
}

TEST_CASE("AO error paths") {
  std::mt19937_64 rng(97);
  const ChannelSet ch = random_set({2, 2, 2, 3}, rng);
  CHECK(code_of([&] { ao_full_csi(ch, 0.0); }) == ErrorCode::InvalidArgument);
  AoConfig cfg;
  cfg.max_outer = 1;
  cfg.eps_outer = 1e-15;
  CHECK(code_of([&] { ao_full_csi(ch, 4.0, cfg); }) == ErrorCode::IterationCap);
}

TEST_CASE("power minimization with silent reflecting links") {
  std::mt19937_64 rng(98);
  ChannelSet ch = random_set({3, 2, 2, 4}, rng);
  ch.h_ai.setZero();
  const PowerMinResult res = ao_power_min(ch, 2.0);
  CHECK(res.iterations == 1);
  CHECK(res.p_min == doctest::Approx(min_power_given_q(ch.h_ab, 2.0).p_min).epsilon(1e-12));
}

TEST_CASE("power minimization traces are monotone and meet the QoS with equality") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 5; ++k) {
    const ChannelSet ch = random_set({4, 2, 2, 6}, rng);
    const PowerMinResult res = ao_power_min(ch, 3.0);
    for (std::size_t i = 1; i < res.power_trace.size(); ++i) CHECK(res.power_trace[i] <= res.power_trace[i - 1]);
    CHECK(res.power_trace.back() == res.p_min);
    const double cb = link_rate(effective_channels(ch, res.q_opt).h1, res.r_opt.r);
    CHECK(std::abs(cb - 3.0) <= 1e-4);
    CHECK(res.p_min <= min_power_given_q(effective_channels(ch, PhaseShift::ones(6)).h1, 3.0).p_min);
  }
}

TEST_CASE("MM power minimization on blocked links") {
  std::mt19937_64 rng(100);
  for (int k = 0; k < 5; ++k) {
    const ChannelSet ch = random_set({4, 2, 2, 8}, rng).blocked_direct();
    AoConfig cfg;
    cfg.phase_method = PhaseMethod::Mm;
    const PowerMinResult mm = ao_power_min(ch, 2.0, cfg);
    for (std::size_t i = 1; i < mm.power_trace.size(); ++i) CHECK(mm.power_trace[i] <= mm.power_trace[i - 1]);
    const double cb = link_rate(effective_channels(ch, mm.q_opt).h1, mm.r_opt.r);
    CHECK(std::abs(cb - 2.0) <= 1e-4);
    CHECK(mm.power_trace.size() == static_cast<std::size_t>(mm.iterations));
  }
  AoConfig cfg;
  cfg.phase_method = PhaseMethod::Mm;
  const ChannelSet direct = random_set({4, 2, 2, 8}, rng);
  CHECK(code_of([&] { ao_power_min(direct, 2.0, cfg); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("power minimization reports infeasible QoS targets") {
  std::mt19937_64 rng(101);
  const ChannelSet ch = random_set({2, 2, 2, 3}, rng);
  AoConfig cfg;
  cfg.power_budget = 1.0;
  CHECK(code_of([&] { ao_power_min(ch, 40.0, cfg); }) == ErrorCode::InfeasibleQoS);
}

TEST_CASE("AN secrecy rate over a QoS grid rises and then falls") {
  std::mt19937_64 rng(102);
  const ChannelSet ch = random_set({4, 2, 4, 8}, rng);
  const double p = 20.0;
  AoConfig cfg;
  cfg.power_budget = p;
  std::vector<double> rates;
  bool infeasible = false;
  for (double gamma = 0.5; gamma <= 30.0; gamma += 0.1) {
    try {
      const PowerMinResult pm = ao_power_min(ch, gamma, cfg);
      const CMatrix h1 = effective_channels(ch, pm.q_opt).h1;
      const CMatrix h2 = effective_channels(ch, pm.q_opt).h2;
      const AnResult an = an_covariance(h1, p, pm.p_min);
      rates.push_back(actual_secrecy_rate(gamma, pm.r_opt.r, an.r_an, h2));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleQoS);
      infeasible = true;
      break;
    }
  }
  CHECK(infeasible);
  REQUIRE(rates.size() >= 3);
  const auto peak = std::max_element(rates.begin(), rates.end());
  CHECK(peak != rates.begin());
  CHECK(*peak > rates.back());
}
