// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "irs/saddle.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace irs;
using testutil::code_of;

namespace {

// Random strictly feasible (R, N) for the problem.
SaddleState random_state(const SaddleProblem& prob, double t, std::mt19937_64& rng) {
  const int m = prob.maps.m;
  CMatrix r = oracle::random_pd(m, rng);
  r *= 0.6 * prob.p / r.trace().real();
  CMatrix n = oracle::random_matrix(prob.maps.e, prob.maps.d, rng);
  n *= 0.5 / std::max(1.0, n.operatorNorm());
  return make_state(prob, r, n, t);
}

double rel_err(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(1e-12, b.norm()); }

CMatrix scalar(double v) { return CMatrix::Constant(1, 1, cplx(v, 0.0)); }

double min_eig(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("BarrierConfig validation") {
  BarrierConfig c;
  CHECK_NOTHROW(c.validate());
  c.alpha = 0.6;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = {};
  c.mu = 1.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = {};
  c.t_max = c.t0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = {};
  c.max_polish = -1;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("NoiseCov layout") {
  CMatrix n(1, 2);
  n << cplx(0.1, 0.2), cplx(-0.3, 0.0);
  const NoiseCov k = NoiseCov::from_block(n, 2);
  CHECK(k.k.rows() == 3);
  CHECK(k.k(2, 0) == cplx(0.1, 0.2));
  CHECK(k.k(0, 2) == cplx(0.1, -0.2));
  CHECK(k.k(1, 1) == cplx(1.0, 0.0));
  CHECK(is_hermitian(k.k));
}

TEST_CASE("saddle and barrier objectives, scalar reduction") {
  const CMatrix h = scalar(1.0);
  const CMatrix h2 = scalar(0.0);
  const SaddleProblem prob = SaddleProblem::make(h, h2, 2.0);
  const SaddleState st = make_state(prob, scalar(0.5), CMatrix::Zero(1, 1), 10.0);
  CHECK(saddle_objective(st.r_cov.r, st.noise.k, prob.h, prob.h2) == doctest::Approx(std::log2(1.5)).epsilon(1e-14));
  const double expect = std::log2(1.5) + (std::log2(1.5) + std::log2(0.5)) / 10.0;
  CHECK(barrier_objective(st, prob.h, prob.h2, prob.p) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("barrier objective blows up at the power boundary and rejects infeasible points") {
  const SaddleProblem prob = SaddleProblem::make(scalar(1.0), scalar(0.0), 1.0);
  double prev = 1e300;
  for (double gap : {1e-2, 1e-4, 1e-8}) {
    const double v = barrier_objective(make_state(prob, scalar(1.0 - gap), CMatrix::Zero(1, 1), 1.0), prob.h, prob.h2, 1.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < -20.0);
  SaddleState bad = make_state(prob, scalar(0.5), CMatrix::Zero(1, 1), 1.0);
  bad.r_cov.r = scalar(1.5);
  CHECK(code_of([&] { barrier_objective(bad, prob.h, prob.h2, 1.0); }) == ErrorCode::InfeasiblePoint);
  bad.r_cov.r = scalar(-0.1);
  CHECK(code_of([&] { barrier_objective(bad, prob.h, prob.h2, 1.0); }) == ErrorCode::InfeasiblePoint);
}

TEST_CASE("barrier objective matches the eigenvalue re-derivation") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const int m = 1 + k % 3, d = 1 + (k / 3) % 3, e = 1 + (k / 2) % 3;
    const CMatrix h1 = oracle::random_matrix(d, m, rng);
    const CMatrix h2 = oracle::random_matrix(e, m, rng);
    const SaddleProblem prob = SaddleProblem::make(h1, h2, 3.0);
    const SaddleState st = random_state(prob, 7.0, rng);
    const double ref = oracle::barrier_objective(st.r_cov.r, st.noise.k, h1, h2, 3.0, 7.0);
    CHECK(std::abs(barrier_objective(st, prob.h, prob.h2, prob.p) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("residual and Hessian match central finite differences") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 12; ++k) {
    const int m = 1 + k % 3, d = 1 + (k / 3) % 3, e = 1 + (k / 2) % 3;
    const CMatrix h1 = oracle::random_matrix(d, m, rng);
    const CMatrix h2 = oracle::random_matrix(e, m, rng);
    const SaddleProblem prob = SaddleProblem::make(h1, h2, 2.0);
    const SaddleState st = random_state(prob, 5.0, rng);
    const KktSystem sys = kkt_system(st, prob.h, prob.h2, prob.p, prob.maps);
    CHECK(rel_err(sys.residual, oracle::fd_residual(prob, st, 1e-5)) <= 1e-5);
    CHECK(rel_err(sys.hessian, oracle::fd_hessian(prob, st, 1e-5)) <= 1e-4);
    CHECK((kkt_residual(st, prob.h, prob.h2, prob.p, prob.maps) - sys.residual).norm() <= 1e-12 * sys.residual.norm());
    CHECK(is_hermitian(sys.hessian));
  }
}

TEST_CASE("scalar analytic saddle is a fixed point") {
  const double g = 2.0, t = 50.0, p = 3.0;
  const double rho = oracle::scalar_barrier_root(g, t, p);
  const SaddleProblem prob = SaddleProblem::make(scalar(std::sqrt(g)), scalar(0.0), p);
  const SaddleState st = make_state(prob, scalar(rho), CMatrix::Zero(1, 1), t);
  CHECK(st.residual_norm <= 1e-8);
  BarrierConfig cfg;
  const SaddleState next = newton_iterate(st, prob, cfg);
  CHECK(std::abs(next.r_cov.r(0, 0).real() - rho) <= 1e-12);
  CHECK(next.noise.n_block.norm() <= 1e-12);
}

TEST_CASE("Newton converges quadratically near the scalar saddle") {
  const double g = 2.0, t = 50.0, p = 3.0;
  const double rho = oracle::scalar_barrier_root(g, t, p);
  const SaddleProblem prob = SaddleProblem::make(scalar(std::sqrt(g)), scalar(0.0), p);
  SaddleState st = make_state(prob, scalar(rho * (1.0 + 1e-3)), CMatrix::Constant(1, 1, cplx(1e-3, -1e-3)), t);
  for (int k = 0; k < 4; ++k) {
    const double before = st.residual_norm;
    st = newton_iterate(st, prob, {});
    CHECK(st.residual_norm <= std::max(5.0 * before * before, 1e-15));
  }
  CHECK(st.residual_norm <= 1e-12);
}

TEST_CASE("solve_saddle reaches the scalar barrier optimum") {
  BarrierConfig cfg;
  cfg.polish = false;
  cfg.t0 = 100.0;
  cfg.t_max = 200.0;
  const double g = 0.7, p = 4.0;
  const SaddleResult res = solve_saddle(scalar(std::sqrt(g)), scalar(0.0), p, cfg);
  CHECK(std::abs(res.r_opt.r(0, 0).real() - oracle::scalar_barrier_root(g, 200.0, p)) <= 1e-8);
  CHECK(res.trace.back().t == 200.0);
  CHECK(res.secrecy_rate == res.barrier_secrecy_rate);
}

TEST_CASE("Newton residual decreases on every step of a random solve") {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 5; ++k) {
    const CMatrix h1 = oracle::random_matrix(3, 3, rng);
    const CMatrix h2 = oracle::random_matrix(2, 3, rng, 0.7);
    const SaddleProblem prob = SaddleProblem::make(h1, h2, 5.0);
    SaddleState st = make_state(prob, (5.0 / 6.0) * CMatrix::Identity(3, 3), CMatrix::Zero(2, 3), 100.0);
    for (int it = 0; it < 20 && st.residual_norm > 1e-10; ++it) {
      const SaddleState next = newton_iterate(st, prob, {});
      CHECK(next.residual_norm < st.residual_norm);
      st = next;
    }
  }
}

TEST_CASE("Hessian blocks are definite along the iterates") {
  std::mt19937_64 rng(34);
  const CMatrix h1 = oracle::random_matrix(2, 3, rng);
  const CMatrix h2 = oracle::random_matrix(2, 3, rng);
  const SaddleProblem prob = SaddleProblem::make(h1, h2, 2.0);
  SaddleState st = make_state(prob, (1.0 / 3.0) * CMatrix::Identity(3, 3), CMatrix::Zero(2, 2), 100.0);
  const int nr = prob.maps.r_size();
  const int nn = prob.maps.n_size();
  for (int it = 0; it < 10 && st.residual_norm > 1e-9; ++it) {
    const KktSystem sys = kkt_system(st, prob.h, prob.h2, prob.p, prob.maps);
    CHECK(min_eig(-sys.hessian.topLeftCorner(nr, nr)) > 0.0);
    CHECK(min_eig(sys.hessian.bottomRightCorner(nn, nn)) > 0.0);
    st = newton_iterate(st, prob, {});
  }
}

TEST_CASE("solve_saddle with no eavesdropper matches water-filling") {
  std::mt19937_64 rng(35);
  for (int k = 0; k < 6; ++k) {
    const int m = 2 + k % 2;
    const CMatrix h1 = oracle::random_matrix(2, m, rng);
    const CMatrix h2 = CMatrix::Zero(2, m);
    const SaddleResult res = solve_saddle(h1, h2, 4.0);
    CHECK(std::abs(res.secrecy_rate - water_filling(h1, 4.0).capacity_bits) <= 1e-4);
  }
}

TEST_CASE("identical channels give zero secrecy") {
  std::mt19937_64 rng(36);
  for (int k = 0; k < 4; ++k) {
    const CMatrix h = oracle::random_matrix(2, 3, rng);
    const SaddleResult res = solve_saddle(h, h, 3.0);
    CHECK(res.secrecy_rate <= 1e-6);
    CHECK(res.secrecy_rate >= -1e-9);
  }
}

TEST_CASE("single-antenna receivers match the generalized-eigenvalue capacity") {
  std::mt19937_64 rng(37);
  for (int k = 0; k < 6; ++k) {
    const CMatrix h1 = oracle::random_matrix(1, 3, rng);
    const CMatrix h2 = oracle::random_matrix(1, 3, rng);
    const SaddleResult res = solve_saddle(h1, h2, 5.0);
    CHECK(std::abs(res.secrecy_rate - oracle::misome_capacity(h1, h2, 5.0)) <= 1e-4);
  }
}

TEST_CASE("2x2x2 instance matches the restarted projected-gradient oracle") {
  std::mt19937_64 rng(38);
  for (int k = 0; k < 3; ++k) {
    const CMatrix h1 = oracle::random_matrix(2, 2, rng);
    const CMatrix h2 = oracle::random_matrix(2, 2, rng, 0.8);
    const SaddleResult res = solve_saddle(h1, h2, 3.0);
    CHECK(std::abs(res.secrecy_rate - oracle::pg_secrecy_oracle(h1, h2, 3.0, 5, rng)) <= 1e-3);
  }
}

TEST_CASE("solve_saddle output properties and trace") {
  std::mt19937_64 rng(39);
  const CMatrix h1 = oracle::random_matrix(3, 4, rng);
  const CMatrix h2 = oracle::random_matrix(3, 4, rng);
  const SaddleResult res = solve_saddle(h1, h2, 6.0);
  CHECK(res.r_opt.power() <= 6.0 + 1e-6);
  CHECK(min_eig(res.r_opt.r) >= -1e-8);
  CHECK(res.secrecy_rate >= res.barrier_secrecy_rate - 1e-12);
  CHECK(res.trace.front().newton_step == 0);
  CHECK(res.trace.back().newton_step == res.newton_steps);
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i].t >= res.trace[i - 1].t);
    if (res.trace[i].t == res.trace[i - 1].t) CHECK(res.trace[i].residual_norm < res.trace[i - 1].residual_norm);
  }
  const double gap0 = std::abs(res.trace.front().f - res.trace.front().c);
  const double gap1 = std::abs(res.trace.back().f - res.trace.back().c);
  CHECK(gap1 <= 10.0 * gap0);

  std::ostringstream os;
  write_saddle_trace(os, res.trace);
  const std::string s = os.str();
  CHECK(s.rfind("t,newton_step,residual_norm,f,c\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(res.trace.size()) + 1);
}

TEST_CASE("solve_saddle error paths") {
  CHECK(code_of([] { solve_saddle(CMatrix::Ones(1, 2), CMatrix::Ones(1, 3), 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { solve_saddle(CMatrix::Ones(1, 2), CMatrix::Ones(1, 2), 0.0); }) == ErrorCode::InvalidArgument);
  BarrierConfig tight;
  tight.max_newton = 1;
  std::mt19937_64 rng(40);
  const CMatrix h1 = oracle::random_matrix(2, 2, rng);
  const CMatrix h2 = oracle::random_matrix(2, 2, rng);
  CHECK(code_of([&] { solve_saddle(h1, h2, 2.0, tight); }) == ErrorCode::IterationCap);
}

TEST_CASE("project_trace_psd") {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  a(2, 2) = -2.0;
  const CMatrix p = project_trace_psd(a, 2.0);
  CHECK(std::abs(p(0, 0) - 2.0) <= 1e-12);
  CHECK(std::abs(p(1, 1)) <= 1e-12);
  CHECK(std::abs(p(2, 2)) <= 1e-12);
  const CMatrix q = project_trace_psd(a, 10.0);
  CHECK(std::abs(q(0, 0) - 3.0) <= 1e-12);
  CHECK(std::abs(q(1, 1) - 1.0) <= 1e-12);

  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k) {
    const CMatrix x = 3.0 * oracle::random_hermitian(4, rng);
    const CMatrix y = project_trace_psd(x, 1.5);
    CHECK(y.trace().real() <= 1.5 + 1e-10);
    CHECK(min_eig(y) >= -1e-12);
    // Idempotent, and closer to x than a few feasible alternatives.
    CHECK((project_trace_psd(y, 1.5) - y).norm() <= 1e-10);
    const CMatrix alt = project_trace_psd(oracle::random_hermitian(4, rng), 1.5);
    CHECK((x - y).norm() <= (x - alt).norm() + 1e-12);
  }
}

TEST_CASE("polish never lowers the secrecy rate") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 10; ++k) {
    const CMatrix h1 = oracle::random_matrix(2, 3, rng);
    const CMatrix h2 = oracle::random_matrix(3, 3, rng);
    const CMatrix r0 = project_trace_psd(oracle::random_hermitian(3, rng), 2.0);
    const CMatrix r1 = polish_secrecy_covariance(h1, h2, r0, 2.0);
    CHECK(link_rate(h1, r1) - link_rate(h2, r1) >= link_rate(h1, r0) - link_rate(h2, r0) - 1e-12);
    CHECK(r1.trace().real() <= 2.0 + 1e-10);
  }
}
