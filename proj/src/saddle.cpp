// SPDX-License-Identifier: Apache-2.0
#include "irs/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <optional>

namespace irs {

void BarrierConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 0.5)");
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must lie in (0, 1)");
  if (!(mu > 1.0)) throw Error(ErrorCode::InvalidArgument, "mu must exceed 1");
  if (!(t0 > 0.0 && t_max > t0)) throw Error(ErrorCode::InvalidArgument, "need 0 < t0 < t_max");
  if (!(eps1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps1 must be positive");
  if (max_newton < 1 || max_backtrack < 1) throw Error(ErrorCode::InvalidArgument, "iteration caps must be >= 1");
  if (max_polish < 0) throw Error(ErrorCode::InvalidArgument, "max_polish must be >= 0");
}

NoiseCov NoiseCov::from_block(const CMatrix& n_block, int d) {
  const Eigen::Index e = n_block.rows();
  NoiseCov out;
  out.n_block = n_block;
  out.k = CMatrix::Identity(d + e, d + e);
  out.k.bottomLeftCorner(e, d) = n_block;
  out.k.topRightCorner(d, e) = n_block.adjoint();
  return out;
}

SaddleProblem SaddleProblem::make(const CMatrix& h1, const CMatrix& h2, double p) {
  if (h1.cols() != h2.cols()) throw Error(ErrorCode::InvalidArgument, "h1 and h2 must share the transmit dimension");
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "power budget must be positive");
  require_finite(h1, "h1");
  require_finite(h2, "h2");
  SaddleProblem prob;
  prob.h.resize(h1.rows() + h2.rows(), h1.cols());
  prob.h << h1, h2;
  prob.h2 = h2;
  prob.d = static_cast<int>(h1.rows());
  prob.p = p;
  prob.maps = duplication_maps(static_cast<int>(h1.cols()), prob.d, static_cast<int>(h2.rows()));
  return prob;
}

namespace {

// Cholesky-based feasibility; returns the factorization when positive definite.
std::optional<Eigen::LLT<CMatrix>> try_llt(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  if ((llt.matrixLLT().diagonal().real().array() <= 0.0).any()) return std::nullopt;
  return llt;
}

bool strictly_feasible(const CMatrix& r, const CMatrix& k, double p) {
  return p - r.trace().real() > 0.0 && try_llt(r).has_value() && try_llt(k).has_value();
}

// Intermediates shared by the gradient and the Hessian (natural-log units).
struct Intermediates {
  CMatrix r_inv;
  CMatrix k_inv;
  CMatrix z1, z2, z3, z4;
  double slack = 0.0;
};

Intermediates intermediates(const CMatrix& r, const CMatrix& k, const CMatrix& h, const CMatrix& h2, double p) {
  Intermediates w;
  w.slack = p - r.trace().real();
  auto r_llt = try_llt(r);
  auto k_llt = try_llt(k);
  if (!(w.slack > 0.0) || !r_llt || !k_llt) throw Error(ErrorCode::InfeasiblePoint, "state left the barrier interior");
  const Eigen::Index m = r.rows();
  w.r_inv = hermitize(r_llt->solve(CMatrix::Identity(m, m)));
  w.k_inv = hermitize(k_llt->solve(CMatrix::Identity(k.rows(), k.rows())));
  const CMatrix s = hermitize(k + h * r * h.adjoint());
  Eigen::LLT<CMatrix> s_llt(s);
  w.z3 = hermitize(s_llt.solve(CMatrix::Identity(s.rows(), s.cols())));
  w.z4 = h.adjoint() * w.z3;
  // (I + H^H K^-1 H R)^-1 H^H K^-1 H == H^H (K + H R H^H)^-1 H
  w.z1 = hermitize(w.z4 * h);
  const CMatrix e_cov = CMatrix::Identity(h2.rows(), h2.rows()) + h2 * r * h2.adjoint();
  w.z2 = hermitize(h2.adjoint() * Eigen::LLT<CMatrix>(hermitize(e_cov)).solve(h2));
  return w;
}

// Entry (p, q) of A^T (x) B where p, q are column-major vec() indices of n x n matrices.
inline cplx kron_t(const CMatrix& a, const CMatrix& b, int p, int q, int n) {
  return a(q / n, p / n) * b(p % n, q % n);
}

CVector residual_from(const Intermediates& w, double t, const DuplicationMaps& maps) {
  const Eigen::Index m = w.r_inv.rows();
  const double inv_t = 1.0 / t;
  const CMatrix g_r = w.z1 - w.z2 + inv_t * w.r_inv - (inv_t / w.slack) * CMatrix::Identity(m, m);
  const CMatrix g_k = w.z3 - (1.0 + inv_t) * w.k_inv;
  CVector res(maps.r_size() + maps.n_size());
  res << maps.gather_r(g_r), maps.gather_n(g_k);
  return res / kLn2;
}

}  // namespace

SaddleState make_state(const SaddleProblem& prob, const CMatrix& r, const CMatrix& n_block, double t) {
  SaddleState st;
  st.r_cov = {hermitize(r), prob.p};
  st.noise = NoiseCov::from_block(n_block, prob.d);
  st.t = t;
  st.z.resize(prob.maps.r_size() + prob.maps.n_size());
  st.z << prob.maps.gather_r(st.r_cov.r),
      prob.maps.gather_n(st.noise.k - CMatrix::Identity(st.noise.k.rows(), st.noise.k.cols()));
  st.residual_norm = kkt_residual(st, prob.h, prob.h2, prob.p, prob.maps).norm();
  return st;
}

double saddle_objective(const CMatrix& r, const CMatrix& k, const CMatrix& h, const CMatrix& h2) {
  const double num = ln_det_pd(k + h * r * h.adjoint()) - ln_det_pd(k);
  const double den = ln_det_pd(CMatrix::Identity(h2.rows(), h2.rows()) + h2 * r * h2.adjoint());
  return (num - den) / kLn2;
}

double barrier_objective(const SaddleState& state, const CMatrix& h, const CMatrix& h2, double p) {
  const CMatrix& r = state.r_cov.r;
  const CMatrix& k = state.noise.k;
  const double slack = p - r.trace().real();
  if (!(slack > 0.0) || !try_llt(r) || !try_llt(k)) throw Error(ErrorCode::InfeasiblePoint, "barrier argument <= 0");
  const double inv_t = 1.0 / state.t;
  return saddle_objective(r, k, h, h2) + inv_t * (std::log2(slack) + (ln_det_pd(r) - ln_det_pd(k)) / kLn2);
}

CVector kkt_residual(const SaddleState& state, const CMatrix& h, const CMatrix& h2, double p,
                     const DuplicationMaps& maps) {
  return residual_from(intermediates(state.r_cov.r, state.noise.k, h, h2, p), state.t, maps);
}

KktSystem kkt_system(const SaddleState& state, const CMatrix& h, const CMatrix& h2, double p,
                     const DuplicationMaps& maps) {
  const Intermediates w = intermediates(state.r_cov.r, state.noise.k, h, h2, p);
  const double inv_t = 1.0 / state.t;
  const int m = maps.m;
  const int s = maps.d + maps.e;
  const int nr = maps.r_size();
  const int nn = maps.n_size();

  KktSystem out;
  out.residual = residual_from(w, state.t, maps);
  out.hessian.resize(nr + nn, nr + nn);

  const double trace_curv = inv_t / (w.slack * w.slack);
  for (int b = 0; b < nr; ++b) {
    const int q = maps.r_index[b];
    for (int a = 0; a < nr; ++a) {
      const int pp = maps.r_index[a];
      cplx v = kron_t(w.z1, w.z1, pp, q, m) - kron_t(w.z2, w.z2, pp, q, m) + inv_t * kron_t(w.r_inv, w.r_inv, pp, q, m);
      if (pp % m == pp / m && q % m == q / m) v += trace_curv;
      out.hessian(a, b) = -v;
    }
  }

  for (int b = 0; b < nn; ++b) {
    const int q = maps.n_index[b];
    for (int a = 0; a < nn; ++a) {
      const int pp = maps.n_index[a];
      out.hessian(nr + a, nr + b) = -(kron_t(w.z3, w.z3, pp, q, s) - (1.0 + inv_t) * kron_t(w.k_inv, w.k_inv, pp, q, s));
    }
  }

  // d grad_R / dK = -(conj(Z4) (x) Z4) acting on vec(dK); rows follow vec of m x m, columns vec of s x s.
  for (int b = 0; b < nn; ++b) {
    const int q = maps.n_index[b];
    for (int a = 0; a < nr; ++a) {
      const int pp = maps.r_index[a];
      const cplx v = -std::conj(w.z4(pp / m, q / s)) * w.z4(pp % m, q % s);
      out.hessian(a, nr + b) = v;
      out.hessian(nr + b, a) = std::conj(v);
    }
  }
  out.hessian /= kLn2;
  return out;
}

namespace {

struct Trial {
  CMatrix r;
  CMatrix n_block;
};

Trial step_to(const SaddleState& st, const SaddleProblem& prob, const CVector& dz, double s) {
  const auto& maps = prob.maps;
  const CMatrix dr = hermitize(maps.scatter_r(dz.head(maps.r_size())));
  const CMatrix dk = hermitize(maps.scatter_n(dz.tail(maps.n_size())));
  const Eigen::Index d = prob.d;
  const Eigen::Index e = prob.h2.rows();
  return {st.r_cov.r + s * dr, st.noise.n_block + s * dk.bottomLeftCorner(e, d)};
}

}  // namespace

SaddleState newton_iterate(const SaddleState& state, const SaddleProblem& prob, const BarrierConfig& cfg) {
  const KktSystem sys = kkt_system(state, prob.h, prob.h2, prob.p, prob.maps);
  const double r0 = sys.residual.norm();
  if (r0 <= 1e-14) return state;  // stationary to machine precision
  Eigen::FullPivLU<CMatrix> lu(sys.hessian);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularSystem, "Newton system is singular");
  const CVector dz = lu.solve(-sys.residual);
  if (!dz.allFinite()) throw Error(ErrorCode::SingularSystem, "Newton step is not finite");

  double s = 1.0;
  for (int bt = 0; bt < cfg.max_backtrack; ++bt, s *= cfg.beta) {
    const Trial cand = step_to(state, prob, dz, s);
    const NoiseCov noise = NoiseCov::from_block(cand.n_block, prob.d);
    if (!strictly_feasible(cand.r, noise.k, prob.p)) continue;
    SaddleState next = make_state(prob, cand.r, cand.n_block, state.t);
    // For tiny s, (1 - alpha s) r0 rounds to r0; insist on a real decrease.
    if (next.residual_norm <= (1.0 - cfg.alpha * s) * r0 && next.residual_norm < r0) return next;
  }
  throw Error(ErrorCode::LineSearchStalled, "backtracking exceeded max_backtrack");
}

SaddleResult solve_saddle(const CMatrix& h1, const CMatrix& h2, double p, const BarrierConfig& cfg) {
  cfg.validate();
  const SaddleProblem prob = SaddleProblem::make(h1, h2, p);
  const Eigen::Index m = h1.cols();
  const CMatrix r0 = (p / (2.0 * static_cast<double>(m))) * CMatrix::Identity(m, m);
  SaddleState st = make_state(prob, r0, CMatrix::Zero(h2.rows(), h1.rows()), cfg.t0);

  SaddleResult out;
  auto record = [&](int step) {
    const CMatrix& r = st.r_cov.r;
    const double c = link_rate(h1, r) - link_rate(h2, r);
    out.trace.push_back({st.t, step, st.residual_norm, saddle_objective(r, st.noise.k, prob.h, prob.h2), c});
  };

  int total = 0;
  record(0);
  for (;;) {
    int k = 0;
    while (st.residual_norm > cfg.eps1) {
      if (k >= cfg.max_newton) throw Error(ErrorCode::IterationCap, "Newton iterations exceeded max_newton");
      try {
        st = newton_iterate(st, prob, cfg);
      } catch (const Error& e) {
        // Near-singular K at large t puts a roundoff floor under the residual,
        // sometimes just above eps1. Accept a floor below sqrt(eps1).
        if (e.code() != ErrorCode::LineSearchStalled || st.residual_norm > std::sqrt(cfg.eps1)) throw;
        break;
      }
      ++k;
      ++total;
      record(total);
    }
    if (st.t >= cfg.t_max) break;
    // The last stage runs exactly at t_max.
    st = make_state(prob, st.r_cov.r, st.noise.n_block, std::min(st.t * cfg.mu, cfg.t_max));
  }

  out.r_opt = st.r_cov;
  out.noise = st.noise;
  out.newton_steps = total;
  out.f_value = saddle_objective(st.r_cov.r, st.noise.k, prob.h, prob.h2);
  out.barrier_secrecy_rate = link_rate(h1, st.r_cov.r) - link_rate(h2, st.r_cov.r);
  out.secrecy_rate = out.barrier_secrecy_rate;
  if (cfg.polish) {
    out.r_opt.r = polish_secrecy_covariance(h1, h2, st.r_cov.r, p, cfg.max_polish);
    out.secrecy_rate = link_rate(h1, out.r_opt.r) - link_rate(h2, out.r_opt.r);
  }
  return out;
}

CMatrix project_trace_psd(const CMatrix& a, double p) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a));
  RVector lam = es.eigenvalues().cwiseMax(0.0);
  if (lam.sum() > p) {
    std::vector<double> u(lam.data(), lam.data() + lam.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double run = 0.0;
    double tau = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      run += u[j];
      const double cand = (run - p) / static_cast<double>(j + 1);
      if (u[j] - cand > 0.0) tau = cand;
    }
    lam = (lam.array() - tau).cwiseMax(0.0).matrix();
  }
  return hermitize(es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
}

namespace {

CMatrix secrecy_gradient(const CMatrix& h1, const CMatrix& h2, const CMatrix& r) {
  auto part = [&](const CMatrix& h) {
    const CMatrix s = CMatrix::Identity(h.rows(), h.rows()) + h * r * h.adjoint();
    return CMatrix(h.adjoint() * Eigen::LLT<CMatrix>(hermitize(s)).solve(h));
  };
  return hermitize(part(h1) - part(h2)) / kLn2;
}

}  // namespace

CMatrix polish_secrecy_covariance(const CMatrix& h1, const CMatrix& h2, const CMatrix& r, double p,
                                  int max_iterations) {
  auto rate = [&](const CMatrix& x) { return link_rate(h1, x) - link_rate(h2, x); };
  CMatrix cur = project_trace_psd(r, p);
  double c = rate(cur);
  double step = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const CMatrix g = secrecy_gradient(h1, h2, cur);
    const double gnorm = g.norm();
    if (gnorm == 0.0) break;
    // Past ||step g|| ~ 1e4 p the projection input loses the precision of cur.
    step = step > 0.0 ? std::min(2.0 * step, 1e4 * p / gnorm) : p / gnorm;
    bool accepted = false;
    double c_next = c;
    CMatrix next;
    for (int bt = 0; bt < 80; ++bt) {
      next = project_trace_psd(cur + step * g, p);
      const double ascent = (g.adjoint() * (next - cur)).trace().real();
      if (ascent <= 1e-15 * (1.0 + std::abs(c))) break;
      c_next = rate(next);
      if (c_next >= c + 1e-4 * ascent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double gain = c_next - c;
    cur = next;
    c = c_next;
    if (gain <= 1e-13 * std::max(1.0, std::abs(c))) break;
  }
  return cur;
}

void write_saddle_trace(std::ostream& os, const std::vector<SaddleTraceRow>& trace) {
  os << "t,newton_step,residual_norm,f,c\n";
  os << std::setprecision(9);
  for (const auto& row : trace) os << row.t << ',' << row.newton_step << ',' << row.residual_norm << ',' << row.f << ',' << row.c << '\n';
}

}  // namespace irs
