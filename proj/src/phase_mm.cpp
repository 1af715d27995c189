// SPDX-License-Identifier: Apache-2.0
#include "irs/phase_mm.hpp"

#include <cmath>

namespace irs {

namespace {

CMatrix reflect_gram(const TransmitCovariance& r, const ChannelSet& ch) {
  return hermitize(ch.h_ai * r.r * ch.h_ai.adjoint());
}

}  // namespace

double mm_objective(const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch) {
  const CMatrix g = ch.h_ib * q.q().asDiagonal();
  return link_rate(g * ch.h_ai, r.r);
}

MmState build_mm_state(const PhaseShift& q_tilde, const TransmitCovariance& r, const ChannelSet& ch) {
  ch.validate();
  if (q_tilde.size() != ch.h_ai.rows() || q_tilde.is_off())
    throw Error(ErrorCode::InvalidArgument, "MM needs a unit-modulus point of length n");
  const Eigen::Index n = ch.h_ai.rows();
  const Eigen::Index d = ch.h_ib.rows();

  MmState s;
  s.q_tilde = q_tilde.q();
  s.l_half = psd_sqrt(reflect_gram(r, ch));
  s.p_tilde = ch.h_ib * s.q_tilde.asDiagonal() * s.l_half;

  const CMatrix inner = hermitize(CMatrix::Identity(n, n) + s.p_tilde.adjoint() * s.p_tilde);
  s.j_b = Eigen::LLT<CMatrix>(inner).solve(CMatrix(s.p_tilde.adjoint())).adjoint();
  // Woodbury: I - P (I + P^H P)^-1 P^H = (I + P P^H)^-1
  const CMatrix qb_inv = hermitize(CMatrix::Identity(d, d) + s.p_tilde * s.p_tilde.adjoint());
  s.q_tilde_b = hermitize(Eigen::LLT<CMatrix>(qb_inv).solve(CMatrix::Identity(d, d)));

  s.a1 = qb_inv * s.j_b * s.l_half;
  s.a2 = hermitize(ch.h_ib.adjoint() * ch.h_ib);
  s.a3 = s.l_half * s.j_b.adjoint();
  s.a4_diag = (ch.h_ib.adjoint() * s.a1).diagonal();
  s.z = hermitize(s.a2.cwiseProduct(CMatrix((s.a3 * s.a1).transpose())));
  s.lam1_z = max_eigenvalue_herm(s.z);

  // Log-det tangent constant plus the matrix-fractional tangent constant.
  const double c1 = ln_det_pd(qb_inv) + static_cast<double>(d) - qb_inv.trace().real();
  const double c2 = (qb_inv * s.j_b * s.p_tilde.adjoint() * s.p_tilde * s.j_b.adjoint()).trace().real() -
                    (qb_inv * s.p_tilde * s.j_b.adjoint()).trace().real();
  s.const_terms = c1 + c2;
  return s;
}

double surrogate_value(const PhaseShift& q, const MmState& s) {
  const CVector& qt = s.q_tilde;
  const CVector& v = q.q();
  const auto n = static_cast<double>(qt.size());
  const CMatrix shifted = s.lam1_z * CMatrix::Identity(qt.size(), qt.size()) - s.z;
  const double nats = -2.0 * n * s.lam1_z + 2.0 * v.dot(shifted * qt).real() + qt.dot(s.z * qt).real() +
                      2.0 * v.dot(s.a4_diag).real() + s.const_terms;
  return nats / kLn2;
}

PhaseShift mm_update(const MmState& s) {
  const Eigen::Index n = s.q_tilde.size();
  const CVector v = (s.lam1_z * CMatrix::Identity(n, n) - s.z) * s.q_tilde + s.a4_diag;
  CVector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = v(i) == cplx(0.0, 0.0) ? s.q_tilde(i) : std::polar(1.0, std::arg(v(i)));
  return PhaseShift(q);
}

MmResult mm_solve(const TransmitCovariance& r, const ChannelSet& ch, double tol, const PhaseShift* start,
                  int max_iterations) {
  const int n = static_cast<int>(ch.h_ai.rows());
  PhaseShift q_tilde = start ? *start : PhaseShift::ones(n);
  MmState state = build_mm_state(q_tilde, r, ch);
  double c0 = surrogate_value(q_tilde, state);

  MmResult out{q_tilde, 0, {mm_objective(q_tilde, r, ch)}};
  for (int it = 1; it <= max_iterations; ++it) {
    const PhaseShift q = mm_update(state);
    const double c1 = surrogate_value(q, state);
    out.q = q;
    out.iterations = it;
    out.objective_trace.push_back(mm_objective(q, r, ch));
    if (std::abs(c1 - c0) <= tol * std::abs(c0)) return out;
    c0 = c1;
    state = build_mm_state(q, r, ch);
  }
  throw Error(ErrorCode::IterationCap, "MM did not converge within the iteration cap");
}

}  // namespace irs
