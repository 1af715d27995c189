// SPDX-License-Identifier: Apache-2.0
#include "irs/phase_obo.hpp"

#include <cmath>

namespace irs {

WhitenedChannels WhitenedChannels::make(const ChannelSet& ch, const TransmitCovariance& r) {
  ch.validate();
  if (r.r.rows() != ch.h_ab.cols()) throw Error(ErrorCode::InvalidArgument, "R must be m x m");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(r.r));
  const CMatrix root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return {ch.h_ab * root, ch.h_ae * root, ch.h_ai * root, ch.h_ib, ch.h_ie};
}

namespace {

struct SideData {
  CMatrix a;
  CMatrix b;
  cplx lam;
  double c;
};

// Bob side when (direct, reflect) = (h_ab, h_ib); Eve side with (h_ae, h_ie).
SideData side(int i, const CVector& q, const CMatrix& direct, const CMatrix& reflect, const CMatrix& incident) {
  const Eigen::Index rows = direct.rows();
  const CMatrix others = direct + reflect * q.asDiagonal() * incident - q(i) * reflect.col(i) * incident.row(i);
  const CVector r_i = reflect.col(i);
  const CVector t_i = incident.row(i).adjoint();
  const CMatrix id = CMatrix::Identity(rows, rows);

  SideData s;
  s.a = hermitize(id + others * others.adjoint() + t_i.squaredNorm() * r_i * r_i.adjoint());
  s.b = r_i * (others * t_i).adjoint();
  Eigen::LLT<CMatrix> llt(s.a);
  const CMatrix a_inv_b = llt.solve(s.b);
  s.lam = a_inv_b.trace();
  const CMatrix at_one = id + a_inv_b + llt.solve(CMatrix(s.b.adjoint()));
  s.c = at_one.determinant().real() - 2.0 * s.lam.real();
  if (!(s.c - 2.0 * std::abs(s.lam) > 0.0))
    throw Error(ErrorCode::InvariantViolation, "determinant ratio is not positive on the unit circle");
  return s;
}

bool trace_is_zero(cplx lam, const CMatrix& a) {
  const double scale = 1.0 + std::abs(Eigen::LLT<CMatrix>(a).solve(CMatrix::Identity(a.rows(), a.cols())).trace());
  return std::abs(lam) <= 1e-10 * scale;
}

}  // namespace

OboElementData element_data(int i, const CVector& q, const WhitenedChannels& w) {
  if (i < 0 || i >= q.size()) throw Error(ErrorCode::InvalidArgument, "element index out of range");
  const SideData bob = side(i, q, w.h_ab, w.h_ib, w.h_ai);
  const SideData eve = side(i, q, w.h_ae, w.h_ie, w.h_ai);
  OboElementData out;
  out.a_i = bob.a;
  out.b_i = bob.b;
  out.lam_bar = bob.lam;
  out.c_bar = bob.c;
  out.c_i = eve.a;
  out.d_i = eve.b;
  out.lam_tilde = eve.lam;
  out.c_tilde = eve.c;
  return out;
}

OboElementData element_data(int i, const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch) {
  return element_data(i, q.q(), WhitenedChannels::make(ch, r));
}

OboCase classify(const OboElementData& data) {
  const bool bob_zero = trace_is_zero(data.lam_bar, data.a_i);
  const bool eve_zero = trace_is_zero(data.lam_tilde, data.c_i);
  if (bob_zero && eve_zero) return OboCase::None;
  if (eve_zero) return OboCase::BobOnly;
  if (bob_zero) return OboCase::EveOnly;
  return OboCase::Both;
}

double element_objective(const OboElementData& data, cplx q) {
  const double num = data.c_bar + 2.0 * (q * data.lam_bar).real();
  const double den = data.c_tilde + 2.0 * (q * data.lam_tilde).real();
  return std::log2(num) - std::log2(den);
}

double dinkelbach_value(const OboElementData& data, double u) {
  return data.c_bar - u * data.c_tilde + 2.0 * std::abs(data.lam_bar - u * data.lam_tilde);
}

cplx optimize_element(const OboElementData& data, cplx incumbent) {
  switch (classify(data)) {
    case OboCase::None:
      return incumbent;
    case OboCase::BobOnly:
      return std::polar(1.0, -std::arg(data.lam_bar));
    case OboCase::EveOnly:
      return std::polar(1.0, M_PI - std::arg(data.lam_tilde));
    case OboCase::Both:
      break;
  }

  // g is strictly decreasing; its root is the optimal ratio.
  double lo = 0.0;
  double hi = 1.0;
  while (dinkelbach_value(data, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorCode::BracketFailure, "no sign change of the Dinkelbach function below 1e12");
  }
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (dinkelbach_value(data, mid) > 0.0) lo = mid; else hi = mid;
  }
  const cplx w = data.lam_bar - 0.5 * (lo + hi) * data.lam_tilde;
  if (std::abs(w) == 0.0) return incumbent;
  return std::polar(1.0, -std::arg(w));
}

OboSweepResult obo_sweep_traced(const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch, OboMode mode) {
  if (q.is_off()) throw Error(ErrorCode::InvalidArgument, "OBO needs a unit-modulus starting point");
  WhitenedChannels w = WhitenedChannels::make(ch, r);
  if (mode == OboMode::BobOnly) {
    w.h_ae.setZero();
    w.h_ie.setZero();
  }
  CVector cur = q.q();
  OboSweepResult out;
  for (int i = 0; i < cur.size(); ++i) {
    const OboElementData data = element_data(i, cur, w);
    cplx next = optimize_element(data, cur(i));
    const double before = element_objective(data, cur(i));
    // bisection slack in case 4 can leave the new point a hair below the incumbent
    if (element_objective(data, next) < before) next = cur(i);
    out.before.push_back(before);
    out.after.push_back(element_objective(data, next));
    cur(i) = next;
  }
  out.q = PhaseShift(cur);
  return out;
}

PhaseShift obo_sweep(const PhaseShift& q, const TransmitCovariance& r, const ChannelSet& ch, OboMode mode) {
  return obo_sweep_traced(q, r, ch, mode).q;
}

}  // namespace irs
