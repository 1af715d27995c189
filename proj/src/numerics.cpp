// SPDX-License-Identifier: Apache-2.0
#include "irs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace irs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::RankTooHigh: return "RankTooHigh";
    case ErrorCode::ZeroChannel: return "ZeroChannel";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::LineSearchStalled: return "LineSearchStalled";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::IterationCap: return "IterationCap";
    case ErrorCode::InfeasibleQoS: return "InfeasibleQoS";
    case ErrorCode::NoNullSpace: return "NoNullSpace";
    case ErrorCode::InsufficientPower: return "InsufficientPower";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void require_finite(const CMatrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
}

bool is_hermitian(const CMatrix& a) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale;
}

void require_hermitian(const CMatrix& a, const char* what) {
  if (!is_hermitian(a)) throw Error(ErrorCode::NotHermitian, std::string(what) + " is not Hermitian");
}

CMatrix hermitize(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

double ln_det_pd(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(hermitize(a));
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  const auto diag = llt.matrixLLT().diagonal().real();
  if ((diag.array() <= 0.0).any()) throw Error(ErrorCode::NotPositiveDefinite, "non-positive Cholesky pivot");
  return 2.0 * diag.array().log().sum();
}

double log_det_pd(const CMatrix& a) {
  require_hermitian(a, "log_det_pd argument");
  return ln_det_pd(a) / kLn2;
}

double max_eigenvalue_herm(const CMatrix& a) {
  require_hermitian(a, "max_eigenvalue_herm argument");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

cplx rank1_eigenvalue(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "rank1_eigenvalue needs a square matrix");
  if (m.rows() > 1) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s(1) > 1e-8 * s(0)) throw Error(ErrorCode::RankTooHigh, "second singular value exceeds 1e-8 relative");
  }
  return m.trace();
}

WaterFillingResult water_filling(const CMatrix& h, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "water_filling needs p > 0");
  require_finite(h, "channel");
  const Eigen::Index m = h.cols();
  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) < 1e-14) throw Error(ErrorCode::ZeroChannel, "all singular values below 1e-14");

  std::vector<double> gain;
  for (Eigen::Index i = 0; i < sv.size(); ++i) gain.push_back(sv(i) < 1e-14 ? 0.0 : sv(i) * sv(i));

  auto allocated = [&](double level) {
    double total = 0.0;
    for (double g : gain)
      if (g > 0.0) total += std::max(0.0, level - 1.0 / g);
    return total;
  };

  // allocated() is non-decreasing in the level; hi always over-allocates.
  double lo = 0.0;
  double hi = p + 1.0 / gain.front();
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (allocated(mid) > p) hi = mid; else lo = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }

  WaterFillingResult out;
  out.water_level = lo;
  out.mode_gain = gain;
  CMatrix r = CMatrix::Zero(m, m);
  double capacity = 0.0;
  for (std::size_t i = 0; i < gain.size(); ++i) {
    const double pi = gain[i] > 0.0 ? std::max(0.0, lo - 1.0 / gain[i]) : 0.0;
    out.mode_power.push_back(pi);
    if (pi > 0.0) {
      const CVector v = svd.matrixV().col(static_cast<Eigen::Index>(i));
      r.noalias() += pi * v * v.adjoint();
      capacity += std::log2(1.0 + gain[i] * pi);
    }
  }
  out.covariance = {hermitize(r), p};
  out.capacity_bits = capacity;
  return out;
}

DuplicationMaps duplication_maps(int m, int d, int e) {
  if (m < 1 || d < 1 || e < 1) throw Error(ErrorCode::InvalidArgument, "duplication_maps dims must be >= 1");
  DuplicationMaps maps;
  maps.m = m;
  maps.d = d;
  maps.e = e;

  auto& ri = maps.r_index;
  for (int i = 0; i < m; ++i) ri.push_back(i + i * m);
  std::vector<int> upper;
  for (int j = 0; j < m; ++j)
    for (int i = j + 1; i < m; ++i) {
      ri.push_back(i + j * m);
      upper.push_back(j + i * m);
    }
  ri.insert(ri.end(), upper.begin(), upper.end());

  const int s = d + e;
  auto& ni = maps.n_index;
  std::vector<int> mirrored;
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < e; ++a) {
      ni.push_back((d + a) + b * s);
      mirrored.push_back(b + (d + a) * s);
    }
  ni.insert(ni.end(), mirrored.begin(), mirrored.end());

  maps.d_r = RMatrix::Zero(m * m, m * m);
  for (int c = 0; c < static_cast<int>(ri.size()); ++c) maps.d_r(ri[c], c) = 1.0;
  maps.d_n = RMatrix::Zero(s * s, 2 * d * e);
  for (int c = 0; c < static_cast<int>(ni.size()); ++c) maps.d_n(ni[c], c) = 1.0;
  return maps;
}

CVector DuplicationMaps::gather_r(const CMatrix& a) const {
  CVector out(r_size());
  for (int c = 0; c < r_size(); ++c) out(c) = a.data()[r_index[c]];
  return out;
}

CVector DuplicationMaps::gather_n(const CMatrix& a) const {
  CVector out(n_size());
  for (int c = 0; c < n_size(); ++c) out(c) = a.data()[n_index[c]];
  return out;
}

CMatrix DuplicationMaps::scatter_r(const CVector& r) const {
  CMatrix out = CMatrix::Zero(m, m);
  for (int c = 0; c < r_size(); ++c) out.data()[r_index[c]] += r(c);
  return out;
}

CMatrix DuplicationMaps::scatter_n(const CVector& n) const {
  CMatrix out = CMatrix::Zero(d + e, d + e);
  for (int c = 0; c < n_size(); ++c) out.data()[n_index[c]] += n(c);
  return out;
}

CMatrix psd_sqrt(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(a));
  const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace irs
