// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear-algebra helpers shared by the solvers.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "irs/error.hpp"

namespace irs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kLn2 = 0.69314718055994530942;

/// Throws InvalidArgument if any entry is NaN or infinite.
void require_finite(const CMatrix& a, const char* what);

/// Hermitian test with tolerance 1e-10 * max(1, max|a_ij|).
bool is_hermitian(const CMatrix& a);
void require_hermitian(const CMatrix& a, const char* what);

/// (a + a^H) / 2
CMatrix hermitize(const CMatrix& a);

/// log2 det(a) for Hermitian positive definite `a`, via Cholesky.
/// Throws NotPositiveDefinite when the factorization breaks down.
double log_det_pd(const CMatrix& a);

/// Natural-log variant used inside the solvers.
double ln_det_pd(const CMatrix& a);

/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue_herm(const CMatrix& a);

/// Unique nonzero eigenvalue of a rank-<=1 square matrix, i.e. its trace.
/// Rank is tested as sigma_2 <= 1e-8 * sigma_1; otherwise RankTooHigh.
cplx rank1_eigenvalue(const CMatrix& m);

struct TransmitCovariance {
  CMatrix r;
  double budget = 0.0;

  double power() const { return r.trace().real(); }
};

struct WaterFillingResult {
  TransmitCovariance covariance;
  /// Power per right-singular direction, ordered like the singular values.
  std::vector<double> mode_power;
  std::vector<double> mode_gain;
  double water_level = 0.0;
  double capacity_bits = 0.0;
};

/// Capacity-achieving covariance for y = h x + noise under tr(R) <= p.
/// The water level is found by bisection on the dual variable.
WaterFillingResult water_filling(const CMatrix& h, double p);

/// 0/1 maps between Hermitian matrices and their stacked parameter vectors.
///
/// The R vector is ordered as: diagonal entries in index order, strictly-lower
/// entries in column-major order, then the conjugates of those lower entries
/// (i.e. the mirrored upper positions). The K vector is vec(N) followed by
/// conj(vec(N)), where N is the lower-left e x d block of the (d+e) x (d+e) K.
struct DuplicationMaps {
  int m = 0;
  int d = 0;
  int e = 0;
  RMatrix d_r;  // m^2 x m^2
  RMatrix d_n;  // (d+e)^2 x 2de
  /// Column-major vec() index addressed by each parameter (the single 1 in each column).
  std::vector<int> r_index;
  std::vector<int> n_index;

  int r_size() const { return m * m; }
  int n_size() const { return 2 * d * e; }

  /// d_r^T vec(a)
  CVector gather_r(const CMatrix& a) const;
  /// d_n^T vec(a)
  CVector gather_n(const CMatrix& a) const;
  /// Matrix with vec() = d_r * r
  CMatrix scatter_r(const CVector& r) const;
  /// Matrix with vec() = d_n * n
  CMatrix scatter_n(const CVector& n) const;
};

DuplicationMaps duplication_maps(int m, int d, int e);

/// Hermitian PSD square root with negative eigenvalues clipped at zero.
CMatrix psd_sqrt(const CMatrix& a);

}  // namespace irs
