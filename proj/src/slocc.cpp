#include "entwit/slocc.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>

namespace entwit {

void CompositeArmOperator::compose(const Mat2& K) {
  Mat2 raw = K * A;
  Eigen::JacobiSVD<Mat2> svd(raw);
  const double s_max = svd.singularValues()(0);
  if (s_max < 1e-300) throw ExtinctionError("composite arm operator collapsed to zero");
  A = raw / s_max;
  const double s_min = svd.singularValues()(1) / s_max;
  p_eff = s_min * s_min;
}

Mat2 filter_kraus(const Vec2& f, double p) {
  if (!(p > 0.0) || p > 1.0 + 1e-12)
    throw std::invalid_argument("filter transmission must be in (0, 1]");
  if (std::abs(f.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("filtering vector must be unit length");
  return Mat2::Identity() - (1.0 - std::sqrt(p)) * (f * f.adjoint());
}

Mat2 filter_kraus_imperfect(const Vec2& f, double p, double phi) {
  const Mat2 K = filter_kraus(f, p);
  if (phi == 0.0) return K;
  const Mat2 phase =
      Mat2::Identity() + (std::exp(cplx(0, phi)) - 1.0) * (f * f.adjoint());
  return K * phase;
}

DensityMatrix apply_slocc(const DensityMatrix& rho, const Mat2& A1, const Mat2& A2) {
  if (rho.dim() != 4) throw std::invalid_argument("apply_slocc expects a two-qubit state");
  const MatX op = kron(A1, A2);
  DensityMatrix out(op * rho.m * op.adjoint(), false);
  if (out.trace() < 1e-12)
    throw ExtinctionError("SLOCC output trace < 1e-12 (quasi-distillable regime)");
  return out;
}

DensityMatrix apply_arm(const DensityMatrix& rho, int arm, const Mat2& K) {
  const int n = rho.num_qubits();
  if (arm < 1 || arm > n) throw std::invalid_argument("arm out of range");
  MatX op = MatX::Identity(1, 1);
  for (int j = 1; j <= n; ++j) op = kron(op, j == arm ? MatX(K) : MatX(Mat2::Identity()));
  DensityMatrix out(op * rho.m * op.adjoint(), false);
  if (out.trace() < 1e-12)
    throw ExtinctionError("SLOCC output trace < 1e-12 (quasi-distillable regime)");
  return out;
}

Mat2 waveplate(WaveplateKind kind, double theta) {
  Mat2 rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Mat2 retard = Mat2::Identity();
  retard(1, 1) = kind == WaveplateKind::QWP ? cplx(0, 1) : cplx(-1, 0);
  return rot * retard * rot.adjoint();
}

Mat2 so3_to_su2(const Mat3r& O) {
  if ((O.transpose() * O - Mat3r::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("so3_to_su2: input is not orthogonal");
  if (O.determinant() < 0.0)
    throw std::invalid_argument("so3_to_su2: improper rotation (det = -1)");
  const Eigen::Quaterniond q(O);
  // U = w I - i (x sx + y sy + z sz) reproduces O under v.sigma -> U v.sigma U+
  Mat2 U;
  U << cplx(q.w(), -q.z()), cplx(-q.y(), -q.x()), cplx(q.y(), -q.x()), cplx(q.w(), q.z());
  // global sign: first entry with nonzero magnitude gets Re >= 0 (Im > 0 on ties)
  for (int idx = 0; idx < 4; ++idx) {
    const cplx e = U(idx / 2, idx % 2);
    if (std::abs(e) < 1e-12) continue;
    if (e.real() < -1e-12 || (std::abs(e.real()) <= 1e-12 && e.imag() < 0.0)) U = -U;
    break;
  }
  return U;
}

Mat3r su2_to_so3(const Mat2& U) {
  Mat3r O;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      O(i, j) = 0.5 * (pauli(i + 1) * U * pauli(j + 1) * U.adjoint()).trace().real();
  return O;
}

}  // namespace entwit
