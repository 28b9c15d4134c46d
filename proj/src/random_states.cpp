#include "entwit/random_states.hpp"

#include <Eigen/QR>

namespace entwit {

Eigen::VectorXcd random_pure(int dim, RngStream& rng) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(rng.normal(), rng.normal());
  v.normalize();
  return v;
}

DensityMatrix random_density(int dim, RngStream& rng, double floor) {
  MatX g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  MatX w = g * g.adjoint();
  w /= w.trace().real();
  w = (1.0 - floor) * w + floor * MatX::Identity(dim, dim) / double(dim);
  return DensityMatrix(w, true);
}

DensityMatrix random_product_pure(RngStream& rng) {
  const Eigen::VectorXcd a = random_pure(2, rng), b = random_pure(2, rng);
  const Eigen::VectorXcd psi = kron(a, b);
  return DensityMatrix(psi * psi.adjoint(), true);
}

Mat2 random_unitary2(RngStream& rng) {
  MatX g(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<MatX> qr(g);
  MatX q = qr.householderQ();
  MatX r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return Mat2(q);
}

Mat3r random_rotation3(RngStream& rng) {
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 3; ++i)
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  if (q.determinant() < 0.0) q.col(2) *= -1.0;
  return q;
}

DensityMatrix random_biseparable3(RngStream& rng) {
  const int cut = int(rng.uniform() * 3.0);  // which arm splits off
  const Eigen::VectorXcd single = random_pure(2, rng);
  const Eigen::VectorXcd pair = random_pure(4, rng);
  Eigen::VectorXcd psi;
  switch (cut) {
    case 0: psi = kron(single, pair); break;           // 1 | 23
    case 1: {                                          // 2 | 13
      psi = Eigen::VectorXcd(8);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            psi(4 * a + 2 * b + c) = pair(2 * a + c) * single(b);
      break;
    }
    default: psi = kron(pair, single); break;          // 3 | 12
  }
  return DensityMatrix(psi * psi.adjoint(), true);
}

}  // namespace entwit
