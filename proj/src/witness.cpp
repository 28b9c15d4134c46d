#include "entwit/witness.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "json.hpp"

namespace entwit {

Mat4 bell_witness() {
  static const Mat4 w = 0.5 * Mat4::Identity() - Mat4(states::singlet().m);
  return w;
}

LambdaTriple lambda_svd(const Mat3r& T) {
  if (T.cwiseAbs().maxCoeff() > 1.0 + 1e-9)
    throw std::invalid_argument("correlation matrix entries must lie in [-1, 1]");
  Eigen::JacobiSVD<Mat3r> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  LambdaTriple out;
  out.lambda = svd.singularValues();
  out.O1 = svd.matrixU();
  out.O2 = svd.matrixV();
  // push any reflection into the third column so both rotations stay proper;
  // the sign of det T is then carried entirely by q
  if (out.O1.determinant() < 0.0) out.O1.col(2) *= -1.0;
  if (out.O2.determinant() < 0.0) out.O2.col(2) *= -1.0;
  const double det = T.determinant();
  out.q = std::abs(det) < 1e-12 ? -1 : (det > 0.0 ? 1 : -1);
  return out;
}

WitnessReport witness_value(const LambdaTriple& lambda, double s0) {
  if (!(s0 > 0.0) || s0 > 1.0 + 1e-9)
    throw std::invalid_argument("s0 must lie in (0, 1]");
  WitnessReport rep;
  rep.lambdas = lambda;
  rep.s0 = s0;
  rep.trW_dis =
      (1.0 - lambda.lambda(0) - lambda.lambda(1) + lambda.q * lambda.lambda(2)) / 4.0;
  rep.trW = s0 * rep.trW_dis;
  rep.c_bound = std::max(0.0, -2.0 * rep.trW);
  rep.c_bound_dis = std::max(0.0, -2.0 * rep.trW_dis);
  return rep;
}

Mat4 materialize_witness(const LambdaTriple& lambda,
                         const std::vector<CompositeArmOperator>& composite) {
  if (composite.size() != 2)
    throw std::invalid_argument("materialize_witness expects two arm operators");
  // Rotations sending the state's T to -diag(l1, l2, -q l3), the singlet
  // alignment: applying U1 x U2 to the state maps T -> O(U1) T O(U2)^T.
  Mat3r flip = Mat3r::Identity();
  flip(0, 0) = flip(1, 1) = -1.0;
  const Mat2 U1 = so3_to_su2(Mat3r(flip * lambda.O1.transpose()));
  const Mat2 U2 = so3_to_su2(Mat3r(lambda.O2.transpose()));
  const MatX rot = kron(U1, U2);
  const Mat4 w_dis = rot.adjoint() * bell_witness() * rot;
  const MatX slocc = kron(composite[0].A, composite[1].A);
  const double scale = std::sqrt(composite[0].p_eff * composite[1].p_eff);
  if (!(scale > 0.0)) throw std::invalid_argument("composite transmission must be positive");
  Mat4 w = slocc.adjoint() * w_dis * slocc / scale;
  return 0.5 * (w + Mat4(w.adjoint()));
}

WitnessReport best_witness_bound(const DensityMatrix& rho_k, double s0_k, double dop_tol) {
  const DensityMatrix rho = rho_k.normalized ? rho_k : rho_k.renormalized();
  const LambdaTriple lambda = lambda_svd(stokes_tensor(rho).T());
  WitnessReport rep = witness_value(lambda, s0_k);
  rep.optimal = dop(partial_trace(rho, 1)) <= dop_tol && dop(partial_trace(rho, 2)) <= dop_tol;
  return rep;
}

double ghz_witness_value(const DensityMatrix& rho3) {
  if (rho3.dim() != 8) throw std::invalid_argument("ghz_witness_value expects three qubits");
  const Eigen::VectorXcd ghz = [] {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
    v(0) = v(7) = 1.0 / std::sqrt(2.0);
    return v;
  }();
  const double overlap = (ghz.adjoint() * rho3.m * ghz)(0).real();
  return 0.75 * rho3.trace() - overlap;
}

DistillationResult nqubit_normal_form(const DensityMatrix& rho, double tol_dop,
                                      int max_steps) {
  const int n = rho.num_qubits();
  if (n != 2 && n != 3)
    throw std::invalid_argument("normal-form iteration supports 2 or 3 qubits");
  return distill_cyclic(rho, tol_dop, max_steps);
}

std::string WitnessReport::to_json() const {
  nlohmann::ordered_json j;
  j["lambda1"] = lambdas.lambda(0);
  j["lambda2"] = lambdas.lambda(1);
  j["lambda3"] = lambdas.lambda(2);
  j["q"] = lambdas.q;
  j["s0"] = s0;
  j["trW"] = trW;
  j["trW_dis"] = trW_dis;
  j["c_bound"] = c_bound;
  j["c_bound_dis"] = c_bound_dis;
  j["optimal"] = optimal;
  return j.dump(2);
}

}  // namespace entwit
