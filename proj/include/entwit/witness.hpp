#ifndef ENTWIT_WITNESS_HPP
#define ENTWIT_WITNESS_HPP

#include <string>

#include "entwit/distill.hpp"

namespace entwit {

/// Correlation extrema lambda_1 >= lambda_2 >= lambda_3 >= 0 with the sign
/// factor q = sign(det T) and proper rotations O1, O2 such that
/// O1^T T O2 = diag(lambda_1, lambda_2, q lambda_3).
struct LambdaTriple {
  Vec3r lambda = Vec3r::Zero();
  int q = -1;
  Mat3r O1 = Mat3r::Identity();
  Mat3r O2 = Mat3r::Identity();
};

/// Witness expectation values and the concurrence bounds they certify.
struct WitnessReport {
  double trW = 0.0;      // Tr(W_rho rho)
  double trW_dis = 0.0;  // Tr(W_dis rho_dis) = trW / s0
  double c_bound = 0.0;  // max{0, -2 trW}
  double c_bound_dis = 0.0;
  double s0 = 1.0;
  LambdaTriple lambdas;
  bool optimal = false;  // produced at the maximal-distillation step

  std::string to_json() const;
};

/// Singlet projector witness I/2 - |psi-><psi-|.
Mat4 bell_witness();

/// SVD of the 3x3 correlation matrix. q = sign(det T), with q := -1 when
/// |det T| < 1e-12 (lambda_3 ~ 0 makes the sign inert). Both rotations are
/// proper; the sign of det T is carried entirely by q.
LambdaTriple lambda_svd(const Mat3r& T);

/// Eq. values: trW = s0 (1 - l1 - l2 + q l3)/4 and the concurrence bounds.
WitnessReport witness_value(const LambdaTriple& lambda, double s0);

/// Explicit Hermitian witness W_rho = (A1 x A2)^dag W_dis (A1 x A2)/sqrt(p1 p2)
/// where W_dis is the Bell witness aligned so the rotated T equals
/// -diag(l1, l2, -q l3). Satisfies Tr(W_rho rho) = witness_value().trW and
/// Tr(W_rho sigma) >= 0 for every product state sigma.
Mat4 materialize_witness(const LambdaTriple& lambda,
                         const std::vector<CompositeArmOperator>& composite);

/// Witness value at an arbitrary distillation step: a certified lower bound
/// of the concurrence, tight once both DOPs vanish. dop_tol decides the
/// `optimal` flag.
WitnessReport best_witness_bound(const DensityMatrix& rho_k, double s0_k,
                                 double dop_tol = 1e-8);

/// Tr(W_GHZ rho3) with W_GHZ = 3I/4 - |GHZ><GHZ|.
double ghz_witness_value(const DensityMatrix& rho3);

/// N-qubit normal-form iteration (N in {2, 3}); see distill_cyclic.
DistillationResult nqubit_normal_form(const DensityMatrix& rho, double tol_dop,
                                      int max_steps);

}  // namespace entwit

#endif
