#ifndef ENTWIT_QSTATE_HPP
#define ENTWIT_QSTATE_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace entwit {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3r = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4cd;
using Mat4r = Eigen::Matrix4d;
using MatX = Eigen::MatrixXcd;
using Vec2 = Eigen::Vector2cd;
using Vec3r = Eigen::Vector3d;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;  // eigensolves amplify rounding

/// Qubit encoding: |0> = |H>, |1> = |V>; sigma_z is diagonal in H/V with
/// sigma_z|H> = +|H>. All modules inherit this convention.
const Mat2& pauli(int i);  // i in {0,1,2,3}, pauli(0) = I

/// Density matrix of 1, 2 or 3 qubits. When `normalized` is false the trace
/// is a success probability in (0, 1].
struct DensityMatrix {
  MatX m;
  bool normalized = true;

  DensityMatrix() = default;
  DensityMatrix(MatX mat, bool norm) : m(std::move(mat)), normalized(norm) {}

  int dim() const { return static_cast<int>(m.rows()); }
  int num_qubits() const;
  double trace() const { return m.trace().real(); }
  double min_eigenvalue() const;
  double max_hermiticity_defect() const;
  bool is_hermitian(double tol = kHermTol) const { return max_hermiticity_defect() <= tol; }
  bool is_psd(double tol = kPsdTol) const { return min_eigenvalue() >= -tol; }

  DensityMatrix renormalized() const;
};

/// Throws std::invalid_argument when any DensityMatrix invariant fails.
void validate(const DensityMatrix& rho);

struct BlochVector {
  Vec3r r;
  double dop() const { return r.norm(); }
};

/// Two-photon Stokes tensor S_{mu,nu} = Tr(rho sigma_mu x sigma_nu).
/// T is the 3x3 correlation block whose singular values are the lambdas.
struct StokesTensor {
  Mat4r S;
  Mat3r T() const { return S.block<3, 3>(1, 1); }
};

/// Reduced state of one arm. keep is 1 (first tensor factor) or 2.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

/// Reduced state of arm `arm` (1-based) of an N-qubit state, all other arms
/// traced out.
DensityMatrix partial_trace_arm(const DensityMatrix& rho, int arm);

/// Bloch vector of a single-qubit state, r_i = Tr(rho sigma_i)/Tr(rho).
/// Throws on Tr(rho) <= 0 (state filtered to extinction).
BlochVector bloch_vector(const DensityMatrix& rho1);
double dop(const DensityMatrix& rho1);

StokesTensor stokes_tensor(const DensityMatrix& rho);

/// Inverse of stokes_tensor. The result of a noisy S may fail positivity;
/// it is returned as-is (check is_psd; repair lives in the oracle module).
DensityMatrix from_stokes(const Mat4r& S);

MatX kron(const MatX& a, const MatX& b);

// Named states ------------------------------------------------------------

namespace states {

/// |psi-> = (|01> - |10>)/sqrt(2), the Bell reference state.
DensityMatrix singlet();
/// w |psi-><psi-| + (1-w) I/4.
DensityMatrix werner(double w);
/// cos(alpha)|00> + sin(alpha)|11>.
DensityMatrix pure_alpha(double alpha);
/// Dephased asymmetric pair: start from pure_alpha, scale the |00><11|
/// coherence by gamma, then mix with white noise eps*I/4.
DensityMatrix decohered(double alpha, double gamma, double eps);
/// Calibrated decohered(alpha, gamma, eps) used by the demo pipeline;
/// concurrence 0.18 +- 0.01 with strongly polarized marginals.
DensityMatrix decohered_demo();
DensityMatrix computational(int dim, int index);  // |index><index|
/// (|000> + |111>)/sqrt(2).
DensityMatrix ghz3();
/// cos(alpha)|000> + sin(alpha)|111>.
DensityMatrix ghz3_alpha(double alpha);

extern const double kDemoAlpha;
extern const double kDemoGamma;
extern const double kDemoEps;

/// Parses a state literal: `singlet`, `werner:0.8`, `pure:0.3`,
/// `decohered:0.52,0.3,0.1`, `decohered-demo`, `ghz`, or `raw:<32 reals>`
/// (4x4 row-major, re/im interleaved). Throws std::invalid_argument.
DensityMatrix parse(const std::string& literal);

}  // namespace states

}  // namespace entwit

#endif
