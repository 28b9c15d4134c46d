#ifndef ENTWIT_SLOCC_HPP
#define ENTWIT_SLOCC_HPP

#include <vector>

#include "entwit/qstate.hpp"

namespace entwit {

/// Raised when a SLOCC application leaves (numerically) no transmitted
/// population, i.e. a quasi-distillable / near-singular regime.
struct ExtinctionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Polarization-dependent-loss element on one arm: photons along the
/// filtering direction f survive with probability p, the orthogonal
/// polarization always passes. Kraus operator K = I - (1 - sqrt(p)) |f><f|.
struct LocalFilter {
  int arm = 0;  // 1 or 2 (3 for the third arm of a GHZ pipeline); 0 = none
  Vec2 f = Vec2(1.0, 0.0);
  double p = 1.0;
};

struct LocalUnitary {
  int arm = 0;
  Mat2 U = Mat2::Identity();
};

/// Product of all filters applied to one arm so far, rescaled so the largest
/// singular value is 1 (the re-adjusted physical filter passes its favoured
/// axis fully). p_eff = (s_min/s_max)^2 is the effective transmission.
struct CompositeArmOperator {
  int arm = 0;
  Mat2 A = Mat2::Identity();
  double p_eff = 1.0;

  /// Left-composes K and renormalizes; updates p_eff.
  void compose(const Mat2& K);
};

/// K = I - (1 - sqrt(p)) |f><f|. Requires p in (0, 1], |f| = 1.
Mat2 filter_kraus(const Vec2& f, double p);

/// filter_kraus with an extra phase exp(i*phi) on the filtered axis, the
/// minimal model of residual group delay between polarization components.
Mat2 filter_kraus_imperfect(const Vec2& f, double p, double phi);

/// (A1 x A2) rho (A1 x A2)^dagger, unnormalized; the trace is the pass
/// probability. Throws ExtinctionError when the output trace < 1e-12.
DensityMatrix apply_slocc(const DensityMatrix& rho, const Mat2& A1, const Mat2& A2);

/// Applies K on one arm of an N-qubit state (identity elsewhere).
DensityMatrix apply_arm(const DensityMatrix& rho, int arm, const Mat2& K);

enum class WaveplateKind { QWP, HWP };

/// Jones matrix R(theta) diag(1, i^k) R(-theta), k = 1 for QWP, 2 for HWP.
Mat2 waveplate(WaveplateKind kind, double theta);

/// Lifts a proper rotation O in SO(3) to U in SU(2) with
/// (1/2) Tr(sigma_i U sigma_j U^dag) = O_ij. The global sign is fixed by
/// making the first nonzero entry's real part >= 0 (imaginary part > 0 when
/// the real part vanishes). Improper O is a hard error.
Mat2 so3_to_su2(const Mat3r& O);

/// SO(3) image of a 2x2 unitary, O_ij = (1/2) Tr(sigma_i U sigma_j U^dag).
Mat3r su2_to_so3(const Mat2& U);

}  // namespace entwit

#endif
