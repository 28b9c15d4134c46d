#ifndef ENTWIT_PHOTONSIM_HPP
#define ENTWIT_PHOTONSIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "entwit/parallel.hpp"
#include "entwit/rng.hpp"
#include "entwit/witness.hpp"

namespace entwit {

/// Per-arm analyzer setting: the counter fires when the photon projects onto
/// the +a Bloch direction (transmitted PBS port).
struct ArmSetting {
  Vec3r a = Vec3r::UnitZ();
};

struct DetectorSetting {
  ArmSetting arm1, arm2;
};

/// Bloch direction analyzed by a QWP at theta_q followed by an HWP at
/// theta_h in front of an H-transmitting PBS.
Vec3r direction_from_waveplates(double theta_q, double theta_h);

/// Waveplate angles realizing direction a (canonical gauge; exact inverse of
/// direction_from_waveplates).
void waveplates_from_direction(const Vec3r& a, double& theta_q, double& theta_h);

/// Counts observed at one detector setting. n1/n2 are singles among the N
/// filter-transmitted pairs, n12 the coincidences, M the injected pairs.
struct CountRecord {
  DetectorSetting setting;
  std::int64_t M = 0;
  std::int64_t N = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::int64_t n12 = 0;
  double duration_s = 0.0;  // 10 s per 5e4 pairs

  bool consistent() const { return 0 <= n12 && n12 <= std::min(n1, n2) && std::max(n1, n2) <= N && N <= M; }
};

/// Count tuple as real numbers; sampled records convert to it, the
/// infinite-count mode produces it directly with expected values.
struct Counts {
  double M = 0, N = 0, n1 = 0, n2 = 0, n12 = 0;
  static Counts of(const CountRecord& r) {
    return {double(r.M), double(r.N), double(r.n1), double(r.n2), double(r.n12)};
  }
};

struct ExperimentConfig {
  std::string true_state = "decohered-demo";
  std::int64_t pairs_per_setting = 50000;
  std::uint64_t seed = 1;
  bool noiseless = false;
  double filter_phase_imperfection = 0.0;  // radians, on the filtered axis
  double tol_dop = 0.1;
};

/// Exact outcome probabilities at one setting: the four +-/-+ joint events
/// among transmitted pairs plus the filtered-out event.
struct OutcomeProbs {
  double pp = 0, pm = 0, mp = 0, mm = 0, lost = 0;
  double pass() const { return pp + pm + mp + mm; }
};

OutcomeProbs outcome_probs(const DensityMatrix& rho,
                           const std::vector<CompositeArmOperator>& composite,
                           const DetectorSetting& setting);

/// One multinomial draw of M pairs over the five outcomes.
/// Throws ExtinctionError when the pass probability < 1e-9.
CountRecord measure_setting(const DensityMatrix& rho,
                            const std::vector<CompositeArmOperator>& composite,
                            const DetectorSetting& setting, std::int64_t M,
                            RngStream& rng);

/// Expected counts at M pairs (no sampling).
Counts measure_setting_exact(const DensityMatrix& rho,
                             const std::vector<CompositeArmOperator>& composite,
                             const DetectorSetting& setting, std::int64_t M);

/// (4 n12 - 2 n1 - 2 n2 + N)/N; equals a^T T b of the post-filter state in
/// the infinite-count limit. Throws on N = 0.
double estimate_correlation(const Counts& c);

/// Bloch estimate of one arm from three Pauli settings (x, y, z on that arm,
/// partner analyzer parked at z), r_i = (2 n_j - N)/N with binomial errors.
BlochEstimate estimate_local_bloch(const DensityMatrix& rho,
                                   const std::vector<CompositeArmOperator>& composite,
                                   int arm, std::int64_t M, RngStream& rng,
                                   bool noiseless = false);

/// Stokes estimate from the 16-setting protocol: analyzer directions
/// {x, y, z, -z} on each arm; the sign-flipped rows/columns fold onto the
/// canonical 9 correlation entries and the marginals come from the same
/// records. Optionally returns the raw records.
StokesTensor full_stokes_16(const DensityMatrix& rho,
                            const std::vector<CompositeArmOperator>& composite,
                            std::int64_t M, RngStream& rng, bool noiseless = false,
                            std::vector<CountRecord>* records = nullptr);

/// Folds a complete 16-setting record set (the full_stokes_16 layout) back
/// into a Stokes estimate. Throws on an incomplete or mismatched set.
StokesTensor stokes_from_16_records(const std::vector<CountRecord>& records);

/// Measured lambdas via the 12-setting protocol: the SVD of the estimated T
/// supplies candidate extremum directions (u_l, v_l); each lambda is the
/// magnitude of one correlation assembled from the 4 sign settings
/// (+-u_l, +-v_l). `direction_error` rotates every u_l, v_l by that angle
/// (cyclically toward the next singular direction) before measuring, to probe
/// the quadratic robustness of extremum sampling.
LambdaTriple lambda_12(const DensityMatrix& rho,
                       const std::vector<CompositeArmOperator>& composite,
                       const StokesTensor& S_hat, std::int64_t M, RngStream& rng,
                       bool noiseless = false, double direction_error = 0.0);

/// One grid point of a two-axis coincidence scan.
struct ScanPoint {
  double theta1 = 0, theta2 = 0;
  CountRecord rec;
  double E = 0;  // estimate_correlation of rec
};

/// Coincidence scan over the plane spanned by extremum directions l and lp:
/// a(t1) = cos t1 u_l + sin t1 u_lp, b(t2) = cos t2 v_l +- sin t2 v_lp with
/// signs fixed so E(0,0) = +lambda_l and E(pi/2, pi/2) = +lambda_lp; theta
/// runs over linspace(0, pi, grid) on both axes. At the distilled state
/// E(t1,t2) = lambda_l cos t1 cos t2 + lambda_lp sin t1 sin t2. Grid points
/// own disjoint rng substreams, so Serial and OpenMP agree bit for bit.
std::vector<ScanPoint> coincidence_scan(const DensityMatrix& rho,
                                        const std::vector<CompositeArmOperator>& composite,
                                        const LambdaTriple& lambda, int l, int lp,
                                        int grid, std::int64_t M, const RngStream& rng,
                                        bool noiseless = false,
                                        ExecPolicy policy = default_policy());

std::string scan_to_csv(const std::vector<ScanPoint>& scan);
std::string records_to_csv(const std::vector<CountRecord>& records);

/// MarginalEstimator backed by measure_setting, consuming M pairs per
/// setting from per-(step, arm) substreams of `rng`.
MarginalEstimator sampled_marginal_estimator(const DensityMatrix& rho, std::int64_t M,
                                             RngStream rng, bool noiseless = false);

}  // namespace entwit

#endif
