#ifndef ENTWIT_DISTILL_HPP
#define ENTWIT_DISTILL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "entwit/slocc.hpp"

namespace entwit {

/// One row of the distillation log. k = 0 records the unfiltered state.
/// dops and p_effs are indexed by arm (size = number of arms); for two
/// qubits dops[0]/dops[1] are DOP 1 and DOP 2.
struct DistillationStep {
  int k = 0;
  int arm = 0;  // arm adjusted at this step; 0 for the k = 0 row
  LocalFilter filter;
  std::vector<double> dops;
  double pass_prob = 1.0;  // cumulative N/M
  std::vector<double> p_effs;
  double s0 = 1.0;  // pass_prob / sqrt(prod p_effs)
  /// Composite operators after this step: the dialled-in settings and, when a
  /// filter phase imperfection is configured, the operators actually applied.
  std::vector<CompositeArmOperator> composites;
  std::vector<CompositeArmOperator> composites_physical;
};

struct DistillationTrace {
  std::vector<DistillationStep> steps;

  /// Steps whose cumulative pass probability exceeds the previous step's
  /// (monotonicity counterexamples; logged, never silently fixed).
  std::vector<int> pass_prob_violations(double tol = 1e-12) const;
};

struct DistillationResult {
  DensityMatrix rho_dis;  // normalized
  std::vector<CompositeArmOperator> composite;
  DistillationTrace trace;
  bool converged = false;
  /// Sampled mode only: the binomial error of the DOP estimate exceeded
  /// tol_dop at the stopping step, so the stopping rule was noise-limited.
  bool noise_limited = false;

  double pass_prob() const { return trace.steps.back().pass_prob; }
  double s0() const { return trace.steps.back().s0; }
};

/// Filter that erases the polarization of a single-qubit state: f is the
/// majority eigenvector, p the eigenvalue ratio mu_min/mu_max, so that
/// K rho K^dag is proportional to identity. Near-pure marginals
/// (mu_min < 1e-12) throw ExtinctionError; degenerate ones give p = 1.
LocalFilter erasing_filter(const DensityMatrix& rho1, int arm = 0);

/// Same filter computed from a Bloch vector estimate. With clip = true a
/// norm at or beyond the sphere is pulled just inside it instead of raising
/// ExtinctionError (noisy estimates may overshoot).
LocalFilter erasing_filter_from_bloch(const Vec3r& r, int arm = 0, bool clip = false);

/// Iterative normal-form distillation with exact marginals: alternately
/// erase each arm's DOP (arm 1 first) until max DOP <= tol_dop or the step
/// budget is exhausted.
DistillationResult distill_iterate(const DensityMatrix& rho, double tol_dop = 1e-8,
                                   int max_steps = 50);

/// Marginal estimate delivered by a measurement backend: Bloch vector,
/// per-component binomial sigma, and the transmitted/injected pair counts
/// consumed obtaining it.
struct BlochEstimate {
  Vec3r r = Vec3r::Zero();
  Vec3r sigma = Vec3r::Zero();
  double pairs_transmitted = 0;
  double pairs_injected = 0;
};

/// Estimator callback: (composites so far, arm, distillation step) -> marginal
/// estimate of that arm under the current filters.
using MarginalEstimator =
    std::function<BlochEstimate(const std::vector<CompositeArmOperator>&, int arm, int step)>;

/// distill_iterate driven by estimated marginals; stopping uses estimated
/// DOPs (default tol 0.1, the shot-noise stopping point) and the recorded
/// pass_prob is the measured transmitted fraction. filter_phase applies the
/// group-delay imperfection to the physically applied filters while the
/// bookkeeping keeps the dialled-in settings.
DistillationResult distill_iterate_sampled(const DensityMatrix& rho,
                                           const MarginalEstimator& estimate,
                                           double tol_dop = 0.1, int max_steps = 50,
                                           double filter_phase = 0.0);

/// N-arm generalization (N in {2, 3}): cyclic sweeps arm 1..N until every
/// single-arm DOP <= tol. s0 uses the product of all arm transmissions.
DistillationResult distill_cyclic(const DensityMatrix& rho, double tol_dop, int max_steps);

/// Writes the two-qubit trace as CSV:
/// k,arm,f_re0,f_im0,f_re1,f_im1,p,dop1,dop2,pass_prob,p1_eff,p2_eff,s0
std::string trace_to_csv(const DistillationTrace& trace);

}  // namespace entwit

#endif
