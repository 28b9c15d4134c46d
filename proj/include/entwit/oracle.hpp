#ifndef ENTWIT_ORACLE_HPP
#define ENTWIT_ORACLE_HPP

#include <string>
#include <vector>

#include "entwit/photonsim.hpp"

namespace entwit {

/// Wootters concurrence C = max{0, s1 - s2 - s3 - s4}, the s_i descending
/// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
/// The reference quantity every witness bound is tested against.
double wootters_concurrence(const DensityMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Linear-inversion tomography from 16-setting records with PSD projection:
/// negative eigenvalues clipped to zero, trace renormalized.
DensityMatrix qst_reconstruct(const std::vector<CountRecord>& records);

/// Projects a Hermitian matrix onto the PSD cone and renormalizes the trace.
DensityMatrix psd_project(const DensityMatrix& rho);

struct EfficiencyReport {
  std::int64_t shots_witness = 0;
  std::int64_t shots_qst = 0;
  double std_witness = 0.0;
  double std_qst = 0.0;
  double mean_witness = 0.0;
  double mean_qst = 0.0;
  int trials = 0;
  std::string target = "C(rho_dis)";
  bool witness_smaller = false;
  double ratio = 0.0;  // std_qst / std_witness

  std::string to_json() const;
};

struct EfficiencyTrial {
  int trial = 0;
  double c_witness = 0.0;
  double c_qst = 0.0;
};

/// Matched-budget variance comparison on config.true_state. The witness
/// scheme spends the budget on distillation rounds plus the 16 + 12
/// settings; the QST baseline spends the full budget on 16 settings of the
/// exactly distilled state and estimates the concurrence from the
/// reconstruction. Baseline is PSD-projected linear inversion, not MLE.
/// Trials run on per-index substreams; Serial and OpenMP results agree.
EfficiencyReport efficiency_compare(const ExperimentConfig& config, std::int64_t budget,
                                    int trials, std::vector<EfficiencyTrial>* per_trial = nullptr,
                                    ExecPolicy policy = default_policy());

std::string trials_to_csv(const std::vector<EfficiencyTrial>& trials);

}  // namespace entwit

#endif
