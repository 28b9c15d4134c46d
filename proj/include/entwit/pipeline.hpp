#ifndef ENTWIT_PIPELINE_HPP
#define ENTWIT_PIPELINE_HPP

#include <string>
#include <vector>

#include "entwit/oracle.hpp"

namespace entwit {

/// Witness data taken at one distillation step: the measured lambdas and s0,
/// the resulting bounds, and the oracle concurrences for comparison.
struct DemoStepReport {
  int k = 0;
  WitnessReport report;
  double c_oracle_dis = 0.0;  // Wootters C of the step's distilled state
  double minus2_trW = 0.0;
  double minus2_trW_dis = 0.0;
};

struct DemoSummary {
  DistillationResult distillation;
  std::vector<DemoStepReport> steps;
  double c_oracle = 0.0;  // Wootters C of the input state
  std::vector<std::string> files;
};

/// Full pipeline: sampled distillation, then per step the 16-setting frame
/// determination and the 12-setting lambda measurement. Writes trace.csv,
/// witness.json and manifest.json into out_dir (skipped when out_dir empty).
DemoSummary run_demo(const ExperimentConfig& cfg, const std::string& out_dir,
                     int max_steps = 50);

/// Pre- and post-distillation coincidence scans over the (l, lp) extremum
/// plane; writes scan_k0_l{l}{lp}.csv and scan_dis_l{l}{lp}.csv.
std::vector<std::string> run_scan(const ExperimentConfig& cfg, int l, int lp, int grid,
                                  const std::string& out_dir,
                                  ExecPolicy policy = default_policy());

/// Efficiency comparison; writes efficiency.json and trials.csv.
EfficiencyReport run_compare(const ExperimentConfig& cfg, std::int64_t budget, int trials,
                             const std::string& out_dir,
                             ExecPolicy policy = default_policy());

/// FNV-1a 64-bit hash of a byte string, as fixed-width hex.
std::string fnv64_hex(const std::string& bytes);

/// Writes `content` to out_dir/name and records it in the caller's file list.
std::string write_artifact(const std::string& out_dir, const std::string& name,
                           const std::string& content);

/// manifest.json: the configuration echo, every emitted file with its hash,
/// and the artifact version.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& files);

extern const char* kArtifactVersion;

}  // namespace entwit

#endif
