#include "entwit/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace entwit {

const char* kArtifactVersion = "0.1.0";

namespace {

// substream tags for the pipeline stages
constexpr std::uint64_t kTagDistill = 1;
constexpr std::uint64_t kTagWitnessStage = 2;

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["state"] = cfg.true_state;
  j["pairs_per_setting"] = cfg.pairs_per_setting;
  j["seed"] = cfg.seed;
  j["noiseless"] = cfg.noiseless;
  j["filter_phase_imperfection"] = cfg.filter_phase_imperfection;
  j["tol_dop"] = cfg.tol_dop;
  return j;
}

double measured_pass(const std::vector<CountRecord>& recs) {
  double n = 0, m = 0;
  for (const auto& r : recs) {
    n += double(r.N);
    m += double(r.M);
  }
  return m > 0 ? n / m : 1.0;
}

}  // namespace

std::string fnv64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

std::string write_artifact(const std::string& out_dir, const std::string& name,
                           const std::string& content) {
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / name).string();
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw std::runtime_error("failed to write " + path);
  return path;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["version"] = kArtifactVersion;
  j["command"] = command;
  j["config"] = config_json(cfg);
  auto& outs = j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    std::ifstream is(f, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    outs.push_back({{"path", std::filesystem::path(f).filename().string()},
                    {"fnv64", fnv64_hex(bytes)}});
  }
  write_artifact(out_dir, "manifest.json", j.dump(2) + "\n");
}

DemoSummary run_demo(const ExperimentConfig& cfg, const std::string& out_dir,
                     int max_steps) {
  const DensityMatrix rho = states::parse(cfg.true_state);
  if (rho.dim() != 4) throw std::invalid_argument("demo expects a two-qubit state");
  const RngStream base(cfg.seed);

  DemoSummary sum;
  sum.c_oracle = wootters_concurrence(rho);

  const auto estimator = sampled_marginal_estimator(
      rho, cfg.pairs_per_setting, base.substream(kTagDistill), cfg.noiseless);
  sum.distillation = distill_iterate_sampled(rho, estimator, cfg.tol_dop, max_steps,
                                             cfg.filter_phase_imperfection);

  for (const auto& step : sum.distillation.trace.steps) {
    RngStream stage = base.substream(kTagWitnessStage).substream(step.k);
    std::vector<CountRecord> recs;
    RngStream stokes_rng = stage.substream(0);
    const StokesTensor s_hat =
        full_stokes_16(rho, step.composites_physical, cfg.pairs_per_setting, stokes_rng,
                       cfg.noiseless, &recs);
    double pass;
    if (cfg.noiseless) {
      pass = apply_slocc(rho, step.composites_physical[0].A, step.composites_physical[1].A)
                 .trace();
    } else {
      pass = measured_pass(recs);
    }
    double p_prod = 1.0;
    for (double p : step.p_effs) p_prod *= p;
    const double s0_hat = std::min(1.0, pass / std::sqrt(p_prod));

    RngStream lambda_rng = stage.substream(1);
    const LambdaTriple lam = lambda_12(rho, step.composites_physical, s_hat,
                                       cfg.pairs_per_setting, lambda_rng, cfg.noiseless);

    DemoStepReport rep;
    rep.k = step.k;
    rep.report = witness_value(lam, s0_hat);
    rep.report.optimal = &step == &sum.distillation.trace.steps.back() &&
                         sum.distillation.converged;
    rep.c_oracle_dis = wootters_concurrence(
        apply_slocc(rho, step.composites_physical[0].A, step.composites_physical[1].A)
            .renormalized());
    rep.minus2_trW = -2.0 * rep.report.trW;
    rep.minus2_trW_dis = -2.0 * rep.report.trW_dis;
    sum.steps.push_back(rep);
  }

  if (!out_dir.empty()) {
    sum.files.push_back(write_artifact(out_dir, "trace.csv",
                                       trace_to_csv(sum.distillation.trace)));
    nlohmann::ordered_json j;
    j["c_oracle"] = sum.c_oracle;
    j["converged"] = sum.distillation.converged;
    auto& steps = j["steps"] = nlohmann::ordered_json::array();
    for (const auto& s : sum.steps) {
      nlohmann::ordered_json row = nlohmann::ordered_json::parse(s.report.to_json());
      row["k"] = s.k;
      row["minus2_trW"] = s.minus2_trW;
      row["minus2_trW_dis"] = s.minus2_trW_dis;
      row["c_oracle_rho"] = sum.c_oracle;
      row["c_oracle_dis"] = s.c_oracle_dis;
      steps.push_back(row);
    }
    j["final"] = nlohmann::ordered_json::parse(sum.steps.back().report.to_json());
    sum.files.push_back(write_artifact(out_dir, "witness.json", j.dump(2) + "\n"));
    write_manifest(out_dir, "demo", cfg, sum.files);
  }
  return sum;
}

std::vector<std::string> run_scan(const ExperimentConfig& cfg, int l, int lp, int grid,
                                  const std::string& out_dir, ExecPolicy policy) {
  const DensityMatrix rho = states::parse(cfg.true_state);
  if (rho.dim() != 4) throw std::invalid_argument("scan expects a two-qubit state");
  const RngStream base(cfg.seed);
  std::vector<std::string> files;

  const std::vector<CompositeArmOperator> none{CompositeArmOperator{1},
                                               CompositeArmOperator{2}};
  const LambdaTriple lam0 = lambda_svd(stokes_tensor(rho).T());
  const auto scan0 = coincidence_scan(rho, none, lam0, l, lp, grid,
                                      cfg.pairs_per_setting, base.substream(10),
                                      cfg.noiseless, policy);
  const std::string suffix = "_l" + std::to_string(l) + std::to_string(lp) + ".csv";
  files.push_back(write_artifact(out_dir, "scan_k0" + suffix, scan_to_csv(scan0)));

  const DistillationResult dis = distill_iterate(rho, 1e-10, 200);
  const LambdaTriple lam_dis = lambda_svd(stokes_tensor(dis.rho_dis).T());
  const auto scan1 = coincidence_scan(rho, dis.trace.steps.back().composites_physical,
                                      lam_dis, l, lp, grid, cfg.pairs_per_setting,
                                      base.substream(11), cfg.noiseless, policy);
  files.push_back(write_artifact(out_dir, "scan_dis" + suffix, scan_to_csv(scan1)));
  write_manifest(out_dir, "scan", cfg, files);
  return files;
}

EfficiencyReport run_compare(const ExperimentConfig& cfg, std::int64_t budget, int trials,
                             const std::string& out_dir, ExecPolicy policy) {
  std::vector<EfficiencyTrial> rows;
  const EfficiencyReport rep = efficiency_compare(cfg, budget, trials, &rows, policy);
  if (!out_dir.empty()) {
    std::vector<std::string> files;
    files.push_back(write_artifact(out_dir, "efficiency.json", rep.to_json() + "\n"));
    files.push_back(write_artifact(out_dir, "trials.csv", trials_to_csv(rows)));
    write_manifest(out_dir, "compare", cfg, files);
  }
  return rep;
}

}  // namespace entwit
