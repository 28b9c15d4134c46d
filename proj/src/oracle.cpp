#include "entwit/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "entwit/parallel.hpp"
#include "json.hpp"

namespace entwit {

double wootters_concurrence(const DensityMatrix& rho_in) {
  if (rho_in.dim() != 4)
    throw std::invalid_argument("wootters_concurrence expects a two-qubit state");
  const DensityMatrix rho = rho_in.normalized ? rho_in : rho_in.renormalized();
  const MatX yy = kron(pauli(2), pauli(2));
  const MatX tilde = yy * rho.m.conjugate() * yy;
  Eigen::ComplexEigenSolver<Mat4> es(Mat4(rho.m * tilde), false);
  std::array<double, 4> mu{};
  for (int i = 0; i < 4; ++i) {
    const double v = es.eigenvalues()(i).real();
    if (v < -1e-10) throw std::invalid_argument("invalid state: spin-flip spectrum negative");
    mu[i] = std::max(0.0, v);
  }
  std::sort(mu.begin(), mu.end(), std::greater<>());
  const double c = std::sqrt(mu[0]) - std::sqrt(mu[1]) - std::sqrt(mu[2]) - std::sqrt(mu[3]);
  return std::max(0.0, c);
}

namespace {

MatX herm_sqrt(const MatX& a) {
  Eigen::SelfAdjointEigenSolver<MatX> es(a);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const MatX sr = herm_sqrt(rho.normalized ? rho.m : rho.renormalized().m);
  const MatX inner = sr * (sigma.normalized ? sigma.m : sigma.renormalized().m) * sr;
  Eigen::SelfAdjointEigenSolver<MatX> es(inner, Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

DensityMatrix psd_project(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (rho.m + rho.m.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  const double tr = ev.sum();
  if (tr <= 0.0) throw std::invalid_argument("psd_project: nothing left after clipping");
  MatX out = es.eigenvectors() * (ev / tr).asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(out, true);
}

DensityMatrix qst_reconstruct(const std::vector<CountRecord>& records) {
  const StokesTensor s_hat = stokes_from_16_records(records);
  return psd_project(from_stokes(s_hat.S));
}

EfficiencyReport efficiency_compare(const ExperimentConfig& config, std::int64_t budget,
                                    int trials, std::vector<EfficiencyTrial>* per_trial,
                                    ExecPolicy policy) {
  if (budget < 16000) throw std::invalid_argument("budget must be at least 16 * 10^3 pairs");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const DensityMatrix rho = states::parse(config.true_state);
  const std::int64_t M = config.pairs_per_setting;

  // the QST baseline quantifies the exactly distilled state with the full
  // budget; the witness scheme pays for its own distillation rounds
  const DistillationResult exact = distill_iterate(rho, 1e-10, 200);
  const std::int64_t m_qst = budget / 16;

  std::vector<EfficiencyTrial> rows(trials);
  std::vector<std::int64_t> used_witness(trials, 0);
  const RngStream base(config.seed);

  for_each_index(size_t(trials), policy, [&](size_t t) {
    RngStream trial_rng = base.substream(t);
    EfficiencyTrial row;
    row.trial = int(t);

    // witness scheme: sampled distillation + 16 + 12 settings
    RngStream distill_rng = trial_rng.substream(1);
    const auto estimator = sampled_marginal_estimator(rho, M, distill_rng, config.noiseless);
    const DistillationResult dis = distill_iterate_sampled(
        rho, estimator, config.tol_dop, 50, config.filter_phase_imperfection);
    RngStream stokes_rng = trial_rng.substream(2);
    std::vector<CountRecord> recs;
    const StokesTensor s_hat =
        full_stokes_16(rho, dis.trace.steps.back().composites_physical, M, stokes_rng,
                       config.noiseless, &recs);
    RngStream lambda_rng = trial_rng.substream(3);
    const LambdaTriple lam = lambda_12(rho, dis.trace.steps.back().composites_physical,
                                       s_hat, M, lambda_rng, config.noiseless);
    row.c_witness = std::max(
        0.0, -2.0 * (1.0 - lam.lambda(0) - lam.lambda(1) + lam.q * lam.lambda(2)) / 4.0);
    used_witness[t] =
        std::int64_t(dis.trace.steps.size()) * 6 * M + 16 * M + 12 * M;

    // QST baseline on the distilled state
    RngStream qst_rng = trial_rng.substream(4);
    std::vector<CountRecord> qst_recs;
    full_stokes_16(exact.rho_dis, {CompositeArmOperator{1}, CompositeArmOperator{2}},
                   m_qst, qst_rng, config.noiseless, &qst_recs);
    row.c_qst = wootters_concurrence(qst_reconstruct(qst_recs));

    rows[t] = row;
  });

  EfficiencyReport rep;
  rep.trials = trials;
  double mw = 0, mq = 0;
  for (const auto& r : rows) {
    mw += r.c_witness;
    mq += r.c_qst;
  }
  mw /= trials;
  mq /= trials;
  double vw = 0, vq = 0;
  for (const auto& r : rows) {
    vw += (r.c_witness - mw) * (r.c_witness - mw);
    vq += (r.c_qst - mq) * (r.c_qst - mq);
  }
  rep.mean_witness = mw;
  rep.mean_qst = mq;
  rep.std_witness = trials > 1 ? std::sqrt(vw / (trials - 1)) : 0.0;
  rep.std_qst = trials > 1 ? std::sqrt(vq / (trials - 1)) : 0.0;
  for (auto u : used_witness) rep.shots_witness += u;
  rep.shots_qst = std::int64_t(trials) * m_qst * 16;
  rep.witness_smaller = rep.std_witness < rep.std_qst;
  rep.ratio = rep.std_witness > 0.0 ? rep.std_qst / rep.std_witness : 0.0;
  if (per_trial) *per_trial = rows;
  return rep;
}

std::string trials_to_csv(const std::vector<EfficiencyTrial>& trials) {
  std::string out = "trial,c_witness,c_qst\n";
  char buf[128];
  for (const auto& t : trials) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", t.trial, t.c_witness, t.c_qst);
    out += buf;
  }
  return out;
}

std::string EfficiencyReport::to_json() const {
  nlohmann::ordered_json j;
  j["note"] = "QST baseline is PSD-projected linear inversion, not maximum likelihood";
  j["target"] = target;
  j["trials"] = trials;
  j["shots_witness"] = shots_witness;
  j["shots_qst"] = shots_qst;
  j["mean_witness"] = mean_witness;
  j["mean_qst"] = mean_qst;
  j["std_witness"] = std_witness;
  j["std_qst"] = std_qst;
  j["witness_smaller"] = witness_smaller;
  j["ratio_qst_over_witness"] = ratio;
  return j.dump(2);
}

}  // namespace entwit
