#include "entwit/distill.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace entwit {

namespace {

DensityMatrix apply_composites(const DensityMatrix& rho,
                               const std::vector<CompositeArmOperator>& comp) {
  MatX op = MatX::Identity(1, 1);
  for (const auto& c : comp) op = kron(op, MatX(c.A));
  DensityMatrix out(op * rho.m * op.adjoint(), false);
  if (out.trace() < 1e-12)
    throw ExtinctionError("distillation drove the state to extinction");
  return out;
}

struct EngineSetup {
  double tol_dop = 1e-8;
  int max_steps = 50;
  double filter_phase = 0.0;
  const MarginalEstimator* estimator = nullptr;  // nullptr: exact marginals
};

double max_dop(const std::vector<BlochEstimate>& est) {
  double d = 0.0;
  for (const auto& e : est) d = std::max(d, e.r.norm());
  return d;
}

DistillationResult run_engine(const DensityMatrix& rho, const EngineSetup& cfg) {
  const int arms = rho.num_qubits();
  if (arms < 2) throw std::invalid_argument("distillation needs at least two arms");
  if (std::abs(rho.trace() - 1.0) > 1e-9)
    throw std::invalid_argument("distillation expects a normalized input state");

  std::vector<CompositeArmOperator> intended(arms), physical(arms);
  for (int j = 0; j < arms; ++j) intended[j].arm = physical[j].arm = j + 1;

  const auto estimate_all = [&](int step) {
    std::vector<BlochEstimate> est(arms);
    if (cfg.estimator) {
      for (int j = 0; j < arms; ++j) est[j] = (*cfg.estimator)(physical, j + 1, step);
    } else {
      const DensityMatrix cur = apply_composites(rho, physical);
      const DensityMatrix curn = cur.renormalized();
      for (int j = 0; j < arms; ++j) {
        est[j].r = bloch_vector(partial_trace_arm(curn, j + 1)).r;
        est[j].pairs_transmitted = cur.trace();
        est[j].pairs_injected = 1.0;
      }
    }
    return est;
  };

  DistillationTrace trace;
  const auto record = [&](int k, int arm, const LocalFilter& filt,
                          const std::vector<BlochEstimate>& est) {
    DistillationStep row;
    row.k = k;
    row.arm = arm;
    row.filter = filt;
    double n = 0.0, m = 0.0;
    for (const auto& e : est) {
      row.dops.push_back(e.r.norm());
      n += e.pairs_transmitted;
      m += e.pairs_injected;
    }
    row.pass_prob = m > 0.0 ? n / m : 1.0;
    double prod = 1.0;
    for (const auto& c : intended) {
      row.p_effs.push_back(c.p_eff);
      prod *= c.p_eff;
    }
    row.s0 = row.pass_prob / std::sqrt(prod);
    row.composites = intended;
    row.composites_physical = physical;
    trace.steps.push_back(std::move(row));
  };

  std::vector<BlochEstimate> est = estimate_all(0);
  record(0, 0, LocalFilter{}, est);

  bool converged = max_dop(est) <= cfg.tol_dop;
  for (int k = 1; k <= cfg.max_steps && !converged; ++k) {
    const int arm = (k - 1) % arms + 1;
    const LocalFilter filt =
        erasing_filter_from_bloch(est[arm - 1].r, arm, /*clip=*/cfg.estimator != nullptr);
    intended[arm - 1].compose(filter_kraus(filt.f, filt.p));
    physical[arm - 1].compose(
        filter_kraus_imperfect(filt.f, filt.p, cfg.filter_phase));
    est = estimate_all(k);
    record(k, arm, filt, est);
    converged = max_dop(est) <= cfg.tol_dop;
  }

  DistillationResult res;
  res.rho_dis = apply_composites(rho, physical).renormalized();
  res.composite = intended;
  res.trace = std::move(trace);
  res.converged = converged;
  double sigma = 0.0;
  for (const auto& e : est) sigma = std::max(sigma, e.sigma.maxCoeff());
  res.noise_limited = sigma > cfg.tol_dop;
  return res;
}

}  // namespace

std::vector<int> DistillationTrace::pass_prob_violations(double tol) const {
  std::vector<int> bad;
  for (size_t i = 1; i < steps.size(); ++i)
    if (steps[i].pass_prob > steps[i - 1].pass_prob + tol) bad.push_back(steps[i].k);
  return bad;
}

LocalFilter erasing_filter_from_bloch(const Vec3r& r_in, int arm, bool clip) {
  Vec3r r = r_in;
  double n = r.norm();
  if (n <= 1e-12) return LocalFilter{arm, Vec2(1.0, 0.0), 1.0};
  if (n > 1.0 - 2e-12) {
    if (!clip)
      throw ExtinctionError("near-extinction: erasing a pure marginal requires p -> 0");
    r *= (1.0 - 1e-9) / n;
    n = 1.0 - 1e-9;
  }
  const Vec3r d = r / n;
  const double xy = std::hypot(d.x(), d.y());
  Vec2 f;
  if (xy < 1e-15) {
    f = d.z() > 0.0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
  } else {
    const cplx phase(d.x() / xy, d.y() / xy);
    f << std::sqrt((1.0 + d.z()) / 2.0), phase * std::sqrt((1.0 - d.z()) / 2.0);
  }
  return LocalFilter{arm, f, (1.0 - n) / (1.0 + n)};
}

LocalFilter erasing_filter(const DensityMatrix& rho1, int arm) {
  return erasing_filter_from_bloch(bloch_vector(rho1).r, arm, /*clip=*/false);
}

DistillationResult distill_iterate(const DensityMatrix& rho, double tol_dop, int max_steps) {
  if (rho.dim() != 4) throw std::invalid_argument("distill_iterate expects a two-qubit state");
  EngineSetup cfg;
  cfg.tol_dop = tol_dop;
  cfg.max_steps = max_steps;
  return run_engine(rho, cfg);
}

DistillationResult distill_iterate_sampled(const DensityMatrix& rho,
                                           const MarginalEstimator& estimate,
                                           double tol_dop, int max_steps,
                                           double filter_phase) {
  if (rho.dim() != 4)
    throw std::invalid_argument("distill_iterate_sampled expects a two-qubit state");
  EngineSetup cfg;
  cfg.tol_dop = tol_dop;
  cfg.max_steps = max_steps;
  cfg.filter_phase = filter_phase;
  cfg.estimator = &estimate;
  return run_engine(rho, cfg);
}

DistillationResult distill_cyclic(const DensityMatrix& rho, double tol_dop, int max_steps) {
  EngineSetup cfg;
  cfg.tol_dop = tol_dop;
  cfg.max_steps = max_steps;
  return run_engine(rho, cfg);
}

std::string trace_to_csv(const DistillationTrace& trace) {
  std::string out = "k,arm,f_re0,f_im0,f_re1,f_im1,p,dop1,dop2,pass_prob,p1_eff,p2_eff,s0\n";
  char buf[512];
  for (const auto& s : trace.steps) {
    if (s.dops.size() != 2)
      throw std::invalid_argument("trace_to_csv expects a two-qubit trace");
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.k, s.arm, s.filter.f(0).real(), s.filter.f(0).imag(),
                  s.filter.f(1).real(), s.filter.f(1).imag(), s.filter.p, s.dops[0],
                  s.dops[1], s.pass_prob, s.p_effs[0], s.p_effs[1], s.s0);
    out += buf;
  }
  return out;
}

}  // namespace entwit
