#include "entwit/photonsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace entwit {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat2 bloch_projector(const Vec3r& a, double sign) {
  Mat2 p = 0.5 * Mat2::Identity();
  for (int i = 0; i < 3; ++i) p += 0.5 * sign * a(i) * pauli(i + 1);
  return p;
}

// The four analyzer directions of the 16-setting protocol, as (axis, sign)
// against the Cartesian basis: x, y, z, -z.
constexpr int kAxis16[4] = {0, 1, 2, 2};
constexpr double kSign16[4] = {1.0, 1.0, 1.0, -1.0};

Vec3r dir16(int i) { return kSign16[i] * Vec3r::Unit(kAxis16[i]); }

double singles_ratio(const Counts& c, int arm) {
  if (c.N <= 0.0) throw ExtinctionError("no transmitted pairs at this setting");
  const double n = arm == 1 ? c.n1 : c.n2;
  return (2.0 * n - c.N) / c.N;
}

Counts draw_or_expect(const DensityMatrix& rho,
                      const std::vector<CompositeArmOperator>& composite,
                      const DetectorSetting& st, std::int64_t M, RngStream& rng,
                      bool noiseless, CountRecord* rec_out = nullptr) {
  if (noiseless) {
    const Counts c = measure_setting_exact(rho, composite, st, M);
    if (rec_out) {
      // expected counts, rounded; only used for record export in exact mode
      *rec_out = CountRecord{st,
                            M,
                            std::int64_t(std::llround(c.N)),
                            std::int64_t(std::llround(c.n1)),
                            std::int64_t(std::llround(c.n2)),
                            std::int64_t(std::llround(c.n12)),
                            double(M) * 2e-4};
    }
    return c;
  }
  const CountRecord rec = measure_setting(rho, composite, st, M, rng);
  if (rec_out) *rec_out = rec;
  return Counts::of(rec);
}

}  // namespace

Vec3r direction_from_waveplates(double theta_q, double theta_h) {
  const double delta = 2.0 * theta_h - theta_q;
  return Vec3r(std::cos(2.0 * delta) * std::sin(2.0 * theta_q), -std::sin(2.0 * delta),
               std::cos(2.0 * delta) * std::cos(2.0 * theta_q));
}

void waveplates_from_direction(const Vec3r& a, double& theta_q, double& theta_h) {
  if (std::abs(a.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("analyzer direction must be a unit vector");
  const double two_delta = std::asin(std::clamp(-a.y(), -1.0, 1.0));
  const double xz = std::hypot(a.x(), a.z());
  theta_q = xz < 1e-12 ? 0.0 : 0.5 * std::atan2(a.x(), a.z());
  theta_h = 0.5 * (0.5 * two_delta + theta_q);
}

OutcomeProbs outcome_probs(const DensityMatrix& rho,
                           const std::vector<CompositeArmOperator>& composite,
                           const DetectorSetting& setting) {
  if (rho.dim() != 4) throw std::invalid_argument("outcome_probs expects a two-qubit state");
  if (composite.size() != 2)
    throw std::invalid_argument("outcome_probs expects two arm operators");
  const MatX op = kron(composite[0].A, composite[1].A);
  const MatX filtered = op * rho.m * op.adjoint();
  const Mat2 p1p = bloch_projector(setting.arm1.a, +1.0);
  const Mat2 p1m = bloch_projector(setting.arm1.a, -1.0);
  const Mat2 p2p = bloch_projector(setting.arm2.a, +1.0);
  const Mat2 p2m = bloch_projector(setting.arm2.a, -1.0);
  OutcomeProbs pr;
  pr.pp = std::max(0.0, (filtered * kron(p1p, p2p)).trace().real());
  pr.pm = std::max(0.0, (filtered * kron(p1p, p2m)).trace().real());
  pr.mp = std::max(0.0, (filtered * kron(p1m, p2p)).trace().real());
  pr.mm = std::max(0.0, (filtered * kron(p1m, p2m)).trace().real());
  pr.lost = std::max(0.0, rho.trace() - pr.pass());
  return pr;
}

CountRecord measure_setting(const DensityMatrix& rho,
                            const std::vector<CompositeArmOperator>& composite,
                            const DetectorSetting& setting, std::int64_t M,
                            RngStream& rng) {
  const OutcomeProbs pr = outcome_probs(rho, composite, setting);
  if (pr.pass() < 1e-9) throw ExtinctionError("pass probability below 1e-9");
  const auto counts = multinomial(rng, M, {pr.pp, pr.pm, pr.mp, pr.mm, pr.lost});
  CountRecord rec;
  rec.setting = setting;
  rec.M = M;
  rec.N = counts[0] + counts[1] + counts[2] + counts[3];
  rec.n1 = counts[0] + counts[1];
  rec.n2 = counts[0] + counts[2];
  rec.n12 = counts[0];
  rec.duration_s = double(M) * 2e-4;  // 10 s per 5e4 pairs
  return rec;
}

Counts measure_setting_exact(const DensityMatrix& rho,
                             const std::vector<CompositeArmOperator>& composite,
                             const DetectorSetting& setting, std::int64_t M) {
  const OutcomeProbs pr = outcome_probs(rho, composite, setting);
  if (pr.pass() < 1e-9) throw ExtinctionError("pass probability below 1e-9");
  const double m = double(M);
  return Counts{m, m * pr.pass(), m * (pr.pp + pr.pm), m * (pr.pp + pr.mp), m * pr.pp};
}

double estimate_correlation(const Counts& c) {
  if (c.N <= 0.0) throw ExtinctionError("no transmitted pairs at this setting");
  return (4.0 * c.n12 - 2.0 * c.n1 - 2.0 * c.n2 + c.N) / c.N;
}

BlochEstimate estimate_local_bloch(const DensityMatrix& rho,
                                   const std::vector<CompositeArmOperator>& composite,
                                   int arm, std::int64_t M, RngStream& rng,
                                   bool noiseless) {
  if (arm != 1 && arm != 2) throw std::invalid_argument("arm must be 1 or 2");
  BlochEstimate est;
  for (int i = 0; i < 3; ++i) {
    DetectorSetting st;  // probed axis on the chosen arm, partner parked at z
    (arm == 1 ? st.arm1.a : st.arm2.a) = Vec3r::Unit(i);
    RngStream child = rng.substream(i);
    const Counts c = draw_or_expect(rho, composite, st, M, child, noiseless);
    est.r(i) = singles_ratio(c, arm);
    const double p = (arm == 1 ? c.n1 : c.n2) / c.N;
    est.sigma(i) = noiseless ? 0.0 : 2.0 * std::sqrt(std::max(0.0, p * (1.0 - p) / c.N));
    est.pairs_transmitted += c.N;
    est.pairs_injected += c.M;
  }
  return est;
}

StokesTensor stokes_from_16_records(const std::vector<CountRecord>& records) {
  if (records.size() != 16)
    throw std::invalid_argument("expected a complete 16-setting record set");
  Mat3r tsum = Mat3r::Zero(), tcnt = Mat3r::Zero();
  Vec3r r1sum = Vec3r::Zero(), r1cnt = Vec3r::Zero();
  Vec3r r2sum = Vec3r::Zero(), r2cnt = Vec3r::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const CountRecord& rec = records[4 * i + j];
      if ((rec.setting.arm1.a - dir16(i)).norm() > 1e-9 ||
          (rec.setting.arm2.a - dir16(j)).norm() > 1e-9)
        throw std::invalid_argument("record set does not match the 16-setting layout");
      const Counts c = Counts::of(rec);
      const double e = estimate_correlation(c);
      tsum(kAxis16[i], kAxis16[j]) += kSign16[i] * kSign16[j] * e;
      tcnt(kAxis16[i], kAxis16[j]) += 1.0;
      r1sum(kAxis16[i]) += kSign16[i] * singles_ratio(c, 1);
      r1cnt(kAxis16[i]) += 1.0;
      r2sum(kAxis16[j]) += kSign16[j] * singles_ratio(c, 2);
      r2cnt(kAxis16[j]) += 1.0;
    }
  StokesTensor st;
  st.S.setZero();
  st.S(0, 0) = 1.0;
  for (int a = 0; a < 3; ++a) {
    st.S(1 + a, 0) = r1sum(a) / r1cnt(a);
    st.S(0, 1 + a) = r2sum(a) / r2cnt(a);
    for (int b = 0; b < 3; ++b) st.S(1 + a, 1 + b) = tsum(a, b) / tcnt(a, b);
  }
  return st;
}

StokesTensor full_stokes_16(const DensityMatrix& rho,
                            const std::vector<CompositeArmOperator>& composite,
                            std::int64_t M, RngStream& rng, bool noiseless,
                            std::vector<CountRecord>* records) {
  std::vector<CountRecord> recs(16);
  Mat3r tsum = Mat3r::Zero(), tcnt = Mat3r::Zero();
  Vec3r r1sum = Vec3r::Zero(), r1cnt = Vec3r::Zero();
  Vec3r r2sum = Vec3r::Zero(), r2cnt = Vec3r::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const DetectorSetting st{{dir16(i)}, {dir16(j)}};
      RngStream child = rng.substream(4 * i + j);
      const Counts c = draw_or_expect(rho, composite, st, M, child, noiseless,
                                      &recs[4 * i + j]);
      const double e = estimate_correlation(c);
      tsum(kAxis16[i], kAxis16[j]) += kSign16[i] * kSign16[j] * e;
      tcnt(kAxis16[i], kAxis16[j]) += 1.0;
      r1sum(kAxis16[i]) += kSign16[i] * singles_ratio(c, 1);
      r1cnt(kAxis16[i]) += 1.0;
      r2sum(kAxis16[j]) += kSign16[j] * singles_ratio(c, 2);
      r2cnt(kAxis16[j]) += 1.0;
    }
  if (records) *records = recs;
  StokesTensor st;
  st.S.setZero();
  st.S(0, 0) = 1.0;
  for (int a = 0; a < 3; ++a) {
    st.S(1 + a, 0) = r1sum(a) / r1cnt(a);
    st.S(0, 1 + a) = r2sum(a) / r2cnt(a);
    for (int b = 0; b < 3; ++b) st.S(1 + a, 1 + b) = tsum(a, b) / tcnt(a, b);
  }
  return st;
}

LambdaTriple lambda_12(const DensityMatrix& rho,
                       const std::vector<CompositeArmOperator>& composite,
                       const StokesTensor& S_hat, std::int64_t M, RngStream& rng,
                       bool noiseless, double direction_error) {
  const LambdaTriple cand = lambda_svd(S_hat.T());
  const double cd = std::cos(direction_error), sd = std::sin(direction_error);
  std::array<double, 3> lam{};
  for (int l = 0; l < 3; ++l) {
    const Vec3r u = cd * cand.O1.col(l) + sd * cand.O1.col((l + 1) % 3);
    const Vec3r v = cd * cand.O2.col(l) + sd * cand.O2.col((l + 1) % 3);
    double e = 0.0;
    int idx = 0;
    for (const double s1 : {1.0, -1.0})
      for (const double s2 : {1.0, -1.0}) {
        DetectorSetting st{{s1 * u}, {s2 * v}};
        RngStream child = rng.substream(4 * l + idx++);
        const Counts c = draw_or_expect(rho, composite, st, M, child, noiseless);
        if (c.N <= 0.0) throw ExtinctionError("no transmitted pairs at this setting");
        e += s1 * s2 * c.n12 / c.N;
      }
    lam[l] = std::abs(e);
  }
  // sort descending, dragging the candidate directions along; an odd
  // permutation would make both rotations improper, so flip the third
  // columns in that case (the diagonal entry is unchanged)
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lam[a] > lam[b]; });
  LambdaTriple out;
  for (int l = 0; l < 3; ++l) {
    out.lambda(l) = lam[order[l]];
    out.O1.col(l) = cand.O1.col(order[l]);
    out.O2.col(l) = cand.O2.col(order[l]);
  }
  const bool odd = (order[1] == (order[0] + 2) % 3);
  if (odd) {
    out.O1.col(2) *= -1.0;
    out.O2.col(2) *= -1.0;
  }
  out.q = cand.q;
  return out;
}

std::vector<ScanPoint> coincidence_scan(const DensityMatrix& rho,
                                        const std::vector<CompositeArmOperator>& composite,
                                        const LambdaTriple& lambda, int l, int lp,
                                        int grid, std::int64_t M, const RngStream& rng,
                                        bool noiseless, ExecPolicy policy) {
  if (l == lp || l < 1 || l > 3 || lp < 1 || lp > 3)
    throw std::invalid_argument("scan plane needs two distinct lambda indices in {1,2,3}");
  if (grid < 2) throw std::invalid_argument("grid must have at least two points");
  // sign-fix the arm-2 directions so both anchors come out positive:
  // E(0,0) = +lambda_l, E(pi/2, pi/2) = +lambda_lp
  const auto fixed_v = [&](int idx) {
    const double d = idx < 2 ? 1.0 : double(lambda.q);
    return Vec3r(d * lambda.O2.col(idx));
  };
  const Vec3r u = lambda.O1.col(l - 1), up = lambda.O1.col(lp - 1);
  const Vec3r v = fixed_v(l - 1), vp = fixed_v(lp - 1);

  std::vector<ScanPoint> out(size_t(grid) * grid);
  for_each_index(out.size(), policy, [&](size_t idx) {
    const int i = int(idx) / grid, j = int(idx) % grid;
    const double t1 = kPi * i / (grid - 1);
    const double t2 = kPi * j / (grid - 1);
    DetectorSetting st;
    st.arm1.a = std::cos(t1) * u + std::sin(t1) * up;
    st.arm2.a = std::cos(t2) * v + std::sin(t2) * vp;
    RngStream child = rng.substream(idx);
    ScanPoint& pt = out[idx];
    pt.theta1 = t1;
    pt.theta2 = t2;
    const Counts c = draw_or_expect(rho, composite, st, M, child, noiseless, &pt.rec);
    pt.E = estimate_correlation(c);
  });
  return out;
}

std::string scan_to_csv(const std::vector<ScanPoint>& scan) {
  std::string out = "theta1,theta2,n12,n1,n2,N,E\n";
  char buf[256];
  for (const auto& p : scan) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%lld,%lld,%lld,%lld,%.17g\n", p.theta1,
                  p.theta2, (long long)p.rec.n12, (long long)p.rec.n1, (long long)p.rec.n2,
                  (long long)p.rec.N, p.E);
    out += buf;
  }
  return out;
}

std::string records_to_csv(const std::vector<CountRecord>& records) {
  std::string out = "setting_id,a_x,a_y,a_z,b_x,b_y,b_z,M,N,n1,n2,n12\n";
  char buf[512];
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::snprintf(buf, sizeof buf,
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,%lld,%lld,%lld,%lld\n", i,
                  r.setting.arm1.a.x(), r.setting.arm1.a.y(), r.setting.arm1.a.z(),
                  r.setting.arm2.a.x(), r.setting.arm2.a.y(), r.setting.arm2.a.z(),
                  (long long)r.M, (long long)r.N, (long long)r.n1, (long long)r.n2,
                  (long long)r.n12);
    out += buf;
  }
  return out;
}

MarginalEstimator sampled_marginal_estimator(const DensityMatrix& rho, std::int64_t M,
                                             RngStream rng, bool noiseless) {
  return [rho, M, rng, noiseless](const std::vector<CompositeArmOperator>& composite,
                                  int arm, int step) {
    RngStream child = rng.substream(std::uint64_t(step) * 8 + std::uint64_t(arm));
    return estimate_local_bloch(rho, composite, arm, M, child, noiseless);
  };
}

}  // namespace entwit
