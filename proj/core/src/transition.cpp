#include "cqmc/transition.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "cqmc/errors.hpp"

namespace cqmc {

namespace {

const FixedPoint& fixed_point_for(const FixedPointData& fp, BoundaryKind kind) {
  return kind == BoundaryKind::Gamma ? *fp.t3 : *fp.t2;
}

void require_line_kind(const ModelParams& p, BoundaryKind kind) {
  if (kind != BoundaryKind::Beta && kind != BoundaryKind::Gamma) {
    throw ParamError(std::string("no transfer matrix for boundary kind ") + to_string(kind));
  }
  if (!in_transition_regime(p)) {
    throw RegimeError(std::string(to_string(kind)) +
                      " state exists only for theta > (k+1)/(k-1)");
  }
}

}  // namespace

TransferMatrix build_transfer_matrix(const ModelParams& p, double t) {
  if (t == 1.0) throw ParamError("the transfer matrix needs a fixed point t != 1");
  if (!(t > 0.0)) throw ParamError("fixed point must be > 0");
  const double residual = std::abs(g_eval(p, t) - t);
  if (residual > kFixedPointGate * std::max(1.0, t)) {
    throw ParamError("t = " + std::to_string(t) + " is not a fixed point of g (residual " +
                     std::to_string(residual) + ")");
  }

  const double th = p.theta;
  const double c = 0.5 * (th + 1.0);
  const double d = 0.5 * (th - 1.0);
  TransferMatrix tm;
  tm.t = t;

  const double pre = 1.0 / ((th + t) * (th * t + 1.0));
  const double q = t * t + 2.0 * th * t + 1.0;
  const double r = t * t - 1.0;
  tm.entries = {pre * c * q, pre * d * r, pre * c * r, pre * d * q};

  // planar point on the line x = t y that is fixed by f
  const double s = std::pow(t, 1.0 / p.k);
  const double denom = th * th - 1.0;
  const double a = (2.0 * th * s - 2.0) / denom;
  const double b = (2.0 * th - 2.0 * s) / denom;
  const double root = std::pow(b, 1.0 / (p.k - 1));
  const PlanarPoint pt{a * root, b * root};
  tm.h0 = 0.5 * (pt.x + pt.y);
  tm.h3 = 0.5 * (pt.x - pt.y);

  tm.theta_plus = tm.h0 * c + tm.h3 * d;
  tm.theta_minus = tm.h0 * c - tm.h3 * d;
  const double up = std::pow(tm.theta_plus, p.k - 1);
  const double um = std::pow(tm.theta_minus, p.k - 1);
  const double pp = 0.5 * (up + um);
  const double qq = 0.5 * (up - um);
  tm.route_product = {c * pp, d * qq, c * qq, d * pp};

  tm.lambda2 = denom * t / ((th + t) * (th * t + 1.0));
  tm.x1 = t + 1.0;
  tm.y1 = t - 1.0;
  tm.x2 = -(th - 1.0) * tm.y1;
  tm.y2 = (th + 1.0) * tm.x1;
  return tm;
}

Mat2 transfer_power(const TransferMatrix& tm, const ModelParams& p, int n) {
  if (n < 0) throw ParamError("power must be >= 0");
  if (n == 0) return Mat2::identity();
  const double th = p.theta;
  const double x1 = tm.x1, y1 = tm.y1;
  const double ln = std::pow(tm.lambda2, n);
  const double dd = (th + 1.0) * x1 * x1 + (th - 1.0) * y1 * y1;
  return {((th + 1.0) * x1 * x1 + (th - 1.0) * y1 * y1 * ln) / dd,
          x1 * y1 * (th - 1.0) * (1.0 - ln) / dd,
          x1 * y1 * (th + 1.0) * (1.0 - ln) / dd,
          ((th + 1.0) * x1 * x1 * ln + (th - 1.0) * y1 * y1) / dd};
}

Mat2 transfer_power_iterated(const TransferMatrix& tm, int n) {
  if (n < 0) throw ParamError("power must be >= 0");
  Mat2 m = Mat2::identity();
  for (int i = 0; i < n; ++i) m = m * tm.entries;
  return m;
}

MagnetizationLaw magnetization_law(const ModelParams& p, BoundaryKind kind) {
  require_line_kind(p, kind);
  const FixedPointData fp = find_fixed_points(p);
  const TransferMatrix tm = build_transfer_matrix(p, fixed_point_for(fp, kind).t);
  const double th = p.theta;
  const double x1 = tm.x1, y1 = tm.y1, h0 = tm.h0, h3 = tm.h3;
  const double dd = (th + 1.0) * x1 * x1 + (th - 1.0) * y1 * y1;
  MagnetizationLaw law;
  law.m_infinity = ((th + 1.0) * x1 * x1 * h3 + (th - 1.0) * x1 * y1 * h0) / (h0 * dd);
  law.coefficient = (th - 1.0) * (y1 * y1 * h3 - x1 * y1 * h0) / (h0 * dd);
  law.lambda2 = tm.lambda2;
  return law;
}

double leaf_sigma3_expectation(const ModelParams& p, BoundaryKind kind, int N) {
  if (N < 0) throw ParamError("N must be >= 0");
  if (kind == BoundaryKind::Alpha0) return 0.0;
  require_line_kind(p, kind);
  const FixedPointData fp = find_fixed_points(p);
  const TransferMatrix tm = build_transfer_matrix(p, fixed_point_for(fp, kind).t);
  const Vec2 v = transfer_power(tm, p, N + 1) * Vec2{tm.h3, tm.h0};
  return v[0] / tm.h0;
}

const char* to_string(Verdict v) {
  return v == Verdict::PhaseTransition ? "phase-transition" : "unique-state";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Unique: return "unique";
    case Regime::Transition: return "transition";
    case Regime::NearCritical: return "near-critical";
  }
  return "unique";
}

GapReport gap_report(const ModelParams& p, int N) {
  if (N < 0) throw ParamError("N must be >= 0");
  GapReport r;
  r.N = N;
  if (!in_transition_regime(p)) return r;

  r.verdict = Verdict::PhaseTransition;
  const MagnetizationLaw law = magnetization_law(p, BoundaryKind::Gamma);
  auto phi = [&](int m) { return law.m_infinity + law.coefficient * std::pow(law.lambda2, m + 1); };
  r.phi_gamma_N = phi(N);
  r.phi_limit = law.m_infinity;
  r.eps0 = 0.5 * law.m_infinity;
  // phi is monotone in N, so the set of N meeting the bound is a tail
  const double eps = std::abs(*r.eps0);
  int first = 0;
  while (std::abs(phi(first)) < eps && first < 100000) ++first;
  r.N0 = std::max(0, first - 1);
  return r;
}

PhaseDiagramRow phase_diagram_row(const ModelParams& p) {
  PhaseDiagramRow row;
  row.theta = p.theta;
  const double tc = critical_theta(p.k).theta_c;
  const bool near = std::abs(p.theta - tc) < kNearCriticalWidth;
  if (!in_transition_regime(p)) {
    row.regime = near ? Regime::NearCritical : Regime::Unique;
    return row;
  }
  row.regime = near ? Regime::NearCritical : Regime::Transition;
  const FixedPointData fp = find_fixed_points(p);
  if (!near) {
    row.t2 = fp.t2->t;
    row.t3 = fp.t3->t;
  }
  try {
    const MagnetizationLaw law = magnetization_law(p, BoundaryKind::Gamma);
    row.lambda2 = law.lambda2;
    row.m_infinity = law.m_infinity;
    row.eps0 = 0.5 * law.m_infinity;
  } catch (const ParamError&) {
    // fixed point too ill-conditioned for the residual gate
  }
  return row;
}

std::vector<PhaseDiagramRow> phase_diagram(int k, double theta_lo, double theta_hi, double step) {
  if (!(step > 0.0)) throw ParamError("step must be > 0");
  if (!(theta_lo > 1.0) || theta_hi < theta_lo) {
    throw ParamError("theta range must satisfy 1 < lo <= hi");
  }
  critical_theta(k);
  const auto count = static_cast<std::size_t>(std::floor((theta_hi - theta_lo) / step + 0.5)) + 1;
  std::vector<PhaseDiagramRow> rows(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency())));
  auto work = [&](std::size_t begin) {
    for (std::size_t i = begin; i < count; i += workers) {
      rows[i] = phase_diagram_row(ModelParams::from_theta(k, theta_lo + step * static_cast<double>(i)));
    }
  };
  std::vector<std::future<void>> jobs;
  for (unsigned w = 1; w < workers; ++w) jobs.push_back(std::async(std::launch::async, work, w));
  work(0);
  for (auto& j : jobs) j.get();
  return rows;
}

}  // namespace cqmc
