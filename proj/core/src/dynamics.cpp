#include "cqmc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cqmc/errors.hpp"

namespace cqmc {

namespace {

void require_k(int k) {
  if (k < 2) throw ParamError("branching order k must be >= 2, got " + std::to_string(k));
}

// Bisects a sign change of fn on [lo, hi] down to adjacent doubles.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi) {
  double flo = fn(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = fn(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

FixedPoint make_fixed_point(const ModelParams& p, double s) {
  FixedPoint fp;
  fp.s = s;
  fp.t = std::pow(s, p.k);
  const double denom = p.theta * p.theta - 1.0;
  fp.A = (2.0 * p.theta * s - 2.0) / denom;
  fp.B = (2.0 * p.theta - 2.0 * s) / denom;
  const double root = std::pow(fp.B, 1.0 / (p.k - 1));
  fp.planar = {fp.A * root, fp.B * root};
  return fp;
}

double theta_pow_k(const ModelParams& p) { return std::pow(p.theta, p.k); }

bool in_f_domain(const ModelParams& p, PlanarPoint q) {
  const double tk = theta_pow_k(p);
  return q.x > 0.0 && q.y > 0.0 && q.y / tk <= q.x && q.x <= tk * q.y;
}

}  // namespace

ModelParams ModelParams::from_theta(int k, double theta) {
  require_k(k);
  if (!(theta > 1.0) || !std::isfinite(theta)) {
    throw ParamError("theta must be a finite number > 1, got " + std::to_string(theta));
  }
  return {k, theta, 0.5 * std::log(theta)};
}

ModelParams ModelParams::from_beta(int k, double beta) {
  require_k(k);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ParamError("beta must be a finite number > 0, got " + std::to_string(beta));
  }
  return {k, std::exp(2.0 * beta), beta};
}

CriticalPoint critical_theta(int k) {
  require_k(k);
  const double tc = static_cast<double>(k + 1) / static_cast<double>(k - 1);
  return {tc, 0.5 * std::log(tc)};
}

bool in_transition_regime(const ModelParams& p) { return p.theta > critical_theta(p.k).theta_c; }

double g_eval(const ModelParams& p, double t) {
  if (t < 0.0) throw DomainError("g_theta is undefined for t < 0");
  const double s = std::pow(t, 1.0 / p.k);
  if (t == theta_pow_k(p) || s == p.theta) throw DomainError("g_theta has a pole at t = theta^k");
  return (p.theta * s - 1.0) / (p.theta - s);
}

const FixedPoint& FixedPointData::line(int i) const {
  switch (i) {
    case 1: return t1;
    case 2:
      if (t2) return *t2;
      break;
    case 3:
      if (t3) return *t3;
      break;
    default: break;
  }
  throw IndexError("invariant line l" + std::to_string(i) + " does not exist at this theta");
}

double deflated_fixed_point_polynomial(const ModelParams& p, double s) {
  // synthetic division of s^{k+1} - theta s^k + theta s - 1 by (s - 1)
  const int k = p.k;
  double b = 1.0;
  double acc = 1.0;  // Horner accumulator for the quotient
  for (int j = 1; j <= k; ++j) {
    double c = 0.0;
    if (j == 1) c = -p.theta;
    if (j == k) c += p.theta;
    b = c + b;
    acc = acc * s + b;
  }
  return acc;
}

FixedPointData find_fixed_points(const ModelParams& p) {
  if (!(p.theta > 1.0)) throw ParamError("theta must be > 1");
  require_k(p.k);
  FixedPointData out;
  out.t1 = make_fixed_point(p, 1.0);
  if (!in_transition_regime(p)) return out;

  auto q = [&](double s) { return deflated_fixed_point_polynomial(p, s); };
  const double s2 = bisect(q, 1.0 / p.theta, 1.0);
  const double s3 = bisect(q, 1.0, p.theta);
  out.t2 = make_fixed_point(p, s2);
  out.t3 = make_fixed_point(p, s3);
  return out;
}

std::vector<PlanarPoint> planar_fixed_points(const FixedPointData& fp, const ModelParams&) {
  std::vector<PlanarPoint> out{fp.t1.planar};
  if (fp.t2) out.push_back(fp.t2->planar);
  if (fp.t3) out.push_back(fp.t3->planar);
  return out;
}

PlanarPoint f_step(const ModelParams& p, PlanarPoint q) {
  if (!in_f_domain(p, q)) {
    throw DomainError("f is undefined at (" + std::to_string(q.x) + ", " + std::to_string(q.y) +
                      "): need x, y > 0 and y/theta^k <= x <= theta^k y");
  }
  const double rx = std::pow(q.x, 1.0 / p.k);
  const double ry = std::pow(q.y, 1.0 / p.k);
  const double denom = p.theta * p.theta - 1.0;
  return {(2.0 * p.theta * rx - 2.0 * ry) / denom, (-2.0 * rx + 2.0 * p.theta * ry) / denom};
}

PlanarPoint forward_recursion_step(const ModelParams& p, PlanarPoint q) {
  return {std::pow(0.5 * (p.theta * q.x + q.y), p.k), std::pow(0.5 * (q.x + p.theta * q.y), p.k)};
}

const char* to_string(Fate fate) {
  switch (fate) {
    case Fate::ConvergesTo: return "converges";
    case Fate::ExitsDomain: return "exits-domain";
    case Fate::AtFixedPoint: return "at-fixed-point";
    case Fate::Undecided: return "undecided";
  }
  return "undecided";
}

Fate predict_fate(const ModelParams& p, const FixedPointData& fp, double ratio, int* line) {
  auto set_line = [&](int i) {
    if (line) *line = i;
  };
  set_line(0);
  for (int i = 1; i <= fp.count(); ++i) {
    const double t = fp.line(i).t;
    if (std::abs(ratio - t) <= 1e-12 * t) {
      set_line(i);
      return Fate::ConvergesTo;
    }
  }
  if (fp.t2 && ratio > fp.t2->t && ratio < fp.t3->t) {
    set_line(1);
    return Fate::ConvergesTo;
  }
  (void)p;
  return Fate::ExitsDomain;
}

TrajectoryResult iterate_trajectory(const ModelParams& p, double x0, double y0, int max_steps) {
  if (!(x0 > 0.0) || !(y0 > 0.0)) throw ParamError("trajectory start must have x0, y0 > 0");
  if (max_steps < 1) throw ParamError("max_steps must be >= 1");
  TrajectoryResult r;
  const FixedPointData fp = find_fixed_points(p);
  r.predicted = predict_fate(p, fp, x0 / y0, &r.predicted_line);

  PlanarPoint q{x0, y0};
  r.points.push_back(q);
  for (int step = 1; step <= max_steps; ++step) {
    if (!in_f_domain(p, q)) {
      r.verdict = Fate::ExitsDomain;
      r.exit_step = step;
      return r;
    }
    const PlanarPoint next = f_step(p, q);
    r.points.push_back(next);
    const double diff = std::max(std::abs(next.x - q.x), std::abs(next.y - q.y));
    if (diff < kTrajectoryTolerance) {
      r.verdict = step == 1 ? Fate::AtFixedPoint : Fate::ConvergesTo;
      r.limit = next;
      return r;
    }
    q = next;
  }
  r.verdict = Fate::Undecided;
  return r;
}

PlanarPoint invariant_line_trajectory(const ModelParams& p, int line, double x0, int n) {
  if (!(x0 > 0.0)) throw ParamError("x0 must be > 0");
  if (n < 0) throw ParamError("n must be >= 0");
  const FixedPointData fp = find_fixed_points(p);
  const FixedPoint& fixed = fp.line(line);
  const double y0 = x0 / fixed.t;
  const double shrink = std::pow(static_cast<double>(p.k), -static_cast<double>(n));
  return {fixed.planar.x * std::pow(x0 / fixed.planar.x, shrink),
          fixed.planar.y * std::pow(y0 / fixed.planar.y, shrink)};
}

double nested_radical_limit(std::span<const double> b, int k) {
  require_k(k);
  if (b.empty()) throw ParamError("nested radical needs at least one term");
  double r = 0.0;
  for (std::size_t m = 0; m < b.size(); ++m) {
    if (!(b[m] > 0.0)) throw ParamError("nested radical terms must be > 0");
    r = m == 0 ? b[0] : b[m] * std::pow(r, 1.0 / k);
  }
  return r;
}

std::vector<double> period_two_candidates(const ModelParams& p, int samples) {
  const double tk = theta_pow_k(p);
  auto inner_ok = [&](double t) { return g_eval(p, t) < tk; };
  auto h = [&](double t) { return g_eval(p, g_eval(p, t)) - t; };

  const double lo = std::log(1.0 / tk), hi = std::log(tk);
  std::vector<double> grid(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * (i + 0.5) / (samples + 1));
  }
  std::vector<double> roots;
  for (int i = 0; i < samples; ++i) {
    const double a = grid[i], b = grid[i + 1];
    if (!inner_ok(a) || !inner_ok(b)) continue;  // pole of g o g in between or beyond
    const double ha = h(a), hb = h(b);
    if (ha == 0.0) {
      roots.push_back(a);
    } else if ((ha > 0.0) != (hb > 0.0) && hb != 0.0) {
      const double r = bisect(h, a, b);
      if (std::abs(h(r)) < 1e-8 * std::max(1.0, r)) roots.push_back(r);
    }
  }
  return roots;
}

}  // namespace cqmc
