#include "cqmc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cqmc/algebra.hpp"
#include "cqmc/dense_reference.hpp"
#include "cqmc/errors.hpp"
#include "cqmc/qmc.hpp"
#include "cqmc/transition.hpp"
#include "cqmc/tree.hpp"

namespace cqmc {

namespace {

constexpr std::uint64_t kProbeSeed = 20240611;
constexpr int kOracleCap = 16;

class Suite {
 public:
  /// Passes when err <= tol.
  void bound(std::string name, double err, double tol, std::string detail = {}) {
    checks_.push_back({std::move(name), err <= tol && std::isfinite(err), err, tol, std::move(detail)});
  }
  /// Passes when value >= floor.
  void at_least(std::string name, double value, double floor, std::string detail = {}) {
    checks_.push_back({std::move(name), value >= floor, value, floor, std::move(detail)});
  }
  void truth(std::string name, bool ok, std::string detail = {}) {
    checks_.push_back({std::move(name), ok, ok ? 0.0 : 1.0, 0.0, std::move(detail)});
  }
  /// Runs body; a thrown library error becomes a failed check.
  template <class Fn>
  void guarded(const std::string& name, Fn&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      checks_.push_back({name, false, 1.0, 0.0, std::string("error: ") + e.what()});
    }
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void tree_checks(Suite& s, const ModelParams& p) {
  const TreeParams tree(p.k);
  s.guarded("tree.volume", [&] {
    bool ok = true;
    std::uint64_t total = 0;
    for (int n = 0; n <= 4; ++n) {
      total += level_vertices(tree, n).size();
      const auto vol = volume_size(tree, n);
      ok = ok && vol.lam_n == total && level_vertices(tree, n).size() == vol.wn;
    }
    s.truth("tree.volume", ok, "|Lambda_n| equals the summed level sizes for n <= 4");
  });
  s.guarded("tree.successors", [&] {
    bool ok = true;
    for (int n = 0; n <= 3; ++n) {
      std::vector<VertexCoord> joined;
      for (const auto& v : level_vertices(tree, n)) {
        const auto succ = successors(v, tree);
        joined.insert(joined.end(), succ.begin(), succ.end());
      }
      ok = ok && joined == level_vertices(tree, n + 1);
    }
    s.truth("tree.successors", ok, "level n+1 is the ordered union of successors of level n");
  });
  s.guarded("tree.site_index", [&] {
    bool ok = true;
    const auto sites = volume_size(tree, 3).lam_n;
    for (std::size_t i = 0; i < sites; ++i) ok = ok && site_index(vertex_at(i, tree), tree) == i;
    s.truth("tree.site_index", ok, "site_index inverts vertex_at on Lambda_3");
  });
}

PauliOp random_pauli(std::mt19937_64& rng, bool real_diagonal) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto c = [&] { return Complex(u(rng), u(rng)); };
  PauliOp a{c(), c(), c(), c()};
  if (real_diagonal) {
    a.a0 = a.a0.real();
    a.a3 = a.a3.real();
  }
  return a;
}

void algebra_checks(Suite& s) {
  std::mt19937_64 rng(kProbeSeed);
  double roundtrip = 0.0, idem = 0.0, trace = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PauliOp a = random_pauli(rng, false);
    const PauliOp b = PauliOp::from_matrix(a.to_matrix());
    roundtrip = std::max({roundtrip, std::abs(a.a0 - b.a0), std::abs(a.a1 - b.a1),
                          std::abs(a.a2 - b.a2), std::abs(a.a3 - b.a3)});
    const PauliOp r = random_pauli(rng, true);
    const DiagOp e = diagonal_part(r);
    const DiagOp ee = diagonal_part(e.to_pauli());
    idem = std::max({idem, std::abs(e.dp - ee.dp), std::abs(e.dm - ee.dm)});
    trace = std::max(trace, std::abs(normalized_trace(e) - normalized_trace(r)));
  }
  s.bound("algebra.matrix_roundtrip", roundtrip, 1e-15);
  s.bound("algebra.diagonal_part_idempotent", idem, 1e-15);
  s.bound("algebra.trace_preserved", trace, 1e-15);
}

void dynamics_checks(Suite& s, const ModelParams& p, const FixedPointData& fp) {
  const double tk = std::pow(p.theta, p.k);
  const bool transition = in_transition_regime(p);

  s.truth("dynamics.regime_root_count", fp.count() == (transition ? 3 : 1),
          "three fixed points exactly when theta > (k+1)/(k-1)");

  double res = 0.0;
  for (int i = 1; i <= fp.count(); ++i) {
    res = std::max(res, std::abs(g_eval(p, fp.line(i).t) - fp.line(i).t));
  }
  s.bound("dynamics.fixed_point_residual", res, 1e-12);

  if (transition) {
    s.bound("dynamics.t2_t3_product", std::abs(fp.t2->t * fp.t3->t - 1.0), 1e-12);
    s.truth("dynamics.fixed_point_order",
            1.0 / tk < fp.t2->t && fp.t2->t < 1.0 && 1.0 < fp.t3->t && fp.t3->t < tk,
            "1/theta^k < t2 < 1 < t3 < theta^k");
  }

  double planar = 0.0, ratio = 0.0;
  for (const PlanarPoint& q : planar_fixed_points(fp, p)) {
    const PlanarPoint n = f_step(p, q);
    planar = std::max({planar, std::abs(n.x - q.x), std::abs(n.y - q.y)});
  }
  for (int i = 1; i <= fp.count(); ++i) {
    const auto& f = fp.line(i);
    ratio = std::max(ratio, rel(f.planar.x / f.planar.y, f.t));
  }
  s.bound("dynamics.planar_fixed_points", planar, 1e-12);
  s.bound("dynamics.planar_ratio_is_t", ratio, 1e-12);

  // samples on a log grid of (1/theta^k, theta^k), away from the ends
  std::vector<double> ts;
  for (int i = 1; i < 400; ++i) ts.push_back(std::pow(tk, -1.0 + 2.0 * i / 400.0));

  bool mono = true;
  for (std::size_t i = 1; i < ts.size(); ++i) mono = mono && g_eval(p, ts[i - 1]) < g_eval(p, ts[i]);
  s.truth("dynamics.g_monotone", mono, "g increasing on sampled (1/theta^k, theta^k)");

  double sym = 0.0;
  for (double t : ts) sym = std::max(sym, rel(g_eval(p, 1.0 / t), 1.0 / g_eval(p, t)));
  s.bound("dynamics.g_symmetry", sym, 1e-12);

  double conj = 0.0, inv = 0.0;
  for (double t : ts) {
    const PlanarPoint q{t, 1.0};
    const PlanarPoint n = f_step(p, q);
    if (n.x > 0.0 && n.y > 0.0) conj = std::max(conj, rel(n.x / n.y, g_eval(p, t)));
    if (n.x > 0.0 && n.y > 0.0) {
      const PlanarPoint back = forward_recursion_step(p, n);
      inv = std::max({inv, rel(back.x, q.x), rel(back.y, q.y)});
    }
  }
  s.bound("dynamics.ratio_conjugacy", conj, 1e-12);
  s.bound("dynamics.inverse_step", inv, 1e-12);

  bool signs = true;
  for (double t : ts) {
    const double d = g_eval(p, t) - t;
    double expect;
    if (!transition) {
      expect = t < 1.0 ? -1.0 : 1.0;
    } else if (t < fp.t2->t) {
      expect = -1.0;
    } else if (t < 1.0) {
      expect = 1.0;
    } else if (t < fp.t3->t) {
      expect = -1.0;
    } else {
      expect = 1.0;
    }
    const bool at_root = std::abs(d) < 1e-9 * std::max(1.0, t);
    signs = signs && (at_root || d * expect > 0.0);
  }
  s.truth("dynamics.sign_pattern", signs, "sign of g(t) - t between consecutive fixed points");

  bool no_cycles = true;
  for (double r : period_two_candidates(p)) {
    bool matched = false;
    for (int i = 1; i <= fp.count(); ++i) matched = matched || rel(r, fp.line(i).t) < 1e-6;
    no_cycles = no_cycles && matched;
  }
  s.truth("dynamics.no_period_two", no_cycles, "fixed points of g o g are fixed points of g");

  // l2 and l3 repel along the ratio: an offset of one ulp grows like g'(t)^n, so
  // the comparison stops once that growth would exceed 1e-11
  double line = 0.0;
  int horizon = 20;
  for (int i = 1; i <= fp.count(); ++i) {
    const FixedPoint& f = fp.line(i);
    const double slope = (p.theta * p.theta - 1.0) * f.s / (p.k * f.t * (p.theta - f.s) * (p.theta - f.s));
    int steps = 20;
    if (slope > 1.0) {
      steps = std::min(20, static_cast<int>(std::log(1e-11 / 0x1p-52) / std::log(slope)));
    }
    horizon = std::min(horizon, steps);
    PlanarPoint q{1.0, 1.0 / f.t};
    for (int n = 1; n <= steps; ++n) {
      q = f_step(p, q);
      const PlanarPoint c = invariant_line_trajectory(p, i, 1.0, n);
      line = std::max({line, std::abs(c.x - q.x), std::abs(c.y - q.y)});
    }
  }
  s.bound("dynamics.invariant_line_closed_form", line, 1e-10,
          "n <= 20 on l1, n <= " + std::to_string(horizon) + " on repelling lines");

  const std::vector<double> b(60, fp.t1.B);
  s.bound("dynamics.nested_radical_limit", std::abs(nested_radical_limit(b, p.k) - fp.t1.planar.y),
          1e-12);

  const TrajectoryResult tr = iterate_trajectory(p, 1.0, 1.0);
  const double dist = std::max(std::abs(tr.limit.x - fp.t1.planar.x), std::abs(tr.limit.y - fp.t1.planar.y));
  s.bound("dynamics.trajectory_to_l1", tr.verdict == Fate::ConvergesTo ? dist : 1.0, 1e-10);
}

std::vector<BoundaryCondition> all_conditions(const ModelParams& p) {
  std::vector<BoundaryCondition> out{boundary_condition(p, BoundaryKind::Alpha0),
                                     boundary_condition(p, BoundaryKind::AlphaFamily, 0.5),
                                     boundary_condition(p, BoundaryKind::AlphaFamily, 2.0)};
  if (in_transition_regime(p)) {
    out.push_back(boundary_condition(p, BoundaryKind::Beta));
    out.push_back(boundary_condition(p, BoundaryKind::Gamma));
  }
  return out;
}

void qmc_checks(Suite& s, const ModelParams& p) {
  const TreeParams tree(p.k);
  const EdgeKernel kern = kernel(p.beta);
  s.bound("qmc.kernel_identities",
          std::max({std::abs(kern.k0 * kern.k0 + kern.k3 * kern.k3 - 0.5 * (p.theta + 1.0)),
                    std::abs(2.0 * kern.k0 * kern.k3 - 0.5 * (p.theta - 1.0)),
                    std::abs(kern.k0 - kern.k3 - 1.0)}),
          1e-15 * p.theta);

  const auto conditions = all_conditions(p);
  double norm = 0.0, recur = 0.0;
  bool positive = true;
  for (const auto& bc : conditions) {
    norm = std::max(norm, std::abs(bc.normalization() - 1.0));
    for (int n = 0; n <= 6; ++n) {
      recur = std::max(recur, recursion_residual(bc, p, n));
      positive = positive && bc.field(n).is_positive();
    }
  }
  s.bound("qmc.boundary_normalization", norm, 1e-12);
  s.bound("qmc.recursion_residual", recur, 1e-12);
  s.truth("qmc.fields_positive", positive);

  int deepest = 0;
  while (volume_size(tree, deepest + 1).lam_n <= static_cast<std::uint64_t>(kOracleCap)) ++deepest;

  double state_norm = 0.0;
  bool weights_positive = true;
  const ProductObservable one{{}, 0};
  for (const auto& bc : conditions) {
    for (int n = 0; n <= deepest; ++n) {
      const FiniteVolumeState st = oracle_weights(p, bc, n, kOracleCap);
      state_norm = std::max(state_norm, std::abs(evaluate_state(st, one) - 1.0));
      for (double w : st.weights()) weights_positive = weights_positive && w > 0.0;
    }
  }
  s.bound("qmc.state_normalization", state_norm, 1e-10);
  s.truth("qmc.weights_positive", weights_positive);

  auto probes = single_site_probes(tree, 1);
  const auto random = random_diagonal_probes(tree, 1, 100, kProbeSeed);
  probes.insert(probes.end(), random.begin(), random.end());
  s.bound("qmc.compatibility_alpha0",
          compatibility_residual(p, boundary_condition(p, BoundaryKind::Alpha0), 1, probes, kOracleCap),
          1e-10);
  if (in_transition_regime(p)) {
    s.bound("qmc.compatibility_gamma",
            compatibility_residual(p, boundary_condition(p, BoundaryKind::Gamma), 1, probes, kOracleCap),
            1e-10);
  }
  const auto corrupted = boundary_condition(p, BoundaryKind::Alpha0).with_field_scaled_at(2, 1.1);
  const std::vector<ProductObservable> identity{one};
  s.at_least("qmc.compatibility_negative_control",
             compatibility_residual(p, corrupted, 1, identity, kOracleCap), 0.01,
             "field at level 2 scaled by 1.1 must break compatibility");

  // dense pipeline on Lambda_1 with complex off-diagonal parts
  std::mt19937_64 rng(kProbeSeed + 1);
  const BoundaryCondition bc =
      boundary_condition(p, in_transition_regime(p) ? BoundaryKind::Gamma : BoundaryKind::Alpha0);
  const FiniteVolumeState st = oracle_weights(p, bc, 1, kOracleCap);
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < 20; ++i) {
    ProductObservable a{{}, 1};
    ProductObservable pure_off{{}, 1};
    for (const auto& v : level_vertices(tree, 0)) a.sites.emplace(v, random_pauli(rng, true));
    for (const auto& v : level_vertices(tree, 1)) {
      a.sites.emplace(v, random_pauli(rng, true));
      pure_off.sites.emplace(v, PauliOp{0.0, 1.0, Complex(0.0, 0.5), 0.0});
    }
    const Complex dense = reference::dense_state_value(p, bc, 1, a);
    diag = std::max(diag, std::abs(dense - evaluate_state(st, product_diagonal_part(a))));
    off = std::max(off, std::abs(reference::dense_state_value(p, bc, 1, pure_off)));
  }
  s.bound("qmc.dense_matches_diagonal_reduction", diag, 1e-10);
  s.bound("qmc.offdiagonal_parts_vanish", off, 1e-12);

  const ModelParams at_crit = ModelParams::from_theta(p.k, critical_theta(p.k).theta_c);
  const ModelParams below = ModelParams::from_theta(p.k, 0.5 * (1.0 + critical_theta(p.k).theta_c));
  double uniq = 0.0;
  const int un = std::min(2, deepest);
  auto uprobes = single_site_probes(tree, un);
  const auto urand = random_diagonal_probes(tree, un, 30, kProbeSeed + 2);
  uprobes.insert(uprobes.end(), urand.begin(), urand.end());
  for (const ModelParams& q : {at_crit, below}) {
    for (double alpha : {0.5, 2.0}) uniq = std::max(uniq, uniqueness_identity(q, alpha, un, uprobes, kOracleCap));
  }
  s.bound("qmc.uniqueness_identity", uniq, 1e-12, "theta = theta_c and (1 + theta_c)/2, alpha in {0.5, 2}");

  if (in_transition_regime(p)) {
    const auto g = boundary_condition(p, BoundaryKind::Gamma).field(0);
    const auto b = boundary_condition(p, BoundaryKind::Beta).field(0);
    s.bound("qmc.spin_flip_fields", std::max(std::abs(g.a0() - b.a0()), std::abs(g.a3() + b.a3())),
            1e-12);
  }

  double alpha0_leaf = 0.0;
  for (int N = 0; N + 1 <= deepest; ++N) {
    const auto st0 = oracle_weights(p, boundary_condition(p, BoundaryKind::Alpha0), N + 1, kOracleCap);
    alpha0_leaf = std::max(alpha0_leaf, std::abs(evaluate_state(st0, leaf_sigma_z_observable(N))));
  }
  s.bound("qmc.alpha0_leaf_vanishes", alpha0_leaf, 1e-12);
}

void transition_checks(Suite& s, const ModelParams& p, const FixedPointData& fp) {
  const TreeParams tree(p.k);
  // threshold sweep around theta_c: regime flips together with the root count
  const double tc = critical_theta(p.k).theta_c;
  bool consistent = true;
  for (int i = -50; i <= 50; ++i) {
    const ModelParams q = ModelParams::from_theta(p.k, tc + 1e-3 * i);
    const bool three = find_fixed_points(q).count() == 3;
    const bool pt = gap_report(q, 0).verdict == Verdict::PhaseTransition;
    consistent = consistent && three == pt && three == (i > 0);
  }
  s.truth("transition.threshold_sweep", consistent, "verdict and root count flip together at theta_c");

  if (!in_transition_regime(p)) {
    const GapReport r = gap_report(p, 3);
    s.truth("transition.unique_verdict", r.verdict == Verdict::UniqueState && !r.eps0);
    return;
  }

  for (BoundaryKind kind : {BoundaryKind::Gamma, BoundaryKind::Beta}) {
    const std::string tag = kind == BoundaryKind::Gamma ? "gamma" : "beta";
    const TransferMatrix tm =
        build_transfer_matrix(p, (kind == BoundaryKind::Gamma ? fp.t3 : fp.t2)->t);
    s.bound("transition.routes_agree_" + tag, max_abs_diff(tm.entries, tm.route_product), 1e-12);
    const Vec2 v = tm.entries * Vec2{tm.x1, tm.y1};
    s.bound("transition.unit_eigenvector_" + tag,
            std::max(std::abs(v[0] - tm.x1), std::abs(v[1] - tm.y1)) / std::max(1.0, std::abs(tm.x1)),
            1e-12);
    const Vec2 w = tm.entries * Vec2{tm.x2, tm.y2};
    s.bound("transition.lambda2_eigenvector_" + tag,
            std::max(std::abs(w[0] - tm.lambda2 * tm.x2), std::abs(w[1] - tm.lambda2 * tm.y2)) /
                std::max(1.0, std::abs(tm.y2)),
            1e-12);
    s.bound("transition.trace_minus_det_" + tag,
            std::abs(tm.entries.trace() - tm.entries.det() - 1.0), 1e-12);
    s.truth("transition.lambda2_in_unit_interval_" + tag,
            tm.lambda2 > 0.0 && tm.lambda2 < 1.0 && std::abs(tm.entries.det() - tm.lambda2) < 1e-12);
    double pw = 0.0;
    for (int n = 0; n <= 30; ++n) {
      pw = std::max(pw, max_abs_diff(transfer_power(tm, p, n), transfer_power_iterated(tm, n)));
    }
    s.bound("transition.closed_form_power_" + tag, pw, 1e-9);
  }

  int deepest = 0;
  while (volume_size(tree, deepest + 1).lam_n <= static_cast<std::uint64_t>(kOracleCap)) ++deepest;
  double agree = 0.0;
  for (BoundaryKind kind : {BoundaryKind::Gamma, BoundaryKind::Beta}) {
    const auto bc = boundary_condition(p, kind);
    for (int N = 0; N + 1 <= deepest; ++N) {
      const auto st = oracle_weights(p, bc, N + 1, kOracleCap);
      agree = std::max(agree, std::abs(evaluate_state(st, leaf_sigma_z_observable(N)) -
                                       leaf_sigma3_expectation(p, kind, N)));
    }
  }
  s.bound("transition.oracle_agreement", agree, 1e-9,
          "leaf sz for N <= " + std::to_string(deepest - 1) + ", beta and gamma");

  double anti = 0.0;
  for (int N = 0; N <= 5; ++N) {
    anti = std::max(anti, std::abs(leaf_sigma3_expectation(p, BoundaryKind::Beta, N) +
                                   leaf_sigma3_expectation(p, BoundaryKind::Gamma, N)));
  }
  s.bound("transition.beta_gamma_antisymmetry", anti, 1e-10);

  const MagnetizationLaw law = magnetization_law(p, BoundaryKind::Gamma);
  // the ratio is only resolvable while the deviation stays well above rounding of m_inf
  double fit = 0.0;
  int last = 1;
  for (int N = 1; N < 10; ++N) {
    const double d0 = leaf_sigma3_expectation(p, BoundaryKind::Gamma, N) - law.m_infinity;
    const double d1 = leaf_sigma3_expectation(p, BoundaryKind::Gamma, N + 1) - law.m_infinity;
    if (N > 3 && std::abs(d1) < 1e-6) break;
    fit = std::max(fit, std::abs(d1 / d0 - law.lambda2));
    last = N + 1;
  }
  s.bound("transition.deviation_ratio", fit, 1e-8, "N = 1.." + std::to_string(last));

  const GapReport r = gap_report(p, 3);
  s.truth("transition.gap_verdict",
          r.verdict == Verdict::PhaseTransition && r.eps0 && *r.eps0 > 0.0 && r.N0 &&
              std::abs(*r.phi_limit - law.m_infinity) == 0.0,
          "phase transition with eps0 = m_inf/2 > 0");
}

}  // namespace

std::vector<Check> run_verification(const ModelParams& p) {
  Suite s;
  const FixedPointData fp = find_fixed_points(p);
  s.guarded("tree", [&] { tree_checks(s, p); });
  s.guarded("algebra", [&] { algebra_checks(s); });
  s.guarded("dynamics", [&] { dynamics_checks(s, p, fp); });
  s.guarded("qmc", [&] { qmc_checks(s, p); });
  s.guarded("transition", [&] { transition_checks(s, p, fp); });
  return s.take();
}

}  // namespace cqmc
