#include <doctest.h>

#include <cmath>

#include "cqmc/errors.hpp"
#include "cqmc/transition.hpp"
#include "oracles/oracles.hpp"

using namespace cqmc;
using doctest::Approx;

namespace {

const ModelParams k2t4 = ModelParams::from_theta(2, 4.0);
const ModelParams k3t3 = ModelParams::from_theta(3, 3.0);

oracle::M2 as_m2(const Mat2& m) { return {m.a11, m.a12, m.a21, m.a22}; }

// Leaf value from the brute-force enumeration over Lambda_{N+1}.
double enumerated_leaf(const ModelParams& p, BoundaryKind kind, int N) {
  const auto bc = boundary_condition(p, kind);
  const oracle::Spin2 w0{bc.w0().dp, bc.w0().dm}, h{bc.field(N + 1).dp, bc.field(N + 1).dm};
  const int leaf = oracle::bfs_index(p.k, N + 1, std::vector<int>(N + 1, 1));
  return static_cast<double>(oracle::enumerate(p.k, p.beta, N + 1, w0, h, {{leaf, {1.0L, -1.0L}}}));
}

}  // namespace

TEST_CASE("transfer matrix entries for k = 2, theta = 4") {
  const FixedPointData fp = find_fixed_points(k2t4);
  const TransferMatrix tm = build_transfer_matrix(k2t4, fp.t3->t);
  CHECK(tm.entries.a11 == Approx(0.8333333333333333).epsilon(1e-13));
  CHECK(tm.entries.a12 == Approx(0.22360679774997897).epsilon(1e-13));
  CHECK(tm.entries.a21 == Approx(0.37267799624996495).epsilon(1e-13));
  CHECK(tm.entries.a22 == Approx(0.5).epsilon(1e-13));
  CHECK(max_abs_diff(tm.entries, tm.route_product) < 1e-12);
  CHECK(std::abs(tm.lambda2 - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(tm.entries.det() - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(tm.entries.trace() - tm.entries.det() - 1.0) < 1e-12);
  CHECK(tm.x1 == Approx(7.854101966249685).epsilon(1e-13));
  CHECK(tm.y1 == Approx(5.854101966249685).epsilon(1e-13));
  const Vec2 v = tm.entries * Vec2{tm.x1, tm.y1};
  CHECK(std::abs(v[0] - tm.x1) < 1e-12 * tm.x1);
  CHECK(std::abs(v[1] - tm.y1) < 1e-12 * tm.x1);
  // the fixed point satisfies t = ((theta t + 1)/(theta + t))^k
  CHECK(std::pow((4.0 * tm.t + 1.0) / (4.0 + tm.t), 2) == Approx(tm.t).epsilon(1e-13));
}

TEST_CASE("spectrum against a quadratic-formula oracle") {
  for (const ModelParams& p : {k2t4, k3t3, ModelParams::from_theta(4, 2.0), ModelParams::from_theta(2, 3.3)}) {
    const FixedPointData fp = find_fixed_points(p);
    for (double t : {fp.t2->t, fp.t3->t}) {
      const TransferMatrix tm = build_transfer_matrix(p, t);
      const auto [l1, l2] = oracle::eigenvalues(as_m2(tm.entries));
      CHECK(std::abs(static_cast<double>(l1) - 1.0) < 1e-12);
      CHECK(std::abs(static_cast<double>(l2) - tm.lambda2) < 1e-12);
      CHECK(tm.lambda2 > 0.0);
      CHECK(tm.lambda2 < 1.0);
      CHECK(max_abs_diff(tm.entries, tm.route_product) < 1e-12);
      const Vec2 w = tm.entries * Vec2{tm.x2, tm.y2};
      CHECK(std::abs(w[0] - tm.lambda2 * tm.x2) < 1e-12 * std::abs(tm.y2));
      CHECK(std::abs(w[1] - tm.lambda2 * tm.y2) < 1e-12 * std::abs(tm.y2));
    }
  }
}

TEST_CASE("transfer matrix input validation") {
  CHECK_THROWS_AS(build_transfer_matrix(k2t4, 1.0), ParamError);
  CHECK_THROWS_AS(build_transfer_matrix(k2t4, 6.8), ParamError);
  CHECK_THROWS_AS(build_transfer_matrix(k2t4, -1.0), ParamError);
}

TEST_CASE("closed-form powers") {
  const FixedPointData fp = find_fixed_points(k2t4);
  const TransferMatrix tm = build_transfer_matrix(k2t4, fp.t3->t);
  CHECK(transfer_power(tm, k2t4, 0) == Mat2::identity());
  CHECK(max_abs_diff(transfer_power(tm, k2t4, 1), tm.entries) < 1e-15);
  for (int n = 0; n <= 30; ++n) {
    const auto ref = oracle::power(as_m2(tm.entries), n);
    const Mat2 c = transfer_power(tm, k2t4, n);
    CHECK(std::abs(c.a11 - static_cast<double>(ref[0])) < 1e-9);
    CHECK(std::abs(c.a12 - static_cast<double>(ref[1])) < 1e-9);
    CHECK(std::abs(c.a21 - static_cast<double>(ref[2])) < 1e-9);
    CHECK(std::abs(c.a22 - static_cast<double>(ref[3])) < 1e-9);
    CHECK(max_abs_diff(c, transfer_power_iterated(tm, n)) < 1e-9);
  }
  const Mat2 limit = transfer_power(tm, k2t4, 2000);
  CHECK(limit.a11 == Approx(0.75).epsilon(1e-12));
  CHECK(limit.a11 * limit.a22 - limit.a12 * limit.a21 == Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(transfer_power(tm, k2t4, -1), ParamError);
}

TEST_CASE("leaf expectations for k = 2, theta = 4") {
  const double expected[] = {0.84473679149992055, 0.87786372449991744, 0.88890603549991640,
                             0.89258680583324938, 0.89381372927769371, 0.89422270375917516};
  for (int N = 0; N <= 5; ++N) {
    CHECK(leaf_sigma3_expectation(k2t4, BoundaryKind::Gamma, N) == Approx(expected[N]).epsilon(1e-13));
    CHECK(std::abs(leaf_sigma3_expectation(k2t4, BoundaryKind::Beta, N) + expected[N]) < 1e-10);
    CHECK(leaf_sigma3_expectation(k2t4, BoundaryKind::Alpha0, N) == 0.0);
  }
  CHECK_THROWS_AS(leaf_sigma3_expectation(k2t4, BoundaryKind::Gamma, -1), ParamError);
  CHECK_THROWS_AS(leaf_sigma3_expectation(ModelParams::from_theta(2, 2.5), BoundaryKind::Gamma, 1), RegimeError);
  CHECK_THROWS_AS(leaf_sigma3_expectation(k2t4, BoundaryKind::AlphaFamily, 1), ParamError);
}

TEST_CASE("leaf expectations for k = 3, theta = 3") {
  const double expected[] = {0.95032889043741062, 0.95731660286709746, 0.95819006692080832,
                             0.95829924992752218, 0.95831289780336141, 0.95831460378784131};
  for (int N = 0; N <= 5; ++N) {
    CHECK(leaf_sigma3_expectation(k3t3, BoundaryKind::Gamma, N) == Approx(expected[N]).epsilon(1e-13));
  }
}

TEST_CASE("transfer formula agrees with enumeration") {
  for (int N = 0; N <= 2; ++N) {
    CHECK(std::abs(leaf_sigma3_expectation(k2t4, BoundaryKind::Gamma, N) -
                   enumerated_leaf(k2t4, BoundaryKind::Gamma, N)) < 1e-9);
    CHECK(std::abs(leaf_sigma3_expectation(k2t4, BoundaryKind::Beta, N) -
                   enumerated_leaf(k2t4, BoundaryKind::Beta, N)) < 1e-9);
  }
  for (int N = 0; N <= 1; ++N) {
    CHECK(std::abs(leaf_sigma3_expectation(k3t3, BoundaryKind::Gamma, N) -
                   enumerated_leaf(k3t3, BoundaryKind::Gamma, N)) < 1e-9);
  }
}

TEST_CASE("magnetization law") {
  const MagnetizationLaw g = magnetization_law(k2t4, BoundaryKind::Gamma);
  CHECK(g.m_infinity == Approx(2.0 / std::sqrt(5.0)).epsilon(1e-13));
  CHECK(g.coefficient == Approx(-0.14907119849998598).epsilon(1e-12));
  const MagnetizationLaw b = magnetization_law(k2t4, BoundaryKind::Beta);
  CHECK(b.m_infinity == Approx(-g.m_infinity).epsilon(1e-12));
  const MagnetizationLaw g3 = magnetization_law(k3t3, BoundaryKind::Gamma);
  CHECK(g3.m_infinity == Approx(0.95831484749990987).epsilon(1e-13));
  CHECK(g3.coefficient == Approx(-0.063887656499993991).epsilon(1e-12));
  CHECK(g3.lambda2 == Approx(0.125).epsilon(1e-13));
  for (int N = 1; N < 10; ++N) {
    const double d0 = leaf_sigma3_expectation(k2t4, BoundaryKind::Gamma, N) - g.m_infinity;
    const double d1 = leaf_sigma3_expectation(k2t4, BoundaryKind::Gamma, N + 1) - g.m_infinity;
    CHECK(std::abs(d1 / d0 - g.lambda2) < 1e-8);
  }
  CHECK_THROWS_AS(magnetization_law(k2t4, BoundaryKind::Alpha0), ParamError);
}

TEST_CASE("gap report") {
  const GapReport r = gap_report(k2t4, 3);
  CHECK(r.verdict == Verdict::PhaseTransition);
  CHECK(r.phi_alpha == 0.0);
  CHECK(*r.phi_gamma_N == Approx(0.892586805833249).epsilon(1e-12));
  CHECK(*r.phi_limit == Approx(2.0 / std::sqrt(5.0)).epsilon(1e-13));
  CHECK(*r.eps0 == Approx(1.0 / std::sqrt(5.0)).epsilon(1e-13));
  CHECK(*r.N0 == 0);
  for (int N = *r.N0 + 1; N < 40; ++N) {
    CHECK(std::abs(leaf_sigma3_expectation(k2t4, BoundaryKind::Gamma, N)) >= *r.eps0);
  }
  for (double th : {2.5, 3.0}) {
    const GapReport u = gap_report(ModelParams::from_theta(2, th), 3);
    CHECK(u.verdict == Verdict::UniqueState);
    CHECK_FALSE(u.phi_gamma_N);
    CHECK_FALSE(u.eps0);
    CHECK_FALSE(u.N0);
  }
}

TEST_CASE("phase diagram rows") {
  const PhaseDiagramRow t = phase_diagram_row(k2t4);
  CHECK(t.regime == Regime::Transition);
  CHECK(*t.t3 == Approx(6.854101966249685).epsilon(1e-12));
  CHECK(*t.lambda2 == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(t.m_infinity == Approx(0.894427191).epsilon(1e-9));
  const PhaseDiagramRow u = phase_diagram_row(ModelParams::from_theta(2, 2.0));
  CHECK(u.regime == Regime::Unique);
  CHECK(u.m_infinity == 0.0);
  CHECK_FALSE(u.t3);
  CHECK(*phase_diagram_row(k3t3).t3 == Approx(17.944271909999159).epsilon(1e-12));
  const PhaseDiagramRow near = phase_diagram_row(ModelParams::from_theta(2, 3.0 + 5e-7));
  CHECK(near.regime == Regime::NearCritical);
  CHECK_FALSE(near.t2);
  CHECK_FALSE(near.t3);
}

TEST_CASE("magnetization vanishes continuously at the threshold") {
  double prev = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    const double m = phase_diagram_row(ModelParams::from_theta(2, 3.0 + eps)).m_infinity;
    CHECK(m > 0.0);
    CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("phase diagram sweep is ordered and deterministic") {
  const auto rows = phase_diagram(2, 2.0, 5.0, 0.05);
  REQUIRE(rows.size() == 61);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].theta > rows[i - 1].theta);
  for (const auto& r : rows) {
    const ModelParams p = ModelParams::from_theta(2, r.theta);
    CHECK((r.regime == Regime::Unique) == (find_fixed_points(p).count() == 1 && std::abs(r.theta - 3.0) >= 1e-6));
  }
  const auto again = phase_diagram(2, 2.0, 5.0, 0.05);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].m_infinity == again[i].m_infinity);
  CHECK_THROWS_AS(phase_diagram(2, 2.0, 5.0, 0.0), ParamError);
  CHECK_THROWS_AS(phase_diagram(2, 0.5, 5.0, 0.1), ParamError);
}
