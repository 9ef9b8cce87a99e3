#pragma once

// The boundary-field recursion reduced to a planar map and its ratio map.
//
//   f(x, y) = ( (2 theta x^{1/k} - 2 y^{1/k}) / (theta^2 - 1),
//               (-2 x^{1/k} + 2 theta y^{1/k}) / (theta^2 - 1) )
//   g(t)    = (theta t^{1/k} - 1) / (theta - t^{1/k}),   x'/y' = g(x/y)
//
// Fixed points t of g are found in s = t^{1/k}, where they are the roots of
// s^{k+1} - theta s^k + theta s - 1 on (1/theta, theta). s = 1 is always a root;
// the two others exist exactly when theta > (k+1)/(k-1).

#include <optional>
#include <span>
#include <vector>

namespace cqmc {

/// Inverse temperature beta > 0 with theta = exp(2 beta) > 1, on a tree of order k.
struct ModelParams {
  int k = 2;
  double theta = 0.0;
  double beta = 0.0;

  static ModelParams from_theta(int k, double theta);
  static ModelParams from_beta(int k, double beta);
};

struct CriticalPoint {
  double theta_c;
  double beta_c;
};

/// theta_c = (k+1)/(k-1), beta_c = ln(theta_c)/2.
CriticalPoint critical_theta(int k);

/// theta > theta_c. Equality belongs to the unique regime.
bool in_transition_regime(const ModelParams& p);

/// Throws DomainError for t < 0 or t = theta^k.
double g_eval(const ModelParams& p, double t);

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

struct FixedPoint {
  double t = 1.0;      // fixed point of g
  double s = 1.0;      // t^{1/k}
  double A = 0.0;      // (2 theta s - 2) / (theta^2 - 1)
  double B = 0.0;      // (2 theta - 2 s) / (theta^2 - 1)
  PlanarPoint planar;  // (A B^{1/(k-1)}, B^{k/(k-1)}), a fixed point of f
};

struct FixedPointData {
  FixedPoint t1;
  std::optional<FixedPoint> t2;  // in (1/theta^k, 1)
  std::optional<FixedPoint> t3;  // in (1, theta^k)

  int count() const noexcept { return t2 ? 3 : 1; }
  /// Line l_i, i in {1, 2, 3}. Throws IndexError when unavailable.
  const FixedPoint& line(int i) const;
};

/// Deflated fixed-point polynomial (s^{k+1} - theta s^k + theta s - 1) / (s - 1).
double deflated_fixed_point_polynomial(const ModelParams& p, double s);

/// Throws ParamError if theta <= 1.
FixedPointData find_fixed_points(const ModelParams& p);

/// Planar fixed points of f, ordered l1, l2, l3.
std::vector<PlanarPoint> planar_fixed_points(const FixedPointData& fp, const ModelParams& p);

/// One step of f. Throws DomainError unless x, y > 0 and y/theta^k <= x <= theta^k y.
PlanarPoint f_step(const ModelParams& p, PlanarPoint q);

/// (((theta x + y)/2)^k, ((x + theta y)/2)^k): the level-n field from the level-(n+1) one.
PlanarPoint forward_recursion_step(const ModelParams& p, PlanarPoint q);

enum class Fate { ConvergesTo, ExitsDomain, AtFixedPoint, Undecided };

const char* to_string(Fate fate);

struct TrajectoryResult {
  std::vector<PlanarPoint> points;  // starting point first
  Fate verdict = Fate::Undecided;
  PlanarPoint limit;                // valid for ConvergesTo / AtFixedPoint
  int exit_step = 0;                // valid for ExitsDomain: the failing step, 1-based
  Fate predicted = Fate::Undecided; // fate implied by the starting ratio alone
  int predicted_line = 0;           // line whose fixed point is the predicted limit
};

inline constexpr int kDefaultMaxSteps = 10000;
inline constexpr double kTrajectoryTolerance = 1e-12;

/// Iterates f until the sup-norm step falls below 1e-12, the domain is left, or
/// max_steps is reached. Throws ParamError for nonpositive starts.
TrajectoryResult iterate_trajectory(const ModelParams& p, double x0, double y0,
                                    int max_steps = kDefaultMaxSteps);

/// Fate implied by the ratio x0/y0 (invariant line, basin of l1, or escape).
Fate predict_fate(const ModelParams& p, const FixedPointData& fp, double ratio,
                  int* line = nullptr);

/// Closed-form n-th iterate of a start (x0, x0/t_i) on line l_i.
PlanarPoint invariant_line_trajectory(const ModelParams& p, int line, double x0, int n);

/// b_n (b_{n-1} ( ... b_0^{1/k})^{1/k})^{1/k} over the whole sequence b_0..b_n.
double nested_radical_limit(std::span<const double> b, int k);

/// Fixed points of g o g on (1/theta^k, theta^k) located by sign changes on a
/// logarithmic grid, then bisected.
std::vector<double> period_two_candidates(const ModelParams& p, int samples = 4000);

}  // namespace cqmc
