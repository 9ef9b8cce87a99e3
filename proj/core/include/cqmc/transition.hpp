#pragma once

// Transfer matrix of the leaf sz correlation for the translation-invariant
// boundary conditions, its spectrum and closed-form powers, the resulting
// magnetization, the non-equivalence gap and a phase diagram over theta.
//
// For a fixed point t != 1 of g with planar point (x, y), h0 = (x+y)/2 and
// h3 = (x-y)/2,
//   A = 1/((theta+t)(theta t+1)) [[c Q, d R], [c R, d Q]],
//   Q = t^2 + 2 theta t + 1, R = t^2 - 1, c = (theta+1)/2, d = (theta-1)/2,
// with eigenvalues 1 and lambda2 = det A.

#include <optional>
#include <vector>

#include "cqmc/dynamics.hpp"
#include "cqmc/matrix2.hpp"
#include "cqmc/qmc.hpp"

namespace cqmc {

struct TransferMatrix {
  Mat2 entries;        // closed form in t
  Mat2 route_product;  // [[c p, d q], [c q, d p]] from Theta+-
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  double lambda2 = 0.0;
  double x1 = 0.0, y1 = 0.0;  // eigenvector of 1
  double x2 = 0.0, y2 = 0.0;  // eigenvector of lambda2
  double t = 0.0;
  double h0 = 0.0, h3 = 0.0;
};

inline constexpr double kFixedPointGate = 1e-9;

/// Throws ParamError when t == 1 or |g(t) - t| > 1e-9.
TransferMatrix build_transfer_matrix(const ModelParams& p, double t);

/// Closed form of A^n from the eigen-decomposition.
Mat2 transfer_power(const TransferMatrix& tm, const ModelParams& p, int n);

/// A^n by repeated multiplication.
Mat2 transfer_power_iterated(const TransferMatrix& tm, int n);

/// Limit leaf magnetization m_inf and the coefficient c of
/// phi(N) = m_inf + c lambda2^{N+1}.
struct MagnetizationLaw {
  double m_infinity = 0.0;
  double coefficient = 0.0;
  double lambda2 = 0.0;
};

/// Magnetization law of the Beta (line 2) or Gamma (line 3) state.
/// Throws RegimeError at theta <= theta_c and ParamError for other kinds.
MagnetizationLaw magnetization_law(const ModelParams& p, BoundaryKind kind);

/// Expectation of sz at the leaf (1, ..., 1) of level N+1 via (1/h0) [A^{N+1} (h3, h0)]_0.
/// Alpha0 gives 0. Beta and Gamma raise RegimeError at theta <= theta_c.
double leaf_sigma3_expectation(const ModelParams& p, BoundaryKind kind, int N);

enum class Verdict { UniqueState, PhaseTransition };
const char* to_string(Verdict v);

struct GapReport {
  int N = 0;
  double phi_alpha = 0.0;
  std::optional<double> phi_gamma_N;
  std::optional<double> phi_limit;
  std::optional<double> eps0;
  std::optional<int> N0;
  Verdict verdict = Verdict::UniqueState;
};

GapReport gap_report(const ModelParams& p, int N);

enum class Regime { Unique, Transition, NearCritical };
const char* to_string(Regime r);

inline constexpr double kNearCriticalWidth = 1e-6;

struct PhaseDiagramRow {
  double theta = 0.0;
  Regime regime = Regime::Unique;
  std::optional<double> t2, t3, lambda2, eps0;
  double m_infinity = 0.0;
};

PhaseDiagramRow phase_diagram_row(const ModelParams& p);

/// Rows for theta = lo, lo + step, ... <= hi (inclusive within step/2), ordered by theta.
std::vector<PhaseDiagramRow> phase_diagram(int k, double theta_lo, double theta_hi, double step);

}  // namespace cqmc
