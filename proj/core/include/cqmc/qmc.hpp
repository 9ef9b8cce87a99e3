#pragma once

// Finite-volume quantum Markov chain states of the Ising kernel
//   K<u,v> = exp(beta H<u,v>) = K0 1 + K3 sz(u) sz(v),  K0 = (e^beta + 1)/2,  K3 = (e^beta - 1)/2,
// with boundary conditions (w0, {h_x}) that are diagonal, positive, and
// homogeneous within each level.
//
// Every operator entering W_{n]} = K_n K_n^* is diagonal in the sz basis, so
// W_{n]} is a weight on classical spin configurations of Lambda_n:
//   W(sigma) = w0(sigma_root) * prod_{<x,y> in E_n} (K0 + K3 sigma_x sigma_y)^2
//                             * prod_{x in W_n} h(n)(sigma_x).
// The exact oracle enumerates that weight; states pair it with observables
// under the normalized trace.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cqmc/algebra.hpp"
#include "cqmc/dynamics.hpp"
#include "cqmc/matrix2.hpp"

namespace cqmc {

struct EdgeKernel {
  double beta = 0.0;
  double theta = 1.0;
  double k0 = 1.0;
  double k3 = 0.0;

  /// (K0 + K3)^2 = e^{2 beta}: the squared kernel on equal spins.
  double equal_spin_weight() const noexcept { return (k0 + k3) * (k0 + k3); }
  /// (K0 - K3)^2 = 1: the squared kernel on opposite spins.
  double opposite_spin_weight() const noexcept { return (k0 - k3) * (k0 - k3); }
};

/// Throws ParamError for beta <= 0.
EdgeKernel kernel(double beta);

enum class BoundaryKind { Alpha0, AlphaFamily, Beta, Gamma, Custom };

const char* to_string(BoundaryKind kind);
/// Accepts alpha0, alpha, beta, gamma. Throws ParamError otherwise.
BoundaryKind parse_boundary_kind(std::string_view text);

class BoundaryCondition {
 public:
  using FieldFn = std::function<DiagOp(int)>;

  BoundaryCondition(BoundaryKind kind, DiagOp w0, FieldFn field,
                    std::optional<double> alpha = std::nullopt);

  BoundaryKind kind() const noexcept { return kind_; }
  std::optional<double> alpha() const noexcept { return alpha_; }
  const DiagOp& w0() const noexcept { return w0_; }
  /// h(n): the field on every site of level n.
  DiagOp field(int level) const { return field_(level); }

  /// Tr(w0 h(0)); equals 1 for a valid boundary condition.
  double normalization() const { return normalized_trace(w0_ * field(0)); }

  /// Copy whose field at `level` is multiplied by `factor` (kind becomes Custom).
  BoundaryCondition with_field_scaled_at(int level, double factor) const;

 private:
  BoundaryKind kind_;
  DiagOp w0_;
  FieldFn field_;
  std::optional<double> alpha_;
};

/// Builds the boundary conditions attached to the fixed points of f:
///   Alpha0       w0 = 1/alpha0, h(n) = alpha0,  alpha0 = (2/(theta+1))^{k/(k-1)}
///   AlphaFamily  w0 = 1/alpha,  h(n) = alpha0 (alpha/alpha0)^{1/k^n}
///   Gamma, Beta  w0 = 1/h0,     h(n) = h0 1 + h3 sz, (h0 +- h3) = planar fixed point on l3 / l2
/// Beta and Gamma raise RegimeError at theta <= theta_c; AlphaFamily needs alpha > 0.
BoundaryCondition boundary_condition(const ModelParams& p, BoundaryKind kind,
                                     std::optional<double> alpha = std::nullopt);

/// Child transfer matrix for a child field h0 1 + h3 sz:
///   [[(K0^2 + K3^2) h0, 2 K0 K3 h3], [2 K0 K3 h3, (K0^2 + K3^2) h0]].
Mat2 a_h_matrix(double h0, double h3, const EdgeKernel& kern);

/// Pauli coefficients (g0, g3) of Tr_{x]}[prod K h prod K] for k identical children.
Vec2 parent_field_coefficients(const DiagOp& child, const EdgeKernel& kern, int k);

/// max |(g0, g3) - (h0, h3)(n)| with (g0, g3) built from h(n+1).
double recursion_residual(const BoundaryCondition& bc, const ModelParams& p, int n);

inline constexpr int kDefaultSiteCap = 22;

/// Diagonal weight of W_{n]} on all 2^{|Lambda_n|} spin configurations.
/// Configuration bit i is the spin of site i (site order of site_index); bit 0 is spin +1.
class FiniteVolumeState {
 public:
  const ModelParams& params() const noexcept { return params_; }
  const BoundaryCondition& boundary() const noexcept { return bc_; }
  int level() const noexcept { return level_; }
  int sites() const noexcept { return sites_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  friend FiniteVolumeState oracle_weights(const ModelParams&, const BoundaryCondition&, int, int);
  FiniteVolumeState(ModelParams p, BoundaryCondition bc, int level, int sites,
                    std::vector<double> weights);

  ModelParams params_;
  BoundaryCondition bc_;
  int level_;
  int sites_;
  std::vector<double> weights_;
};

/// Enumerates W_{n]}. Throws CapacityError when |Lambda_n| > max_sites.
FiniteVolumeState oracle_weights(const ModelParams& p, const BoundaryCondition& bc, int n,
                                 int max_sites = kDefaultSiteCap);

/// phi^{(n)}(a) = Tr(W_{n]} E(a)) = 2^{-|Lambda_n|} sum_sigma W(sigma) prod_x a_x(sigma_x).
/// Throws SupportError when a touches a site outside Lambda_n.
double evaluate_state(const FiniteVolumeState& st, const ProductObservable& a);

/// max over probes of |phi^{(n+1)}(a) - phi^{(n)}(a)|.
double compatibility_residual(const ModelParams& p, const BoundaryCondition& bc, int n,
                              std::span<const ProductObservable> probes,
                              int max_sites = kDefaultSiteCap);

/// max over probes of |phi_alpha^{(n)}(a) - phi_alpha0^{(n)}(a)|.
/// Throws RegimeError above theta_c.
double uniqueness_identity(const ModelParams& p, double alpha, int n,
                           std::span<const ProductObservable> probes,
                           int max_sites = kDefaultSiteCap);

/// sz on each site of Lambda_n, one probe per site, plus the identity.
std::vector<ProductObservable> single_site_probes(const TreeParams& tree, int n);

/// Seeded random products of diagonal operators on 1..4 sites of Lambda_n.
std::vector<ProductObservable> random_diagonal_probes(const TreeParams& tree, int n, int count,
                                                      std::uint64_t seed);

/// sz at the first vertex (1, ..., 1) of level N+1, identity elsewhere on Lambda_{N+1}.
ProductObservable leaf_sigma_z_observable(int N);

}  // namespace cqmc
