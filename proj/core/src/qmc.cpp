#include "cqmc/qmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "cqmc/errors.hpp"
#include "cqmc/reduction.hpp"

namespace cqmc {

EdgeKernel kernel(double beta) {
  if (!(beta > 0.0)) throw ParamError("beta must be > 0");
  const double eb = std::exp(beta);
  return {beta, std::exp(2.0 * beta), 0.5 * (eb + 1.0), 0.5 * (eb - 1.0)};
}

const char* to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Alpha0: return "alpha0";
    case BoundaryKind::AlphaFamily: return "alpha";
    case BoundaryKind::Beta: return "beta";
    case BoundaryKind::Gamma: return "gamma";
    case BoundaryKind::Custom: return "custom";
  }
  return "custom";
}

BoundaryKind parse_boundary_kind(std::string_view text) {
  if (text == "alpha0") return BoundaryKind::Alpha0;
  if (text == "alpha") return BoundaryKind::AlphaFamily;
  if (text == "beta") return BoundaryKind::Beta;
  if (text == "gamma") return BoundaryKind::Gamma;
  throw ParamError("unknown boundary kind '" + std::string(text) +
                   "' (expected alpha0, alpha, beta or gamma)");
}

BoundaryCondition::BoundaryCondition(BoundaryKind kind, DiagOp w0, FieldFn field,
                                     std::optional<double> alpha)
    : kind_(kind), w0_(w0), field_(std::move(field)), alpha_(alpha) {}

BoundaryCondition BoundaryCondition::with_field_scaled_at(int level, double factor) const {
  FieldFn base = field_;
  return BoundaryCondition(
      BoundaryKind::Custom, w0_,
      [base, level, factor](int n) { return n == level ? factor * base(n) : base(n); }, alpha_);
}

BoundaryCondition boundary_condition(const ModelParams& p, BoundaryKind kind,
                                     std::optional<double> alpha) {
  const double big_theta = 2.0 / (p.theta + 1.0);
  const double alpha0 = std::pow(big_theta, static_cast<double>(p.k) / (p.k - 1));

  switch (kind) {
    case BoundaryKind::Alpha0:
      return BoundaryCondition(kind, DiagOp::scalar(1.0 / alpha0),
                               [alpha0](int) { return DiagOp::scalar(alpha0); }, alpha0);
    case BoundaryKind::AlphaFamily: {
      if (!alpha || !(*alpha > 0.0)) throw ParamError("the alpha family needs alpha > 0");
      const double a = *alpha;
      const int k = p.k;
      return BoundaryCondition(
          kind, DiagOp::scalar(1.0 / a),
          [alpha0, a, k](int n) {
            const double shrink = std::pow(static_cast<double>(k), -static_cast<double>(n));
            return DiagOp::scalar(alpha0 * std::pow(a / alpha0, shrink));
          },
          a);
    }
    case BoundaryKind::Beta:
    case BoundaryKind::Gamma: {
      if (!in_transition_regime(p)) {
        throw RegimeError(std::string(to_string(kind)) +
                          " boundary condition exists only for theta > (k+1)/(k-1)");
      }
      const FixedPointData fp = find_fixed_points(p);
      const PlanarPoint q = (kind == BoundaryKind::Gamma ? *fp.t3 : *fp.t2).planar;
      const DiagOp h{q.x, q.y};
      return BoundaryCondition(kind, DiagOp::scalar(1.0 / h.a0()), [h](int) { return h; });
    }
    case BoundaryKind::Custom: break;
  }
  throw ParamError("custom boundary conditions are built directly, not by kind");
}

Mat2 a_h_matrix(double h0, double h3, const EdgeKernel& kern) {
  const double c = kern.k0 * kern.k0 + kern.k3 * kern.k3;
  const double d = 2.0 * kern.k0 * kern.k3;
  return {c * h0, d * h3, d * h3, c * h0};
}

Vec2 parent_field_coefficients(const DiagOp& child, const EdgeKernel& kern, int k) {
  const Mat2 a = a_h_matrix(child.a0(), child.a3(), kern);
  Vec2 v{1.0, 0.0};
  for (int i = 0; i < k; ++i) v = a * v;
  return v;
}

double recursion_residual(const BoundaryCondition& bc, const ModelParams& p, int n) {
  if (n < 0) throw ParamError("level must be >= 0");
  const Vec2 g = parent_field_coefficients(bc.field(n + 1), kernel(p.beta), p.k);
  const DiagOp target = bc.field(n);
  return std::max(std::abs(g[0] - target.a0()), std::abs(g[1] - target.a3()));
}

FiniteVolumeState::FiniteVolumeState(ModelParams p, BoundaryCondition bc, int level, int sites,
                                     std::vector<double> weights)
    : params_(p), bc_(std::move(bc)), level_(level), sites_(sites), weights_(std::move(weights)) {}

FiniteVolumeState oracle_weights(const ModelParams& p, const BoundaryCondition& bc, int n,
                                 int max_sites) {
  if (n < 0) throw ParamError("level must be >= 0");
  const TreeParams tree(p.k);
  const VolumeSize vol = volume_size(tree, n);
  if (vol.lam_n > static_cast<std::uint64_t>(max_sites)) {
    throw CapacityError("Lambda_" + std::to_string(n) + " has " + std::to_string(vol.lam_n) +
                        " sites; exact enumeration is capped at " + std::to_string(max_sites));
  }
  const int sites = static_cast<int>(vol.lam_n);
  const int first_leaf = sites - static_cast<int>(vol.wn);

  std::vector<int> parent(sites, -1);
  for (int v = 1; v < sites; ++v) parent[v] = (v - 1) / p.k;  // heap layout of the level order

  const EdgeKernel kern = kernel(p.beta);
  const double same = kern.equal_spin_weight();
  const double flip = kern.opposite_spin_weight();
  const DiagOp w0 = bc.w0();
  const DiagOp h = bc.field(n);

  const std::uint64_t configs = std::uint64_t{1} << sites;
  std::vector<double> weights(configs);
  auto fill = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t c = lo; c < hi; ++c) {
      double w = w0.on_bit(c & 1u);
      for (int v = 1; v < sites; ++v) {
        const bool equal = ((c >> v) & 1u) == ((c >> parent[v]) & 1u);
        w *= equal ? same : flip;
      }
      for (int v = first_leaf; v < sites; ++v) w *= h.on_bit((c >> v) & 1u);
      weights[c] = w;
    }
  };

  const unsigned workers =
      configs < (1u << 15) ? 1u : std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1) {
    fill(0, configs);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (configs + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(configs, lo + chunk);
      if (lo < hi) pool.emplace_back(fill, lo, hi);
    }
  }
  return FiniteVolumeState(p, bc, n, sites, std::move(weights));
}

double evaluate_state(const FiniteVolumeState& st, const ProductObservable& a) {
  const TreeParams tree(st.params().k);
  struct Factor {
    int bit;
    DiagOp op;
  };
  std::vector<Factor> factors;
  for (const auto& [site, op] : a.sites) {
    if (site.level() > st.level() || !site.fits(tree)) {
      throw SupportError("site " + site.to_string() + " lies outside Lambda_" +
                         std::to_string(st.level()));
    }
    const DiagOp d = diagonal_part(op);
    if (d == DiagOp::scalar(1.0)) continue;
    factors.push_back({static_cast<int>(site_index(site, tree)), d});
  }
  const auto w = st.weights();
  const double total = pairwise_sum(w.size(), [&](std::size_t c) {
    double term = w[c];
    for (const Factor& f : factors) term *= f.op.on_bit((c >> f.bit) & 1u);
    return term;
  });
  return std::ldexp(total, -st.sites());
}

double compatibility_residual(const ModelParams& p, const BoundaryCondition& bc, int n,
                              std::span<const ProductObservable> probes, int max_sites) {
  const FiniteVolumeState inner = oracle_weights(p, bc, n, max_sites);
  const FiniteVolumeState outer = oracle_weights(p, bc, n + 1, max_sites);
  double worst = 0.0;
  for (const ProductObservable& a : probes) {
    worst = std::max(worst, std::abs(evaluate_state(outer, a) - evaluate_state(inner, a)));
  }
  return worst;
}

double uniqueness_identity(const ModelParams& p, double alpha, int n,
                           std::span<const ProductObservable> probes, int max_sites) {
  if (in_transition_regime(p)) {
    throw RegimeError("the alpha-family identity holds only for theta <= (k+1)/(k-1)");
  }
  const FiniteVolumeState fam =
      oracle_weights(p, boundary_condition(p, BoundaryKind::AlphaFamily, alpha), n, max_sites);
  const FiniteVolumeState ref =
      oracle_weights(p, boundary_condition(p, BoundaryKind::Alpha0), n, max_sites);
  double worst = 0.0;
  for (const ProductObservable& a : probes) {
    worst = std::max(worst, std::abs(evaluate_state(fam, a) - evaluate_state(ref, a)));
  }
  return worst;
}

std::vector<ProductObservable> single_site_probes(const TreeParams& tree, int n) {
  std::vector<ProductObservable> out;
  out.push_back({{}, n});
  const auto sites = volume_size(tree, n).lam_n;
  for (std::size_t i = 0; i < sites; ++i) {
    ProductObservable a;
    a.volume = n;
    a.sites.emplace(vertex_at(i, tree), PauliOp::sigma_z());
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<ProductObservable> random_diagonal_probes(const TreeParams& tree, int n, int count,
                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto sites = static_cast<std::size_t>(volume_size(tree, n).lam_n);
  std::uniform_int_distribution<std::size_t> pick(0, sites - 1);
  std::uniform_int_distribution<std::size_t> how_many(1, std::min<std::size_t>(4, sites));
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  std::vector<ProductObservable> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    ProductObservable a;
    a.volume = n;
    const std::size_t m = how_many(rng);
    while (a.sites.size() < m) {
      const VertexCoord v = vertex_at(pick(rng), tree);
      const double a0 = coef(rng);
      const double a3 = coef(rng);
      a.sites.emplace(v, PauliOp{a0, 0.0, 0.0, a3});
    }
    out.push_back(std::move(a));
  }
  return out;
}

ProductObservable leaf_sigma_z_observable(int N) {
  if (N < 0) throw ParamError("N must be >= 0");
  ProductObservable a;
  a.volume = N + 1;
  a.sites.emplace(VertexCoord(std::vector<int>(N + 1, 1)), PauliOp::sigma_z());
  return a;
}

}  // namespace cqmc
