#include "cqmc/dense_reference.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cqmc/errors.hpp"

namespace cqmc::reference {
namespace {

class Dense {
 public:
  explicit Dense(int sites) : sites_(sites), dim_(std::size_t{1} << sites), m_(dim_ * dim_) {}

  std::size_t dim() const { return dim_; }
  Complex& at(std::size_t r, std::size_t c) { return m_[r * dim_ + c]; }
  Complex at(std::size_t r, std::size_t c) const { return m_[r * dim_ + c]; }

  /// Tensor product of single-site matrices; other sites carry the identity.
  static Dense embed(int sites, const std::map<int, Matrix2c>& ops) {
    Dense out(sites);
    for (std::size_t r = 0; r < out.dim_; ++r) {
      for (std::size_t c = 0; c < out.dim_; ++c) {
        Complex v = 1.0;
        for (int s = 0; s < sites && v != 0.0; ++s) {
          const unsigned rb = (r >> s) & 1u;
          const unsigned cb = (c >> s) & 1u;
          auto it = ops.find(s);
          if (it == ops.end()) {
            if (rb != cb) v = 0.0;
          } else {
            v *= it->second[rb][cb];
          }
        }
        out.at(r, c) = v;
      }
    }
    return out;
  }

  Dense operator*(const Dense& o) const {
    Dense out(sites_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t l = 0; l < dim_; ++l) {
        const Complex a = at(i, l);
        if (a == 0.0) continue;
        for (std::size_t j = 0; j < dim_; ++j) out.at(i, j) += a * o.at(l, j);
      }
    return out;
  }

  Dense operator+(const Dense& o) const {
    Dense out(sites_);
    for (std::size_t i = 0; i < m_.size(); ++i) out.m_[i] = m_[i] + o.m_[i];
    return out;
  }

  Dense adjoint() const {
    Dense out(sites_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out.at(i, j) = std::conj(at(j, i));
    return out;
  }

  Dense scaled(Complex c) const {
    Dense out(*this);
    for (auto& v : out.m_) v *= c;
    return out;
  }

 private:
  int sites_;
  std::size_t dim_;
  std::vector<Complex> m_;
};

Matrix2c sqrt_diag(const DiagOp& d) {
  return {{{std::sqrt(d.dp), 0.0}, {0.0, std::sqrt(d.dm)}}};
}

}  // namespace

Complex dense_state_value(const ModelParams& p, const BoundaryCondition& bc, int n,
                          const ProductObservable& a) {
  const TreeParams tree(p.k);
  const auto vol = volume_size(tree, n);
  if (vol.lam_n > static_cast<std::uint64_t>(kDenseSiteCap)) {
    throw CapacityError("dense reference is limited to " + std::to_string(kDenseSiteCap) +
                        " sites");
  }
  const int sites = static_cast<int>(vol.lam_n);
  const int first_leaf = sites - static_cast<int>(vol.wn);
  const EdgeKernel kern = kernel(p.beta);
  const Matrix2c sz = PauliOp::sigma_z().to_matrix();

  Dense k_n = Dense::embed(sites, {{0, sqrt_diag(bc.w0())}});
  for (int v = 1; v < sites; ++v) {
    const int parent = static_cast<int>(site_index(vertex_at(v, tree).parent(), tree));
    const Dense edge = Dense::embed(sites, {}).scaled(kern.k0) +
                       Dense::embed(sites, {{parent, sz}, {v, sz}}).scaled(kern.k3);
    k_n = k_n * edge;
  }
  const Matrix2c h_half = sqrt_diag(bc.field(n));
  for (int v = first_leaf; v < sites; ++v) k_n = k_n * Dense::embed(sites, {{v, h_half}});

  const Dense w = k_n * k_n.adjoint();

  std::map<int, Matrix2c> obs;
  for (const auto& [site, op] : a.sites) {
    if (site.level() > n || !site.fits(tree)) {
      throw SupportError("site " + site.to_string() + " lies outside Lambda_" + std::to_string(n));
    }
    obs.emplace(static_cast<int>(site_index(site, tree)), op.to_matrix());
  }
  const Dense wa = w * Dense::embed(sites, obs);
  Complex tr = 0.0;
  for (std::size_t i = 0; i < wa.dim(); ++i) tr += wa.at(i, i);
  return tr / static_cast<double>(wa.dim());
}

}  // namespace cqmc::reference
