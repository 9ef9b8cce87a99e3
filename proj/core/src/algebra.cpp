#include "cqmc/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "cqmc/errors.hpp"

namespace cqmc {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Matrix2c PauliOp::to_matrix() const {
  return {{{a0 + a3, a1 - kI * a2}, {a1 + kI * a2, a0 - a3}}};
}

PauliOp PauliOp::from_matrix(const Matrix2c& m) {
  PauliOp p;
  p.a0 = 0.5 * (m[0][0] + m[1][1]);
  p.a3 = 0.5 * (m[0][0] - m[1][1]);
  p.a1 = 0.5 * (m[0][1] + m[1][0]);
  p.a2 = 0.5 * kI * (m[0][1] - m[1][0]);
  return p;
}

PauliOp operator+(const PauliOp& a, const PauliOp& b) {
  return {a.a0 + b.a0, a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3};
}

PauliOp operator*(Complex c, const PauliOp& a) { return {c * a.a0, c * a.a1, c * a.a2, c * a.a3}; }

DiagOp diagonal_part(const PauliOp& a) {
  if (a.a0.imag() != 0.0 || a.a3.imag() != 0.0) {
    throw DomainError("diagonal part must be real: a0 and a3 need zero imaginary part");
  }
  return DiagOp::from_pauli(a.a0.real(), a.a3.real());
}

double normalized_trace(const DiagOp& a) { return 0.5 * (a.dp + a.dm); }

Complex normalized_trace(const PauliOp& a) { return a.a0; }

ProductObservable product_diagonal_part(const ProductObservable& a) {
  ProductObservable out;
  out.volume = a.volume;
  for (const auto& [site, op] : a.sites) out.sites.emplace(site, diagonal_part(op).to_pauli());
  return out;
}

Complex normalized_trace(const ProductObservable& a) {
  Complex r = 1.0;
  for (const auto& [site, op] : a.sites) r *= normalized_trace(op);
  return r;
}

ProductObservable parse_observable(std::string_view text, const TreeParams& params, int volume) {
  ProductObservable out;
  int deepest = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view entry = text.substr(pos, comma - pos);
    const std::size_t colon = entry.find(':');
    if (colon == std::string_view::npos || colon + 2 != entry.size()) {
      throw ParamError("observable entry '" + std::string(entry) + "' is not of the form site:P");
    }
    const VertexCoord site = VertexCoord::parse(entry.substr(0, colon));
    if (!site.fits(params)) {
      throw ParamError("site " + site.to_string() + " has an index above k");
    }
    PauliOp op;
    switch (entry[colon + 1]) {
      case 'I': op = PauliOp::identity(); break;
      case 'X': op = PauliOp::sigma_x(); break;
      case 'Y': op = PauliOp::sigma_y(); break;
      case 'Z': op = PauliOp::sigma_z(); break;
      default:
        throw ParamError("unknown Pauli label '" + std::string(1, entry[colon + 1]) + "'");
    }
    if (!out.sites.emplace(site, op).second) {
      throw ParamError("site " + site.to_string() + " listed twice");
    }
    deepest = std::max(deepest, site.level());
    pos = comma + 1;
  }
  out.volume = volume < 0 ? deepest : volume;
  return out;
}

std::string to_string(const ProductObservable& a) {
  std::string out;
  for (const auto& [site, op] : a.sites) {
    if (!out.empty()) out += ',';
    out += site.to_string();
    out += ':';
    if (op == PauliOp::identity()) out += 'I';
    else if (op == PauliOp::sigma_x()) out += 'X';
    else if (op == PauliOp::sigma_y()) out += 'Y';
    else if (op == PauliOp::sigma_z()) out += 'Z';
    else if (op == PauliOp::zero()) out += '0';
    else out += '?';
  }
  return out;
}

}  // namespace cqmc
