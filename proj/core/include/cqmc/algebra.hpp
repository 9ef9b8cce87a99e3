#pragma once

// Single-site operator algebra M_2(C) in the Pauli basis {1, sx, sy, sz}, its
// diagonal subalgebra, and product observables over a finite volume Lambda_n.

#include <array>
#include <complex>
#include <map>
#include <string>
#include <string_view>

#include "cqmc/tree.hpp"

namespace cqmc {

using Complex = std::complex<double>;
using Matrix2c = std::array<std::array<Complex, 2>, 2>;

/// a = a0*1 + a1*sx + a2*sy + a3*sz.
struct PauliOp {
  Complex a0{}, a1{}, a2{}, a3{};

  static PauliOp identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static PauliOp sigma_x() { return {0.0, 1.0, 0.0, 0.0}; }
  static PauliOp sigma_y() { return {0.0, 0.0, 1.0, 0.0}; }
  static PauliOp sigma_z() { return {0.0, 0.0, 0.0, 1.0}; }
  static PauliOp zero() { return {}; }

  Matrix2c to_matrix() const;
  static PauliOp from_matrix(const Matrix2c& m);

  friend bool operator==(const PauliOp&, const PauliOp&) = default;
};

PauliOp operator+(const PauliOp& a, const PauliOp& b);
PauliOp operator*(Complex c, const PauliOp& a);

/// Diagonal operator stored by its eigenvalues: dp on spin +1, dm on spin -1.
struct DiagOp {
  double dp = 0.0;
  double dm = 0.0;

  static DiagOp from_pauli(double a0, double a3) { return {a0 + a3, a0 - a3}; }
  static DiagOp scalar(double c) { return {c, c}; }

  double a0() const noexcept { return 0.5 * (dp + dm); }
  double a3() const noexcept { return 0.5 * (dp - dm); }
  bool is_positive() const noexcept { return dp > 0.0 && dm > 0.0; }
  /// Value on a classical spin; bit 0 is spin +1.
  double on_bit(unsigned bit) const noexcept { return bit ? dm : dp; }
  PauliOp to_pauli() const { return {a0(), 0.0, 0.0, a3()}; }

  friend bool operator==(const DiagOp&, const DiagOp&) = default;
};

inline DiagOp operator*(const DiagOp& a, const DiagOp& b) { return {a.dp * b.dp, a.dm * b.dm}; }
inline DiagOp operator*(double c, const DiagOp& a) { return {c * a.dp, c * a.dm}; }

/// E(a) = e11 a e11 + e22 a e22. Requires real a0 and a3 (DomainError otherwise).
DiagOp diagonal_part(const PauliOp& a);

/// Tr with Tr(1) = 1.
double normalized_trace(const DiagOp& a);
Complex normalized_trace(const PauliOp& a);

/// Tensor product of single-site operators; unlisted sites carry the identity.
struct ProductObservable {
  std::map<VertexCoord, PauliOp> sites;
  int volume = 0;  // supported in Lambda_volume
};

/// Sitewise E; identity sites stay implicit.
ProductObservable product_diagonal_part(const ProductObservable& a);

/// Product of the single-site normalized traces.
Complex normalized_trace(const ProductObservable& a);

/// Parses "1.1:Z,2:I" (P in {I, X, Y, Z}). The volume defaults to the deepest listed level.
ProductObservable parse_observable(std::string_view text, const TreeParams& params,
                                   int volume = -1);

std::string to_string(const ProductObservable& a);

}  // namespace cqmc
