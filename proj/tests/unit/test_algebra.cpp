#include <doctest.h>

#include <random>

#include "cqmc/algebra.hpp"
#include "cqmc/errors.hpp"

using namespace cqmc;

namespace {

PauliOp random_op(std::mt19937_64& rng, bool real_diagonal) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  PauliOp a{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
  if (real_diagonal) {
    a.a0 = a.a0.real();
    a.a3 = a.a3.real();
  }
  return a;
}

}  // namespace

TEST_CASE("diagonal part of basic operators") {
  CHECK(diagonal_part(PauliOp::sigma_x()) == DiagOp{0.0, 0.0});
  CHECK(diagonal_part(PauliOp::sigma_y()) == DiagOp{0.0, 0.0});
  CHECK(diagonal_part(PauliOp{2.0, 5.0, 0.0, 3.0}) == DiagOp{5.0, -1.0});
  CHECK(diagonal_part(PauliOp::identity()) == DiagOp{1.0, 1.0});
  CHECK(diagonal_part(PauliOp::sigma_z()) == DiagOp{1.0, -1.0});
}

TEST_CASE("complex diagonal coefficients are rejected") {
  CHECK_THROWS_AS(diagonal_part(PauliOp{{1.0, 0.5}, 0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(diagonal_part(PauliOp{1.0, 0.0, 0.0, {0.0, 1.0}}), DomainError);
  CHECK_NOTHROW(diagonal_part(PauliOp{1.0, {0.0, 1.0}, {2.0, 3.0}, 0.0}));
}

TEST_CASE("normalized traces") {
  CHECK(normalized_trace(DiagOp{1.0, -1.0}) == 0.0);
  CHECK(normalized_trace(DiagOp::scalar(1.0)) == 1.0);
  CHECK(normalized_trace(DiagOp{3.0, 1.0}) == 2.0);
}

TEST_CASE("matrix form round-trips") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const PauliOp a = random_op(rng, false);
    const PauliOp b = PauliOp::from_matrix(a.to_matrix());
    CHECK(std::abs(a.a0 - b.a0) < 1e-15);
    CHECK(std::abs(a.a1 - b.a1) < 1e-15);
    CHECK(std::abs(a.a2 - b.a2) < 1e-15);
    CHECK(std::abs(a.a3 - b.a3) < 1e-15);
  }
  const Matrix2c sy = PauliOp::sigma_y().to_matrix();
  CHECK(sy[0][1] == Complex(0.0, -1.0));
  CHECK(sy[1][0] == Complex(0.0, 1.0));
}

TEST_CASE("diagonal part is idempotent, linear and trace preserving") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const PauliOp a = random_op(rng, true);
    const PauliOp b = random_op(rng, true);
    const DiagOp ea = diagonal_part(a);
    const DiagOp eea = diagonal_part(ea.to_pauli());
    CHECK(eea.dp == doctest::Approx(ea.dp).epsilon(1e-15));
    CHECK(eea.dm == doctest::Approx(ea.dm).epsilon(1e-15));
    const DiagOp sum = diagonal_part(a + 2.0 * b);
    CHECK(sum.dp == doctest::Approx(ea.dp + 2.0 * diagonal_part(b).dp));
    CHECK(sum.dm == doctest::Approx(ea.dm + 2.0 * diagonal_part(b).dm));
    CHECK(normalized_trace(ea) == doctest::Approx(normalized_trace(a).real()));
  }
}

TEST_CASE("diagonal operators multiply componentwise") {
  const DiagOp a{2.0, 3.0}, b{5.0, -1.0};
  CHECK(a * b == DiagOp{10.0, -3.0});
  CHECK(a * b == b * a);
  CHECK(DiagOp::from_pauli(2.0, 3.0) == DiagOp{5.0, -1.0});
  CHECK(DiagOp{5.0, -1.0}.a0() == 2.0);
  CHECK(DiagOp{5.0, -1.0}.a3() == 3.0);
  CHECK(DiagOp{1.0, 0.5}.is_positive());
  CHECK_FALSE(DiagOp{1.0, 0.0}.is_positive());
}

TEST_CASE("product observables") {
  const TreeParams k2(2);
  const ProductObservable a = parse_observable("1.1:Z,2:X", k2);
  CHECK(a.volume == 2);
  CHECK(a.sites.size() == 2);
  CHECK(to_string(a) == "1.1:Z,2:X");

  const ProductObservable e = product_diagonal_part(a);
  CHECK(e.sites.at(VertexCoord::parse("1.1")) == PauliOp::sigma_z());
  CHECK(e.sites.at(VertexCoord::parse("2")) == PauliOp::zero());
  CHECK(product_diagonal_part(ProductObservable{}).sites.empty());

  CHECK(normalized_trace(parse_observable("1:I,2:I", k2)) == Complex(1.0));
  CHECK(normalized_trace(parse_observable("1:I,2:Z", k2)) == Complex(0.0));
  CHECK(parse_observable("0:Z", k2, 3).volume == 3);

  CHECK_THROWS_AS(parse_observable("1.3:Z", k2), ParamError);
  CHECK_THROWS_AS(parse_observable("1:Q", k2), ParamError);
  CHECK_THROWS_AS(parse_observable("1Z", k2), ParamError);
  CHECK_THROWS_AS(parse_observable("1:Z,1:X", k2), ParamError);
}

TEST_CASE("trace factorizes over tensor factors") {
  ProductObservable a;
  a.sites.emplace(VertexCoord::parse("1"), PauliOp{0.5, 1.0, 0.0, 0.2});
  a.sites.emplace(VertexCoord::parse("2"), PauliOp{-3.0, 0.0, 1.0, 0.0});
  CHECK(normalized_trace(a) == Complex(-1.5));
}
