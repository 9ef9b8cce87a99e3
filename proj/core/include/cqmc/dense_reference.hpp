#pragma once

// Direct dense-matrix evaluation of finite-volume states on small volumes.
// Builds K_n = w0^{1/2} K_[0,1] ... K_[n-1,n] h_n^{1/2} and W = K_n K_n^* as
// full complex 2^S x 2^S matrices by Kronecker embedding and pairs W with the
// full matrix of the observable. No diagonal reduction is applied, so this is
// an independent check of the weight oracle and of the conditional expectation.

#include "cqmc/algebra.hpp"
#include "cqmc/qmc.hpp"

namespace cqmc::reference {

inline constexpr int kDenseSiteCap = 8;

/// Tr(W_{n]} a) with Tr(1) = 1. Throws CapacityError above kDenseSiteCap sites
/// and SupportError for observables outside Lambda_n.
Complex dense_state_value(const ModelParams& p, const BoundaryCondition& bc, int n,
                          const ProductObservable& a);

}  // namespace cqmc::reference
