#pragma once

// Inner-outer factorization for the pure temporal-delay inner class:
// T2 = lambda^d * T2out with T2out causally invertible and cone causal.

#include <span>
#include <vector>

#include "conesynth/rational.hpp"

namespace conesynth {

struct InnerOuter {
  int delay_d = 0;  // inner factor is lambda^d
  RationalTransfer outer;
  // Outer parts of the individual factors when T2 was supplied as a product;
  // their product equals `outer`. Realizations are built factor by factor.
  std::vector<RationalTransfer> outer_factors;
};

struct FactorizationOptions {
  int grid_n = 512;
  double margin = 1e-6;
  int cone_check_order = 16;  // expansion order for the cone-causality scan
  double cone_tol = 1e-12;
};

// Throws UnsupportedInnerStructure when the deflated numerator's lambda^0
// coefficient depends on z or vanishes, when the outer part is not cone
// causal, or when it fails the unit-circle outer probe.
InnerOuter inner_outer(const RationalTransfer& T2, const FactorizationOptions& opts = {});
InnerOuter inner_outer(std::span<const RationalTransfer> factors, const FactorizationOptions& opts = {});

// lambda^{-d} T1 expanded on |i| <= S, -T_neg <= t <= T_pos.
BiSeries apply_inner_adjoint(const RationalTransfer& T1, int d, int S, int T_neg, int T_pos);
inline BiSeries apply_inner_adjoint(const RationalTransfer& T1, int d, int S, int T_pos) {
  return apply_inner_adjoint(T1, d, S, d, T_pos);
}

}  // namespace conesynth
