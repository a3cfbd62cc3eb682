#include "conesynth/factorization.hpp"

#include <cmath>
#include <sstream>

#include "conesynth/errors.hpp"

namespace conesynth {

namespace {

constexpr const char* kWhere = "inner_outer";

InnerOuter factor_one(const RationalTransfer& T2, const FactorizationOptions& opts) {
  const BiSeries num = T2.num().trimmed();
  if (num.is_zero()) throw Error(ErrorCode::UnsupportedInnerStructure, kWhere, "T2 is identically zero");
  if (!num.is_temporally_causal()) {
    throw Error(ErrorCode::InvalidInput, kWhere, "T2 numerator has negative temporal powers");
  }
  const int d = num.box().temporal_min;
  const BiSeries deflated = shift_temporal(num, -d);
  for (int i = deflated.box().spatial_min; i <= deflated.box().spatial_max; ++i) {
    if (i != 0 && deflated(i, 0) != 0.0) {
      std::ostringstream msg;
      msg << "after removing lambda^" << d << " the leading numerator coefficient depends on z (z^" << i
          << " term " << deflated(i, 0) << "); only pure temporal-delay inner factors are supported";
      throw Error(ErrorCode::UnsupportedInnerStructure, kWhere, msg.str());
    }
  }
  if (std::abs(deflated(0, 0)) < 1e-14) {
    throw Error(ErrorCode::UnsupportedInnerStructure, kWhere, "deflated numerator has zero leading term");
  }
  RationalTransfer outer(deflated, T2.den());

  const int order = opts.cone_check_order;
  const BiSeries e = expand(outer, order, order);
  const auto& b = e.box();
  for (int t = b.temporal_min; t <= b.temporal_max; ++t) {
    for (int i = b.spatial_min; i <= b.spatial_max; ++i) {
      if (t < std::abs(i) && std::abs(e(i, t)) > opts.cone_tol) {
        std::ostringstream msg;
        msg << "outer factor is not cone causal: coefficient " << e(i, t) << " at (i=" << i << ", t=" << t << ")";
        throw Error(ErrorCode::UnsupportedInnerStructure, kWhere, msg.str());
      }
    }
  }

  const OuterProbe probe = probe_outer(outer, opts.grid_n, opts.margin);
  if (!probe.outer) {
    std::ostringstream msg;
    msg << "outer factor has a lambda-root of magnitude " << probe.min_magnitude << " at theta=" << probe.theta
        << " in its " << (probe.in_numerator ? "numerator" : "denominator")
        << "; the inner factor is not a pure temporal delay";
    throw Error(ErrorCode::UnsupportedInnerStructure, kWhere, msg.str());
  }
  return {d, outer, {outer}};
}

}  // namespace

InnerOuter inner_outer(const RationalTransfer& T2, const FactorizationOptions& opts) {
  return factor_one(T2, opts);
}

InnerOuter inner_outer(std::span<const RationalTransfer> factors, const FactorizationOptions& opts) {
  if (factors.empty()) throw Error(ErrorCode::InvalidInput, kWhere, "no factors given");
  InnerOuter result = factor_one(factors.front(), opts);
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const InnerOuter f = factor_one(factors[k], opts);
    result.delay_d += f.delay_d;
    result.outer = rat_mul(result.outer, f.outer);
    result.outer_factors.push_back(f.outer);
  }
  return result;
}

BiSeries apply_inner_adjoint(const RationalTransfer& T1, int d, int S, int T_neg, int T_pos) {
  if (d < 0) throw Error(ErrorCode::InvalidInput, "apply_inner_adjoint", "delay must be nonnegative");
  const BiSeries shifted = shift_temporal(expand(T1, S, T_pos + d), -d);
  return shifted.reboxed({-S, S, -T_neg, T_pos});
}

}  // namespace conesynth
