#include "conesynth/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "conesynth/errors.hpp"

namespace conesynth {

namespace {

// Smallest sigma with |i| <= sigma * j for every nonzero den(i, j), j >= 1.
// The causal inverse then has support |i| <= sigma * k at order k.
int spread_rate(const BiSeries& den) {
  const auto& b = den.box();
  int sigma = 0;
  for (int j = std::max(1, b.temporal_min); j <= b.temporal_max; ++j)
    for (int i = b.spatial_min; i <= b.spatial_max; ++i)
      if (den(i, j) != 0.0) sigma = std::max(sigma, (std::abs(i) + j - 1) / j);
  return sigma;
}

}  // namespace

RationalTransfer::RationalTransfer(const BiSeries& num, const BiSeries& den) {
  const char* where = "RationalTransfer";
  BiSeries d = den.trimmed();
  if (!d.is_temporally_causal()) {
    throw Error(ErrorCode::InvalidInput, where, "denominator has negative temporal powers");
  }
  for (int i = d.box().spatial_min; i <= d.box().spatial_max; ++i) {
    if (i != 0 && d(i, 0) != 0.0) {
      throw Error(ErrorCode::NonScalarLeadingTerm, where,
                  "denominator lambda^0 coefficient depends on z (z^" + std::to_string(i) + ")");
    }
  }
  const double d0 = d(0, 0);
  if (std::abs(d0) < 1e-14) {
    throw Error(ErrorCode::SingularLeadingTerm, where, "denominator lambda^0 coefficient is zero");
  }
  num_ = d0 == 1.0 ? num.trimmed() : scale(num, 1.0 / d0).trimmed();
  den_ = d0 == 1.0 ? std::move(d) : scale(d, 1.0 / d0);
}

bool RationalTransfer::has_unit_denominator() const {
  return den_.box() == SupportBox{} && den_(0, 0) == 1.0;
}

int RationalTransfer::lambda_degree() const {
  return std::max(num_.box().temporal_max, den_.box().temporal_max);
}

BiSeries expand(const RationalTransfer& r, int S, int T) {
  const int t0 = std::min(0, r.num().box().temporal_min);
  const SupportBox out{-S, S, t0, std::max(T, t0)};
  if (r.has_unit_denominator()) return r.num().reboxed(out);
  // Work at the inverse's natural spatial support so nothing is cropped
  // before the final product.
  const int depth = T - t0;
  const int inner_s = std::max(0, spread_rate(r.den()) * depth);
  const BiSeries inv = invert_causal(r.den(), depth, inner_s);
  return mul(r.num(), inv, out);
}

RationalTransfer rat_mul(const RationalTransfer& a, const RationalTransfer& b) {
  return {mul(a.num(), b.num()), mul(a.den(), b.den())};
}

RationalTransfer rat_add(const RationalTransfer& a, const RationalTransfer& b) {
  if (a.has_unit_denominator() && b.has_unit_denominator()) {
    return RationalTransfer::polynomial(add(a.num(), b.num()));
  }
  return {add(mul(a.num(), b.den()), mul(b.num(), a.den())), mul(a.den(), b.den())};
}

RationalTransfer rat_scale(const RationalTransfer& a, double s) { return {scale(a.num(), s), a.den()}; }

RationalTransfer rat_sub(const RationalTransfer& a, const RationalTransfer& b) {
  return rat_add(a, rat_scale(b, -1.0));
}

std::vector<CircleRoots> lambda_roots_on_circle(const BiSeries& d, int grid_n) {
  if (!d.is_temporally_causal()) {
    throw Error(ErrorCode::InvalidInput, "lambda_roots_on_circle",
                "polynomial has negative temporal powers");
  }
  const BiSeries p = d.trimmed();
  const auto& b = p.box();
  const int degree = std::max(0, b.temporal_max);
  std::vector<CircleRoots> out;
  out.reserve(grid_n);
  std::vector<std::complex<double>> c(degree + 1);
  for (int g = 0; g < grid_n; ++g) {
    CircleRoots rec;
    rec.theta = 2.0 * std::numbers::pi * g / grid_n;
    double scale_max = 0.0;
    for (int k = 0; k <= degree; ++k) {
      c[k] = 0.0;
      for (int i = b.spatial_min; i <= b.spatial_max; ++i)
        if (const double v = p(i, k); v != 0.0) c[k] += v * std::polar(1.0, i * rec.theta);
      scale_max = std::max(scale_max, std::abs(c[k]));
    }
    int deg = degree;
    while (deg > 0 && std::abs(c[deg]) <= 1e-12 * std::max(scale_max, 1.0)) --deg;
    rec.degenerate = deg < degree;
    if (deg > 0) {
      Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
      for (int k = 0; k < deg; ++k) companion(0, k) = -c[deg - 1 - k] / c[deg];
      for (int k = 1; k < deg; ++k) companion(k, k - 1) = 1.0;
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
      for (int k = 0; k < deg; ++k) rec.magnitudes.push_back(std::abs(es.eigenvalues()(k)));
      std::sort(rec.magnitudes.begin(), rec.magnitudes.end());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

OuterProbe probe_outer(const RationalTransfer& r, int grid_n, double margin) {
  OuterProbe probe;
  probe.min_magnitude = std::numeric_limits<double>::infinity();
  auto scan = [&](const BiSeries& poly, bool is_num) {
    for (const auto& rec : lambda_roots_on_circle(poly, grid_n)) {
      if (!rec.magnitudes.empty() && rec.magnitudes.front() < probe.min_magnitude) {
        probe.min_magnitude = rec.magnitudes.front();
        probe.theta = rec.theta;
        probe.in_numerator = is_num;
      }
    }
  };
  scan(r.num(), true);
  scan(r.den(), false);
  probe.outer = probe.min_magnitude > 1.0 + margin;
  return probe;
}

}  // namespace conesynth
