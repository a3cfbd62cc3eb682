#include "conesynth/bivariate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "conesynth/errors.hpp"
#include "conesynth/kernels.hpp"

namespace conesynth {

namespace {

kernels::GridView view(const BiSeries& a) {
  const auto& b = a.box();
  return {a.data().data(), b.spatial_min, b.temporal_min, b.width(), b.height()};
}

kernels::MutGridView mut_view(BiSeries& a) {
  const auto b = a.box();
  return {a.data().data(), b.spatial_min, b.temporal_min, b.width(), b.height()};
}

}  // namespace

SupportBox SupportBox::hull(const SupportBox& a, const SupportBox& b) {
  return {std::min(a.spatial_min, b.spatial_min), std::max(a.spatial_max, b.spatial_max),
          std::min(a.temporal_min, b.temporal_min), std::max(a.temporal_max, b.temporal_max)};
}

SupportBox SupportBox::sum(const SupportBox& a, const SupportBox& b) {
  return {a.spatial_min + b.spatial_min, a.spatial_max + b.spatial_max,
          a.temporal_min + b.temporal_min, a.temporal_max + b.temporal_max};
}

int spatial_reach(const SupportBox& box) {
  return std::max(std::abs(box.spatial_min), std::abs(box.spatial_max));
}

// ---------------------------------------------------------------------------
// BiSeries

BiSeries::BiSeries() : BiSeries(SupportBox{}) {}

BiSeries::BiSeries(const SupportBox& box) : box_(box) {
  if (!box.valid()) {
    throw Error(ErrorCode::InvalidInput, "BiSeries",
                "support box must satisfy min <= max on both axes");
  }
  data_.assign(box.size(), 0.0);
}

BiSeries BiSeries::monomial(double c, int i, int t) {
  BiSeries s(SupportBox{i, i, t, t});
  s.data_[0] = c;
  return s;
}

BiSeries BiSeries::laurent(int lo, std::span<const double> coeffs, int t) {
  if (coeffs.empty()) return shift_temporal(BiSeries(), t);
  BiSeries s(SupportBox{lo, lo + static_cast<int>(coeffs.size()) - 1, t, t});
  std::copy(coeffs.begin(), coeffs.end(), s.data_.begin());
  return s;
}

double& BiSeries::at(int i, int t) {
  if (!box_.contains(i, t)) {
    throw Error(ErrorCode::IndexOutOfBox, "BiSeries::at",
                "(" + std::to_string(i) + "," + std::to_string(t) + ") outside the support box");
  }
  return data_[index(i, t)];
}

std::span<const double> BiSeries::row(int t) const {
  return {data_.data() + static_cast<std::size_t>(t - box_.temporal_min) * box_.width(),
          static_cast<std::size_t>(box_.width())};
}

std::span<double> BiSeries::row(int t) {
  return {data_.data() + static_cast<std::size_t>(t - box_.temporal_min) * box_.width(),
          static_cast<std::size_t>(box_.width())};
}

BiSeries BiSeries::trimmed(double tol) const {
  bool any = false;
  SupportBox tight{};
  for (int t = box_.temporal_min; t <= box_.temporal_max; ++t) {
    for (int i = box_.spatial_min; i <= box_.spatial_max; ++i) {
      if (std::abs(data_[index(i, t)]) <= tol) continue;
      if (!any) {
        tight = {i, i, t, t};
        any = true;
      } else {
        tight = SupportBox::hull(tight, {i, i, t, t});
      }
    }
  }
  if (!any) return BiSeries();
  BiSeries out = reboxed(tight);
  for (double& v : out.data_)
    if (std::abs(v) <= tol) v = 0.0;
  return out;
}

BiSeries BiSeries::reboxed(const SupportBox& box) const {
  BiSeries out(box);
  const int i_lo = std::max(box.spatial_min, box_.spatial_min);
  const int i_hi = std::min(box.spatial_max, box_.spatial_max);
  const int t_lo = std::max(box.temporal_min, box_.temporal_min);
  const int t_hi = std::min(box.temporal_max, box_.temporal_max);
  for (int t = t_lo; t <= t_hi; ++t)
    for (int i = i_lo; i <= i_hi; ++i) out.data_[out.index(i, t)] = data_[index(i, t)];
  return out;
}

bool BiSeries::is_zero(double tol) const {
  return std::all_of(data_.begin(), data_.end(), [tol](double v) { return std::abs(v) <= tol; });
}

bool BiSeries::is_temporally_causal(double tol) const {
  for (int t = box_.temporal_min; t < std::min(0, box_.temporal_max + 1); ++t)
    for (double v : row(t))
      if (std::abs(v) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// LambdaSeries

double LambdaSeries::norm_sq() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return s;
}

LambdaSeries LambdaSeries::causal_part() const {
  if (temporal_max() < 0) return {};
  const int lo = std::max(0, temporal_min_);
  return {lo, std::vector<double>(coeffs_.begin() + (lo - temporal_min_), coeffs_.end())};
}

LambdaSeries LambdaSeries::anticausal_part() const {
  if (temporal_min_ >= 0) return {};
  const int hi = std::min(-1, temporal_max());
  return {temporal_min_, std::vector<double>(coeffs_.begin(), coeffs_.begin() + (hi - temporal_min_ + 1))};
}

LambdaSeries LambdaSeries::truncated(int max_t) const {
  if (max_t < temporal_min_) return {};
  const int hi = std::min(max_t, temporal_max());
  return {temporal_min_, std::vector<double>(coeffs_.begin(), coeffs_.begin() + (hi - temporal_min_ + 1))};
}

// ---------------------------------------------------------------------------
// Arithmetic

BiSeries add(const BiSeries& a, const BiSeries& b) {
  BiSeries out = a.reboxed(SupportBox::hull(a.box(), b.box()));
  const auto& bb = b.box();
  for (int t = bb.temporal_min; t <= bb.temporal_max; ++t)
    for (int i = bb.spatial_min; i <= bb.spatial_max; ++i) out.at(i, t) += b(i, t);
  return out;
}

BiSeries scale(const BiSeries& a, double s) {
  BiSeries out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

BiSeries negate(const BiSeries& a) { return scale(a, -1.0); }

BiSeries sub(const BiSeries& a, const BiSeries& b) { return add(a, negate(b)); }

BiSeries mul(const BiSeries& a, const BiSeries& b, const SupportBox& out_box, Exec exec) {
  BiSeries out(out_box);
  // Gather over the smaller operand.
  const bool a_small = a.box().size() <= b.box().size();
  const BiSeries& small = a_small ? a : b;
  const BiSeries& big = a_small ? b : a;
  kernels::convolve2d(view(small), view(big), mut_view(out), exec);
  return out;
}

BiSeries mul(const BiSeries& a, const BiSeries& b, Exec exec) {
  return mul(a, b, SupportBox::sum(a.box(), b.box()), exec);
}

BiSeries invert_causal(const BiSeries& a, int T, int S, double tol) {
  const char* where = "invert_causal";
  if (T < 0 || S < 0) throw Error(ErrorCode::InvalidInput, where, "orders must be nonnegative");
  if (!a.is_temporally_causal()) {
    throw Error(ErrorCode::InvalidInput, where, "series has coefficients at negative temporal powers");
  }
  const auto& ab = a.box();
  if (ab.contains(0, 0) || ab.temporal_min <= 0) {
    for (int i = ab.spatial_min; i <= ab.spatial_max; ++i) {
      if (i != 0 && std::abs(a(i, 0)) > 0.0) {
        throw Error(ErrorCode::NonScalarLeadingTerm, where,
                    "lambda^0 coefficient depends on z (nonzero at z^" + std::to_string(i) + ")");
      }
    }
  }
  const double d0 = a(0, 0);
  if (std::abs(d0) < tol) {
    throw Error(ErrorCode::SingularLeadingTerm, where, "lambda^0 coefficient is zero");
  }

  BiSeries c(SupportBox::symmetric(S, 0, T));
  c.at(0, 0) = 1.0 / d0;
  const int jmax = std::min(T, ab.temporal_max);
  for (int k = 1; k <= T; ++k) {
    auto ck = c.row(k);
    for (int j = 1; j <= std::min(k, jmax); ++j) {
      if (j < ab.temporal_min) continue;
      const auto prev = c.row(k - j);
      for (int p = ab.spatial_min; p <= ab.spatial_max; ++p) {
        const double dj = a(p, j);
        if (dj == 0.0) continue;
        // ck[i] -= dj * prev[i - p], indices relative to -S
        const int lo = std::max(0, p);
        const int hi = std::min(2 * S + 1, 2 * S + 1 + p);
        for (int i = lo; i < hi; ++i) ck[i] -= dj * prev[i - p];
      }
    }
    for (double& v : ck) v /= d0;
  }
  return c;
}

double h2_norm_sq(const BiSeries& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

BiSeries causal_part(const BiSeries& a) {
  const auto& b = a.box();
  if (b.temporal_max < 0) return BiSeries();
  return a.reboxed({b.spatial_min, b.spatial_max, std::max(0, b.temporal_min), b.temporal_max});
}

BiSeries anticausal_part(const BiSeries& a) {
  const auto& b = a.box();
  if (b.temporal_min >= 0) return BiSeries();
  return a.reboxed({b.spatial_min, b.spatial_max, b.temporal_min, std::min(-1, b.temporal_max)});
}

BiSeries shift_temporal(const BiSeries& a, int d) {
  auto b = a.box();
  b.temporal_min += d;
  b.temporal_max += d;
  BiSeries out(b);
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  return out;
}

bool is_cone_causal(const BiSeries& a, double tol) {
  const auto& b = a.box();
  for (int t = b.temporal_min; t <= b.temporal_max; ++t)
    for (int i = b.spatial_min; i <= b.spatial_max; ++i)
      if (t < std::abs(i) && std::abs(a(i, t)) > tol) return false;
  return true;
}

LambdaSeries spatial_slice(const BiSeries& a, int i) {
  const auto& b = a.box();
  if (i < b.spatial_min || i > b.spatial_max) {
    throw Error(ErrorCode::IndexOutOfBox, "spatial_slice",
                "spatial index " + std::to_string(i) + " outside the support box");
  }
  std::vector<double> c(b.height());
  for (int t = b.temporal_min; t <= b.temporal_max; ++t) c[t - b.temporal_min] = a(i, t);
  return {b.temporal_min, std::move(c)};
}

std::complex<double> torus_eval(const BiSeries& a, double theta, double w) {
  const auto& b = a.box();
  std::complex<double> acc = 0.0;
  for (int t = b.temporal_min; t <= b.temporal_max; ++t) {
    std::complex<double> row_sum = 0.0;
    for (int i = b.spatial_min; i <= b.spatial_max; ++i) {
      if (const double v = a(i, t); v != 0.0) row_sum += v * std::polar(1.0, i * theta);
    }
    acc += row_sum * std::polar(1.0, t * w);
  }
  return acc;
}

BiSeries truncate_rect(const BiSeries& a, int S, int T) {
  const auto& b = a.box();
  const SupportBox box{std::max(b.spatial_min, -S), std::min(b.spatial_max, S), b.temporal_min,
                       std::min(b.temporal_max, T)};
  if (!box.valid()) return BiSeries();
  return a.reboxed(box);
}

BiSeries truncate_cone_order(const BiSeries& a, int N) {
  BiSeries out = a;
  const auto& b = a.box();
  for (int t = b.temporal_min; t <= b.temporal_max; ++t)
    for (int i = b.spatial_min; i <= b.spatial_max; ++i)
      if (t > std::abs(i) + N) out.at(i, t) = 0.0;
  return out;
}

double max_abs_diff(const BiSeries& a, const BiSeries& b) {
  const auto box = SupportBox::hull(a.box(), b.box());
  double m = 0.0;
  for (int t = box.temporal_min; t <= box.temporal_max; ++t)
    for (int i = box.spatial_min; i <= box.spatial_max; ++i) m = std::max(m, std::abs(a(i, t) - b(i, t)));
  return m;
}

}  // namespace conesynth
