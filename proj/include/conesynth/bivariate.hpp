#pragma once

// Truncated bivariate series  sum c(i,t) z^i lambda^t.
//
// z is the two-sided spatial shift, lambda the temporal delay. Storage is a
// dense grid over a SupportBox; every coefficient outside the box is zero.
// Operations that could produce an infinite result take an explicit output
// box and are exact inside it unless documented otherwise.

#include <complex>
#include <span>
#include <vector>

#include "conesynth/exec.hpp"

namespace conesynth {

struct SupportBox {
  int spatial_min = 0;
  int spatial_max = 0;
  int temporal_min = 0;
  int temporal_max = 0;

  int width() const { return spatial_max - spatial_min + 1; }
  int height() const { return temporal_max - temporal_min + 1; }
  std::size_t size() const { return static_cast<std::size_t>(width()) * height(); }

  bool contains(int i, int t) const {
    return i >= spatial_min && i <= spatial_max && t >= temporal_min && t <= temporal_max;
  }
  bool valid() const { return spatial_min <= spatial_max && temporal_min <= temporal_max; }

  // |i| <= S, t in [t0, t1].
  static SupportBox symmetric(int S, int t0, int t1) { return {-S, S, t0, t1}; }
  static SupportBox hull(const SupportBox& a, const SupportBox& b);
  // Minkowski sum: the support of a product.
  static SupportBox sum(const SupportBox& a, const SupportBox& b);

  friend bool operator==(const SupportBox&, const SupportBox&) = default;
};

class BiSeries {
 public:
  // The zero series, stored on the single cell (0,0).
  BiSeries();
  explicit BiSeries(const SupportBox& box);

  static BiSeries delta() { return monomial(1.0, 0, 0); }
  static BiSeries monomial(double c, int i, int t);
  // Laurent polynomial in z placed on lambda^t; coeffs[k] multiplies z^(lo+k).
  static BiSeries laurent(int lo, std::span<const double> coeffs, int t = 0);
  static BiSeries laurent(int lo, std::initializer_list<double> coeffs, int t = 0) {
    return laurent(lo, std::span<const double>(coeffs.begin(), coeffs.size()), t);
  }

  const SupportBox& box() const { return box_; }

  // Zero outside the box.
  double operator()(int i, int t) const {
    return box_.contains(i, t) ? data_[index(i, t)] : 0.0;
  }
  // Requires (i,t) inside the box.
  double& at(int i, int t);
  void set(int i, int t, double v) { at(i, t) = v; }

  // Row of coefficients at fixed t, ordered by i from spatial_min.
  std::span<const double> row(int t) const;
  std::span<double> row(int t);
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  // Smallest box holding every coefficient with |c| > tol (zero series -> origin).
  BiSeries trimmed(double tol = 0.0) const;
  // Same coefficients re-stored on `box` (cropping whatever falls outside).
  BiSeries reboxed(const SupportBox& box) const;

  bool is_zero(double tol = 0.0) const;
  bool is_temporally_causal(double tol = 0.0) const;

 private:
  std::size_t index(int i, int t) const {
    return static_cast<std::size_t>(t - box_.temporal_min) * box_.width() + (i - box_.spatial_min);
  }

  SupportBox box_;
  std::vector<double> data_;
};

// Coefficients c[t] for t in [temporal_min, temporal_min + size).
class LambdaSeries {
 public:
  LambdaSeries() = default;
  LambdaSeries(int temporal_min, std::vector<double> coeffs)
      : temporal_min_(temporal_min), coeffs_(std::move(coeffs)) {}

  int temporal_min() const { return temporal_min_; }
  int temporal_max() const { return temporal_min_ + static_cast<int>(coeffs_.size()) - 1; }
  bool empty() const { return coeffs_.empty(); }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double operator()(int t) const {
    const int k = t - temporal_min_;
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
  }

  double norm_sq() const;
  // Multiply by lambda^d.
  LambdaSeries shifted(int d) const { return {temporal_min_ + d, coeffs_}; }
  // H2 part (t >= 0) and its orthogonal complement (t < 0).
  LambdaSeries causal_part() const;
  LambdaSeries anticausal_part() const;
  // Keep t <= max_t.
  LambdaSeries truncated(int max_t) const;

 private:
  int temporal_min_ = 0;
  std::vector<double> coeffs_;
};

BiSeries add(const BiSeries& a, const BiSeries& b);
BiSeries sub(const BiSeries& a, const BiSeries& b);
BiSeries scale(const BiSeries& a, double s);
BiSeries negate(const BiSeries& a);

// 2-D convolution restricted to out_box. Exact inside out_box.
BiSeries mul(const BiSeries& a, const BiSeries& b, const SupportBox& out_box,
             Exec exec = Exec::parallel);
// Full product on the Minkowski-sum box.
BiSeries mul(const BiSeries& a, const BiSeries& b, Exec exec = Exec::parallel);

// Causal reciprocal via c_k = -d0^{-1} sum_{j=1..k} d_j c_{k-j}, each c_k cropped
// to |i| <= S. Output box is [-S,S] x [0,T]; mul(a, result) equals delta for
// t <= T and |i| <= S - w*T where w is the spatial half-width of a.
// Throws NonScalarLeadingTerm / SingularLeadingTerm.
BiSeries invert_causal(const BiSeries& a, int T, int S, double tol = 1e-14);

double h2_norm_sq(const BiSeries& a);

// t >= 0 and t < 0 halves; they sum back to a.
BiSeries causal_part(const BiSeries& a);
BiSeries anticausal_part(const BiSeries& a);

// Multiply by lambda^d (d may be negative).
BiSeries shift_temporal(const BiSeries& a, int d);

// |c(i,t)| <= tol whenever t < |i|.
bool is_cone_causal(const BiSeries& a, double tol = 0.0);

// Throws IndexOutOfBox if i is outside the box.
LambdaSeries spatial_slice(const BiSeries& a, int i);

// sum c(i,t) e^{j i theta} e^{j t w}
std::complex<double> torus_eval(const BiSeries& a, double theta, double w);

// Rectangular truncation: |i| <= S and t <= T.
BiSeries truncate_rect(const BiSeries& a, int S, int T);
// Cone-order truncation: keep t <= |i| + N (truncates each g~_i at order N).
BiSeries truncate_cone_order(const BiSeries& a, int N);

double max_abs_diff(const BiSeries& a, const BiSeries& b);

// Spatial half-width: max |i| over the box.
int spatial_reach(const SupportBox& box);

}  // namespace conesynth
