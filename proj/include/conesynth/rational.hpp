#pragma once

// Rational spatio-temporal transfer functions N(z,lambda) / D(z,lambda).

#include <vector>

#include "conesynth/bivariate.hpp"

namespace conesynth {

// Kept in normal form: the denominator's lambda^0 coefficient is the scalar 1.
// No common-factor cancellation is attempted.
class RationalTransfer {
 public:
  RationalTransfer() : RationalTransfer(BiSeries(), BiSeries::delta()) {}
  // Throws NonScalarLeadingTerm / SingularLeadingTerm when den is not
  // causally invertible, InvalidInput when den has negative temporal powers.
  RationalTransfer(const BiSeries& num, const BiSeries& den);

  static RationalTransfer polynomial(const BiSeries& num) { return {num, BiSeries::delta()}; }

  const BiSeries& num() const { return num_; }
  const BiSeries& den() const { return den_; }

  bool has_unit_denominator() const;
  // Highest lambda power in num or den.
  int lambda_degree() const;

 private:
  BiSeries num_;
  BiSeries den_;
};

// num * den^{-1} on |i| <= S, min(0, tmin(num)) <= t <= T, exact on the whole box.
BiSeries expand(const RationalTransfer& r, int S, int T);

RationalTransfer rat_mul(const RationalTransfer& a, const RationalTransfer& b);
RationalTransfer rat_add(const RationalTransfer& a, const RationalTransfer& b);
RationalTransfer rat_sub(const RationalTransfer& a, const RationalTransfer& b);
RationalTransfer rat_scale(const RationalTransfer& a, double s);

struct CircleRoots {
  double theta = 0.0;
  // |roots| of d(e^{j theta}, lambda), ascending.
  std::vector<double> magnitudes;
  // Nominal leading lambda coefficient vanished at this theta; the affected
  // roots are at infinity and are not listed.
  bool degenerate = false;
};

// d must be a polynomial in lambda (no negative powers).
std::vector<CircleRoots> lambda_roots_on_circle(const BiSeries& d, int grid_n);

struct OuterProbe {
  bool outer = true;
  double min_magnitude = 0.0;  // smallest root magnitude found (inf if none)
  double theta = 0.0;          // where it occurs
  bool in_numerator = false;
};

OuterProbe probe_outer(const RationalTransfer& r, int grid_n = 512, double margin = 1e-6);

// Every lambda-root of num and den lies outside the disc of radius 1 + margin.
inline bool is_outer(const RationalTransfer& r, int grid_n = 512, double margin = 1e-6) {
  return probe_outer(r, grid_n, margin).outer;
}

}  // namespace conesynth
