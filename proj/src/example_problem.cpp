#include "conesynth/example_problem.hpp"

namespace conesynth::example {

RationalTransfer first_order_lattice(double gain, double coupling, double center) {
  BiSeries den(SupportBox{-1, 1, 0, 1});
  den.at(0, 0) = 1.0;
  den.at(-1, 1) = -coupling / 2.0;
  den.at(0, 1) = -coupling * center;
  den.at(1, 1) = -coupling / 2.0;
  return {BiSeries::monomial(gain, 0, 1), den};
}

RationalTransfer plant(const Parameters& p) { return first_order_lattice(p.tau, p.gamma, p.alpha); }
RationalTransfer weight(const Parameters& p) { return first_order_lattice(1.0, p.c, p.a); }
Problem problem(const Parameters& p) { return Problem::disturbance_attenuation(plant(p), weight(p)); }

BiSeries rho(const Parameters& p) { return BiSeries::laurent(-1, {p.gamma / 2.0, p.gamma * p.alpha, p.gamma / 2.0}); }
BiSeries r(const Parameters& p) { return BiSeries::laurent(-1, {p.c / 2.0, p.c * p.a, p.c / 2.0}); }

BiSeries reference_controller_num() {
  BiSeries n(SupportBox{-3, 3, 0, 3});
  n.at(0, 0) = -384;
  n.at(-1, 1) = 16, n.at(0, 1) = 80, n.at(1, 1) = 16;
  const double l2[] = {20, 66, 92, 66, 20};
  for (int i = -2; i <= 2; ++i) n.at(i, 2) = l2[i + 2];
  const double l3[] = {-2, -11, -26, -34, -26, -11, -2};
  for (int i = -3; i <= 3; ++i) n.at(i, 3) = l3[i + 3];
  return n;
}

BiSeries reference_controller_den() {
  BiSeries d(SupportBox{-2, 2, 0, 3});
  d.at(0, 0) = 1536;
  d.at(0, 1) = -384;
  d.at(-1, 2) = -48, d.at(0, 2) = -48, d.at(1, 2) = -48;
  const double l3[] = {12, 42, 60, 42, 12};
  for (int i = -2; i <= 2; ++i) d.at(i, 3) = l3[i + 2];
  return d;
}

}  // namespace conesynth::example
