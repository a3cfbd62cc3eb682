#pragma once

// The discretized diffusion lattice used as the reference design problem:
//   G(z,lambda) = tau lambda / (1 - (gamma/2)(z^{-1} + 2 alpha + z) lambda)
//   W(z,lambda) =     lambda / (1 - (c/2)(z^{-1} + 2 a + z) lambda)
// with tau = 1, gamma = 1/3, alpha = 1, c = 1/4, a = 1.

#include <array>

#include "conesynth/rational.hpp"
#include "conesynth/synthesis.hpp"

namespace conesynth::example {

struct Parameters {
  double tau = 1.0;
  double gamma = 1.0 / 3.0;
  double alpha = 1.0;
  double c = 0.25;
  double a = 1.0;
};

// gain * lambda / (1 - (coupling/2)(z^{-1} + 2 center + z) lambda)
RationalTransfer first_order_lattice(double gain, double coupling, double center);

RationalTransfer plant(const Parameters& p = {});
RationalTransfer weight(const Parameters& p = {});
Problem problem(const Parameters& p = {});

// rho(z) = z/6 + 1/3 + z^{-1}/6 and r(z) = z/8 + 1/4 + z^{-1}/8 for the defaults.
BiSeries rho(const Parameters& p = {});
BiSeries r(const Parameters& p = {});

// Reference closed-loop norms for m = 0..6 and the two bounds.
inline constexpr std::array<double, 7> kReferenceJ = {1.0261, 1.0180, 1.0162, 1.0159, 1.0158, 1.0158, 1.0157};
inline constexpr double kReferenceOptimal = 1.0157;
inline constexpr double kReferenceCentralized = 1.0000;

// The reference controller for m = 1, scaled by 1536:
// numerator coefficients by lambda power (z^{-3}..z^{3} rows) and denominator.
BiSeries reference_controller_num();
BiSeries reference_controller_den();

}  // namespace conesynth::example
