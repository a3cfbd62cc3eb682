#pragma once

// l-causal state-space realizations
//
//     G = D + lambda C(z) (I - lambda A(z))^{-1} B,
//
// with A(z), C(z) of z-degree at most one on each side and B, D constant.
// This class coincides with the cone-causal systems and is closed under the
// sum, product and inverse block formulas below.

#include <complex>

#include <Eigen/Dense>

#include "conesynth/bivariate.hpp"
#include "conesynth/rational.hpp"
#include "conesynth/synthesis.hpp"

namespace conesynth {

// M(z) = minus z^{-1} + zero + plus z
struct ZMatrix {
  Eigen::MatrixXd minus;
  Eigen::MatrixXd zero;
  Eigen::MatrixXd plus;

  ZMatrix() = default;
  ZMatrix(Eigen::Index rows, Eigen::Index cols)
      : minus(Eigen::MatrixXd::Zero(rows, cols)),
        zero(Eigen::MatrixXd::Zero(rows, cols)),
        plus(Eigen::MatrixXd::Zero(rows, cols)) {}
  ZMatrix(Eigen::MatrixXd m1, Eigen::MatrixXd m0, Eigen::MatrixXd p1);

  static ZMatrix constant(const Eigen::MatrixXd& m) {
    return {Eigen::MatrixXd::Zero(m.rows(), m.cols()), m, Eigen::MatrixXd::Zero(m.rows(), m.cols())};
  }

  Eigen::Index rows() const { return zero.rows(); }
  Eigen::Index cols() const { return zero.cols(); }

  // Coefficient of z^power, power in {-1, 0, 1}.
  const Eigen::MatrixXd& coeff(int power) const { return power < 0 ? minus : (power == 0 ? zero : plus); }
  Eigen::MatrixXd& coeff(int power) { return power < 0 ? minus : (power == 0 ? zero : plus); }

  Eigen::MatrixXcd eval(double theta) const;

  ZMatrix operator+(const ZMatrix& o) const { return {minus + o.minus, zero + o.zero, plus + o.plus}; }
  ZMatrix operator-(const ZMatrix& o) const { return {minus - o.minus, zero - o.zero, plus - o.plus}; }
  ZMatrix operator-() const { return {-minus, -zero, -plus}; }
};

ZMatrix operator*(const Eigen::MatrixXd& left, const ZMatrix& m);
ZMatrix operator*(const ZMatrix& m, const Eigen::MatrixXd& right);

// Stack blocks [[a, b], [c, d]].
ZMatrix block2x2(const ZMatrix& a, const ZMatrix& b, const ZMatrix& c, const ZMatrix& d);
ZMatrix hcat(const ZMatrix& a, const ZMatrix& b);

struct LRealization {
  ZMatrix A;  // n x n
  Eigen::MatrixXd B;  // n x p
  ZMatrix C;  // q x n
  Eigen::MatrixXd D;  // q x p

  Eigen::Index states() const { return B.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
  Eigen::Index outputs() const { return D.rows(); }

  // Static gain, no states.
  static LRealization gain(const Eigen::MatrixXd& D);
  static LRealization scalar_gain(double d) { return gain(Eigen::MatrixXd::Constant(1, 1, d)); }
};

// G^{-1}: A - B D^{-1} C, -B D^{-1}, D^{-1} C, D^{-1}. Throws SingularD.
LRealization ss_inverse(const LRealization& g);
// Parallel and series connections; throw DimensionMismatch.
LRealization ss_add(const LRealization& g1, const LRealization& g2);
LRealization ss_mul(const LRealization& g1, const LRealization& g2);

// Exact realization of a finite cone-causal polynomial as tapped delay
// chains. Each chain drifts one site per step in a fixed direction for a
// fixed number of steps, and the output map C(z) reads a three-site window
// around the chain's offset. Throws NotCone.
LRealization realize_cone_polynomial(const BiSeries& P);

// Controllable companion form when every denominator coefficient and every
// C entry has z-degree <= 1; otherwise num and den are realized separately
// and combined as num * den^{-1}. Throws NotRealizableAsLCausal.
LRealization realize_rational(const RationalTransfer& r);
// Product of factor realizations, in order.
LRealization realize_product(std::span<const RationalTransfer> factors);

// Controller K = -G3 (I - Gyu G3)^{-1} as the positive-feedback
// interconnection of G3 = G1 / T2out with Gyu. Throws AlgebraicLoop.
LRealization feedback_realize_K(const LRealization& g3, const LRealization& gyu);

// Impulse response of a SISO realization on |i| <= S, 0 <= t <= T.
// Throws DimensionMismatch for non-SISO input.
BiSeries expand_realization(const LRealization& g, int S, int T);

// max over a theta grid of the spectral radius of A(e^{j theta}).
double stability_probe(const LRealization& g, int grid_n = 256);

// The realized pieces of a synthesized controller.
struct ControllerRealization {
  LRealization G1;
  LRealization T2out;
  LRealization G3;  // G1 * T2out^{-1}
  LRealization Gyu;
  LRealization K;
};

ControllerRealization realize_controller(const SynthesisResult& result, const Problem& prob);

}  // namespace conesynth
