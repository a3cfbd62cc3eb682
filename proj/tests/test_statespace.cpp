#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"

#include "conesynth/errors.hpp"
#include "conesynth/example_problem.hpp"
#include "conesynth/statespace.hpp"
#include "oracles.hpp"

using namespace conesynth;
using Eigen::MatrixXd;

namespace {

BiSeries one_minus(const BiSeries& p) { return sub(BiSeries::delta(), shift_temporal(p, 1)); }

BiSeries line_response(const LRealization& g, int S, int T) {
  return oracle::series_of(oracle::realization_response(g, T), SupportBox::symmetric(S, 0, T));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

bool degree_one(const LRealization& g) {
  // ZMatrix only stores z^-1, z^0, z^1, so this checks shapes are coherent
  return g.A.rows() == g.states() && g.A.cols() == g.states() && g.C.cols() == g.states() &&
         g.A.minus.rows() == g.A.plus.rows() && g.C.minus.cols() == g.C.plus.cols();
}

}  // namespace

TEST_CASE("inverse of a static gain") {
  const LRealization g = LRealization::gain(MatrixXd::Identity(2, 2));
  const LRealization inv = ss_inverse(g);
  CHECK(inv.states() == 0);
  CHECK(inv.D.isApprox(MatrixXd::Identity(2, 2)));
  CHECK(code_of([] { ss_inverse(LRealization::scalar_gain(0.0)); }) == ErrorCode::SingularD);
}

TEST_CASE("sum with the zero system") {
  std::mt19937 rng(3);
  const LRealization g = oracle::random_realization(rng, 2);
  const LRealization s = ss_add(g, LRealization::scalar_gain(0.0));
  CHECK(max_abs_diff(expand_realization(s, 6, 6), expand_realization(g, 6, 6)) <= 1e-15);
  CHECK(code_of([&] { ss_add(g, LRealization::gain(MatrixXd::Zero(2, 2))); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("cone polynomial realizations") {
  SUBCASE("G1 at m = 1") {
    BiSeries P = BiSeries::laurent(0, {0.25});
    P = add(P, BiSeries::laurent(-1, {0.0625, 0.09375, 0.0625}, 1));
    const LRealization g = realize_cone_polynomial(P);
    CHECK(g.states() == 1);
    CHECK(g.D(0, 0) == 0.25);
    CHECK(max_abs_diff(expand_realization(g, 4, 4), P.reboxed(SupportBox::symmetric(4, 0, 4))) == 0.0);
  }
  SUBCASE("delta") {
    const LRealization g = realize_cone_polynomial(BiSeries::delta());
    CHECK(g.states() == 0);
    CHECK(g.D(0, 0) == 1.0);
  }
  SUBCASE("single monomial z^2 lambda^2") {
    const LRealization g = realize_cone_polynomial(BiSeries::monomial(1.0, 2, 2));
    CHECK(g.states() == 2);
    const BiSeries e = expand_realization(g, 4, 4);
    CHECK(max_abs_diff(e, BiSeries::monomial(1.0, 2, 2).reboxed(e.box())) == 0.0);
  }
  CHECK(code_of([] { realize_cone_polynomial(BiSeries::monomial(1.0, 2, 1)); }) == ErrorCode::NotCone);
}

TEST_CASE("rational realizations") {
  const LRealization G = realize_rational(example::plant());
  CHECK(G.states() == 1);
  BiSeries p = BiSeries::delta();
  const BiSeries e = expand_realization(G, 8, 8);
  CHECK(e(0, 0) == 0.0);
  for (int k = 1; k <= 8; ++k) {
    for (int i = -8; i <= 8; ++i) CHECK(std::abs(e(i, k) - p(i, 0)) <= 1e-15);
    p = mul(p, example::rho());
  }
  const BiSeries poly = BiSeries::laurent(-1, {1, 2, 3}, 1);
  CHECK(max_abs_diff(expand_realization(realize_rational(RationalTransfer::polynomial(poly)), 3, 3),
                     poly.reboxed(SupportBox::symmetric(3, 0, 3))) == 0.0);
  // T2out^-1 realized from the factored outer parts
  const auto& factors = inner_outer(example::problem().T2_factors).outer_factors;
  const LRealization inv = ss_inverse(realize_product(factors));
  CHECK(inv.states() == 2);
  BiSeries want = sub(BiSeries::delta(), shift_temporal(add(example::rho(), example::r()), 1));
  want = add(want, shift_temporal(mul(example::rho(), example::r()), 2));
  CHECK(max_abs_diff(expand_realization(inv, 6, 6), want.reboxed(SupportBox::symmetric(6, 0, 6))) <= 1e-15);
  // a denominator reaching z^2 uses the fallback route
  const RationalTransfer wide(BiSeries::monomial(1.0, 0, 2),
                              sub(BiSeries::delta(), BiSeries::laurent(-2, {0.05, 0.1, 0.2, 0.1, 0.05}, 2)));
  const LRealization w = realize_rational(wide);
  CHECK(max_abs_diff(expand_realization(w, 8, 8), expand(wide, 8, 8)) <= 1e-14);
  const RationalTransfer noncone(BiSeries::monomial(1.0, 3, 1), BiSeries::delta());
  CHECK(code_of([&] { realize_rational(noncone); }) == ErrorCode::NotRealizableAsLCausal);
}

TEST_CASE("feedback realization") {
  SUBCASE("zero plant gives K = -G3") {
    BiSeries P = add(BiSeries::laurent(0, {0.5}), BiSeries::laurent(-1, {0.1, 0.2, 0.3}, 1));
    const LRealization g3 = realize_cone_polynomial(P);
    const LRealization K = feedback_realize_K(g3, LRealization::scalar_gain(0.0));
    CHECK(max_abs_diff(expand_realization(K, 4, 4), negate(expand_realization(g3, 4, 4))) <= 1e-15);
  }
  SUBCASE("feedthrough of the scalar loop") {
    const LRealization K = feedback_realize_K(LRealization::scalar_gain(-0.25), LRealization::scalar_gain(0.0));
    CHECK(K.D(0, 0) == 0.25);
    const LRealization K2 = feedback_realize_K(LRealization::scalar_gain(0.5), LRealization::scalar_gain(1.0));
    CHECK(K2.D(0, 0) == doctest::Approx(-1.0));  // -0.5 / (1 - 0.5)
  }
  CHECK(code_of([] { feedback_realize_K(LRealization::scalar_gain(1.0), LRealization::scalar_gain(1.0)); }) ==
        ErrorCode::AlgebraicLoop);
}

TEST_CASE("reference controller realization") {
  const Problem p = example::problem();
  const SynthesisResult r = synthesize(p, 1, 40, 40);
  const ControllerRealization c = realize_controller(r, p);
  CHECK(c.G1.states() == 1);
  CHECK(c.T2out.states() == 2);
  CHECK(c.G3.states() == 3);
  CHECK(c.Gyu.states() == 1);
  CHECK(c.K.states() == 4);
  CHECK(c.K.D(0, 0) == -0.25);
  const BiSeries k = expand_realization(c.K, 5, 8);
  CHECK(max_abs_diff(k, expand(r.K, 5, 8)) <= 1e-12);
  const RationalTransfer ref(example::reference_controller_num(), example::reference_controller_den());
  CHECK(max_abs_diff(k, expand(ref, 5, 8)) <= 1e-12);
  CHECK(is_cone_causal(expand_realization(c.K, 10, 10)));
  const double probe = stability_probe(c.K);
  CHECK(probe < 1.0);
  MESSAGE("controller realization spectral radius bound: " << probe);
}

TEST_CASE("stability probe") {
  LRealization z;
  z.A = ZMatrix(1, 1);
  z.B = MatrixXd::Ones(1, 1);
  z.C = ZMatrix(1, 1);
  z.D = MatrixXd::Zero(1, 1);
  CHECK(stability_probe(z) == 0.0);
  CHECK(stability_probe(realize_rational(example::plant())) == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("expand_realization of a static gain and non-SISO input") {
  const BiSeries e = expand_realization(LRealization::scalar_gain(3.0), 2, 2);
  CHECK(e(0, 0) == 3.0);
  CHECK(h2_norm_sq(e) == 9.0);
  CHECK(code_of([] { expand_realization(LRealization::gain(MatrixXd::Identity(2, 2)), 2, 2); }) ==
        ErrorCode::DimensionMismatch);
}

// --- properties ------------------------------------------------------------

TEST_CASE("property: expand_realization agrees with an independent line march") {
  std::mt19937 rng(77);
  for (int k = 0; k < 200; ++k) {
    const LRealization g = oracle::random_realization(rng, 1 + k % 4);
    const BiSeries e = expand_realization(g, 7, 6);
    CHECK(max_abs_diff(e, line_response(g, 7, 6)) <= 1e-12);
    CHECK(is_cone_causal(e));
  }
}

TEST_CASE("property: block operations commute with expansion") {
  std::mt19937 rng(78);
  const int S = 6, T = 6;
  const SupportBox box = SupportBox::symmetric(S, 0, T);
  for (int k = 0; k < 200; ++k) {
    LRealization a = oracle::random_realization(rng, 1 + k % 4);
    const LRealization b = oracle::random_realization(rng, 1 + (k / 4) % 4);
    a.D(0, 0) = 0.5 + std::abs(a.D(0, 0));  // invertible feedthrough
    const BiSeries ea = expand_realization(a, S + T, T), eb = expand_realization(b, S + T, T);

    const LRealization s = ss_add(a, b), m = ss_mul(a, b), inv = ss_inverse(a);
    CHECK(degree_one(s));
    CHECK(degree_one(m));
    CHECK(degree_one(inv));
    CHECK(max_abs_diff(expand_realization(s, S, T), add(ea, eb).reboxed(box)) <= 1e-9);
    CHECK(max_abs_diff(expand_realization(m, S, T), mul(ea, eb, box)) <= 1e-9);
    const BiSeries back = mul(expand_realization(inv, S + T, T), ea, box);
    CHECK(max_abs_diff(back, BiSeries::delta().reboxed(box)) <= 1e-9);

    // K = -G3 (1 - Gyu G3)^{-1} with a strictly proper plant
    LRealization plant = b;
    plant.D(0, 0) = 0.0;
    const LRealization K = feedback_realize_K(a, plant);
    CHECK(degree_one(K));
    const BiSeries loop = sub(BiSeries::delta(), mul(expand_realization(plant, S + T, T), ea, SupportBox::symmetric(S + T, 0, T)));
    const BiSeries ek = expand_realization(K, S + T, T);
    // K (1 - Gyu G3) = -G3
    CHECK(max_abs_diff(mul(ek, loop, box), negate(ea).reboxed(box)) <= 1e-9);
  }
}

TEST_CASE("property: cone polynomial round trip") {
  std::mt19937 rng(79);
  for (int k = 0; k < 200; ++k) {
    const BiSeries P = oracle::random_cone(rng, 4, 4);
    const LRealization g = realize_cone_polynomial(P);
    CHECK(max_abs_diff(expand_realization(g, 4, 4), P.reboxed(SupportBox::symmetric(4, 0, 4))) <= 1e-15);
  }
}
