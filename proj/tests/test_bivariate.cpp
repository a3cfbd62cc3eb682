#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "conesynth/bivariate.hpp"
#include "conesynth/errors.hpp"
#include "conesynth/example_problem.hpp"
#include "conesynth/factorization.hpp"
#include "oracles.hpp"

using namespace conesynth;

namespace {

const BiSeries kR = BiSeries::laurent(-1, {0.125, 0.25, 0.125});
const BiSeries kRho = BiSeries::laurent(-1, {1.0 / 6, 1.0 / 3, 1.0 / 6});

bool same(const BiSeries& a, const BiSeries& b, double tol = 0.0) { return max_abs_diff(a, b) <= tol; }

}  // namespace

TEST_CASE("support box helpers") {
  const SupportBox a{-1, 2, 0, 3};
  CHECK(a.width() == 4);
  CHECK(a.height() == 4);
  CHECK(a.size() == 16);
  CHECK(a.contains(2, 3));
  CHECK_FALSE(a.contains(3, 0));
  CHECK(SupportBox::sum(a, {-1, 1, -1, 1}) == SupportBox{-2, 3, -1, 4});
  CHECK(SupportBox::hull(a, {-3, 0, 5, 5}) == SupportBox{-3, 2, 0, 5});
}

TEST_CASE("element access") {
  BiSeries a(SupportBox::symmetric(1, 0, 1));
  a.set(1, 1, 2.0);
  CHECK(a(1, 1) == 2.0);
  CHECK(a(5, 5) == 0.0);
  CHECK_THROWS_AS(a.at(2, 0), Error);
  try {
    a.at(2, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfBox);
  }
}

TEST_CASE("add") {
  const BiSeries a = BiSeries::laurent(-2, {1, 2, 3, 4, 5}, 1);
  CHECK(same(add(a, BiSeries()), a));
  const BiSeries s = add(BiSeries::monomial(1, 1, 1), BiSeries::monomial(1, -1, 1));
  CHECK(s(1, 1) == 1.0);
  CHECK(s(-1, 1) == 1.0);
  CHECK(s(0, 1) == 0.0);
  CHECK(same(add(kR, kR), BiSeries::laurent(-1, {0.25, 0.5, 0.25})));
  CHECK(same(sub(a, a), BiSeries()));
  CHECK(same(negate(a), scale(a, -1.0)));
}

TEST_CASE("mul") {
  CHECK(same(mul(kR, kR), BiSeries::laurent(-2, {1.0 / 64, 1.0 / 16, 3.0 / 32, 1.0 / 16, 1.0 / 64})));
  const BiSeries a = BiSeries::laurent(-1, {1, -2, 3}, 2);
  CHECK(same(mul(a, BiSeries::delta()), a));
  CHECK(same(mul(BiSeries::monomial(1, 0, 2), BiSeries::monomial(1, 0, -1)), BiSeries::monomial(1, 0, 1)));
  // restricted output box is exact where it overlaps the full product
  const BiSeries full = mul(kR, shift_temporal(kRho, 1));
  const BiSeries part = mul(kR, shift_temporal(kRho, 1), SupportBox{0, 3, 1, 1});
  for (int i = 0; i <= 3; ++i) CHECK(part(i, 1) == full(i, 1));
}

TEST_CASE("invert_causal") {
  SUBCASE("geometric series of 1 - r lambda") {
    const BiSeries d = sub(BiSeries::delta(), shift_temporal(kR, 1));
    const BiSeries c = invert_causal(d, 8, 10);
    BiSeries power = BiSeries::delta();
    for (int k = 0; k <= 8; ++k) {
      for (int i = -k; i <= k; ++i) CHECK(c(i, k) == doctest::Approx(power(i, 0)).epsilon(1e-14));
      power = mul(power, kR);
    }
    const BiSeries back = mul(d, c);
    for (int t = 0; t <= 8; ++t)
      for (int i = -(10 - t); i <= 10 - t; ++i) CHECK(std::abs(back(i, t) - (i == 0 && t == 0)) <= 1e-15);
  }
  SUBCASE("delta") { CHECK(same(invert_causal(BiSeries::delta(), 5, 5).trimmed(), BiSeries::delta())); }
  SUBCASE("reciprocal of the reference outer factor is a polynomial") {
    const BiSeries d = invert_causal(
        expand(RationalTransfer(BiSeries::delta(), mul(sub(BiSeries::delta(), shift_temporal(kRho, 1)),
                                                       sub(BiSeries::delta(), shift_temporal(kR, 1)))),
               12, 12),
        6, 6);
    BiSeries want = sub(BiSeries::delta(), shift_temporal(add(kRho, kR), 1));
    want = add(want, shift_temporal(mul(kRho, kR), 2));
    CHECK(same(d.trimmed(1e-15), want, 1e-14));
    CHECK(std::abs(d(1, 1) + 7.0 / 24) < 1e-15);
    CHECK(std::abs(d(2, 2) - 1.0 / 48) < 1e-15);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(invert_causal(BiSeries::laurent(-1, {1, 2, 1}), 3, 3), Error);
    try {
      invert_causal(BiSeries::laurent(-1, {1, 2, 1}), 3, 3);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonScalarLeadingTerm);
    }
    try {
      invert_causal(BiSeries::monomial(1.0, 0, 1), 3, 3);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularLeadingTerm);
    }
  }
}

TEST_CASE("h2_norm_sq") {
  CHECK(h2_norm_sq(BiSeries::delta()) == 1.0);
  CHECK(h2_norm_sq(kR) == doctest::Approx(3.0 / 32).epsilon(1e-15));
  const BiSeries R = apply_inner_adjoint(example::weight(), 2, 30, 30);
  CHECK(h2_norm_sq(anticausal_part(R)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("causal and anticausal parts") {
  const BiSeries c = BiSeries::laurent(0, {1.0}, 2);
  CHECK(anticausal_part(c).is_zero());
  CHECK(same(causal_part(c), c));
  BiSeries t0(SupportBox{0, 0, -1, 1});
  t0.set(0, -1, 1.0);
  t0.set(0, 0, 0.25);
  t0.set(0, 1, 3.0 / 32);
  CHECK(same(anticausal_part(t0), BiSeries::monomial(1.0, 0, -1)));
  CHECK(causal_part(t0)(0, 0) == 0.25);
  CHECK(causal_part(t0)(0, 1) == 3.0 / 32);
  CHECK(causal_part(t0)(0, -1) == 0.0);
  const LambdaSeries t1(-1, {0.125, 1.0 / 16, 15.0 / 512});
  CHECK(t1.anticausal_part().coeffs() == std::vector<double>{0.125});
  CHECK(t1.causal_part().temporal_min() == 0);
}

TEST_CASE("shift_temporal") {
  CHECK(same(shift_temporal(BiSeries::delta(), 2), BiSeries::monomial(1, 0, 2)));
  const BiSeries T1 = expand(example::weight(), 10, 12);
  const BiSeries R = shift_temporal(T1, -2);
  CHECK(R(0, -1) == 1.0);
  for (int i = -1; i <= 1; ++i) CHECK(R(i, 0) == kR(i, 0));
  std::mt19937 rng(7);
  const BiSeries a = oracle::random_box(rng, {-2, 3, -1, 4});
  CHECK(same(shift_temporal(shift_temporal(a, 3), -3), a));
}

TEST_CASE("is_cone_causal") {
  CHECK(is_cone_causal(BiSeries::delta()));
  CHECK_FALSE(is_cone_causal(BiSeries::monomial(1, 1, 0)));
  const BiSeries k = expand(RationalTransfer(example::reference_controller_num(), example::reference_controller_den()), 5, 8);
  CHECK(is_cone_causal(k));
  CHECK(is_cone_causal(BiSeries::monomial(1e-13, 1, 0), 1e-12));
}

TEST_CASE("spatial_slice") {
  const BiSeries R = apply_inner_adjoint(example::weight(), 2, 12, 12);
  const LambdaSeries s0 = spatial_slice(R, 0);
  CHECK(s0(-1) == 1.0);
  CHECK(s0(0) == 0.25);
  CHECK(s0(1) == 3.0 / 32);
  CHECK(s0(2) == 5.0 / 128);
  const LambdaSeries s1 = spatial_slice(R, 1);
  CHECK(s1(0) == 0.125);
  CHECK(s1(1) == 1.0 / 16);
  CHECK(s1(2) == 15.0 / 512);
  CHECK(s1(3) == 7.0 / 512);
  CHECK(spatial_slice(BiSeries::delta(), 0)(0) == 1.0);
  CHECK_THROWS_AS(spatial_slice(BiSeries::delta(), 3), Error);
}

TEST_CASE("torus_eval") {
  CHECK(std::abs(torus_eval(BiSeries::delta(), 0.7, -2.1) - 1.0) < 1e-15);
  CHECK(std::abs(torus_eval(kR, 0.0, 1.3) - 0.5) < 1e-15);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (int k = 0; k < 100; ++k) {
    CHECK(std::abs(std::abs(torus_eval(BiSeries::monomial(1, 0, 2), ang(rng), ang(rng))) - 1.0) < 1e-15);
  }
}

TEST_CASE("truncation shapes") {
  const BiSeries R = apply_inner_adjoint(example::weight(), 2, 6, 6);
  const BiSeries rect = truncate_rect(R, 2, 3);
  CHECK(rect.box() == SupportBox{-2, 2, -2, 3});
  CHECK(rect(2, 3) == R(2, 3));
  const BiSeries cone = truncate_cone_order(R, 1);
  CHECK(cone(0, 1) == R(0, 1));
  CHECK(cone(0, 2) == 0.0);
  CHECK(cone(2, 3) == R(2, 3));
  CHECK(cone(2, 4) == 0.0);
}

TEST_CASE("trimmed and reboxed") {
  BiSeries a(SupportBox{-3, 3, 0, 4});
  a.set(1, 2, 1.0);
  CHECK(a.trimmed().box() == SupportBox{1, 1, 2, 2});
  CHECK(BiSeries(SupportBox{-1, 1, 0, 1}).trimmed().box() == SupportBox{});
  const BiSeries b = a.reboxed({-1, 0, 0, 4});
  CHECK(b.is_zero());
}

// --- properties ------------------------------------------------------------

TEST_CASE("property: Parseval against the torus grid") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> ext(0, 6);
  for (int k = 0; k < 20; ++k) {
    const int lo = -ext(rng), t0 = -ext(rng);
    const BiSeries a = oracle::random_box(rng, {lo, lo + ext(rng), t0, t0 + ext(rng)});
    const double direct = h2_norm_sq(a);
    CHECK(std::abs(direct - oracle::torus_grid_energy(a, 64)) <= 1e-9 * direct);
  }
}

TEST_CASE("property: causal/anticausal split is orthogonal and exact") {
  std::mt19937 rng(5);
  for (int k = 0; k < 200; ++k) {
    const BiSeries a = oracle::random_box(rng, {-3, 2, -4, 5});
    const BiSeries c = causal_part(a), ac = anticausal_part(a);
    CHECK(max_abs_diff(add(c, ac), a) == 0.0);
    CHECK(std::abs(h2_norm_sq(a) - h2_norm_sq(c) - h2_norm_sq(ac)) <= 1e-12);
  }
}

TEST_CASE("property: mul matches the brute-force convolution and is commutative/associative") {
  std::mt19937 rng(99);
  for (int k = 0; k < 200; ++k) {
    const BiSeries a = oracle::random_box(rng, {-2, 1, -1, 2});
    const BiSeries b = oracle::random_box(rng, {0, 3, 0, 1});
    const BiSeries c = oracle::random_box(rng, {-1, 1, -2, 0});
    const BiSeries ab = mul(a, b);
    CHECK(max_abs_diff(ab, oracle::series_of(oracle::convolve(oracle::coeffs_of(a), oracle::coeffs_of(b)), ab.box())) <= 1e-14);
    CHECK(max_abs_diff(ab, mul(b, a)) <= 1e-14);
    CHECK(max_abs_diff(mul(ab, c), mul(a, mul(b, c))) <= 1e-13);
  }
}

TEST_CASE("property: cone closure under add, mul and invert") {
  std::mt19937 rng(314);
  for (int k = 0; k < 200; ++k) {
    const BiSeries a = oracle::random_cone(rng, 4, 4);
    const BiSeries b = oracle::random_cone(rng, 3, 5);
    CHECK(is_cone_causal(add(a, b), 1e-12));
    CHECK(is_cone_causal(mul(a, b), 1e-12));
    const BiSeries d = oracle::random_cone_denominator(rng, 3);
    const int T = 6, S = 8;
    const BiSeries inv = invert_causal(d, T, S);
    CHECK(is_cone_causal(inv, 1e-12));
    // mul-back is delta wherever the cropping cannot reach
    const BiSeries back = mul(d, inv);
    const int w = spatial_reach(d.box());
    for (int t = 0; t <= T; ++t)
      for (int i = -(S - w * t); i <= S - w * t; ++i) CHECK(std::abs(back(i, t) - (i == 0 && t == 0)) <= 1e-12);
  }
}

TEST_CASE("property: invert_causal matches naive long division") {
  std::mt19937 rng(8);
  for (int k = 0; k < 50; ++k) {
    const BiSeries d = oracle::random_cone_denominator(rng, 2);
    const BiSeries inv = invert_causal(d, 7, 7);
    const BiSeries ref = oracle::series_of(oracle::divide({{{0, 0}, 1.0}}, oracle::coeffs_of(d), 7), inv.box());
    CHECK(max_abs_diff(inv, ref) <= 1e-13);
  }
}
