#include <random>
#include <vector>

#include "doctest.h"

#include "conesynth/kernels.hpp"

using namespace conesynth::kernels;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("convolve2d: serial and OpenMP agree") {
  std::mt19937 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = random_vec(rng, 5 * 4), b = random_vec(rng, 7 * 6);
    std::vector<double> s(15 * 11, 0.0), p(15 * 11, 0.0);
    const GridView av{a.data(), -2, 0, 5, 4}, bv{b.data(), -3, -1, 7, 6};
    serial::convolve2d(av, bv, {s.data(), -7, -2, 15, 11});
    omp::convolve2d(av, bv, {p.data(), -7, -2, 15, 11});
    CHECK(max_diff(s, p) <= 1e-13);
    // hand check one entry: out(-5, -1) = a(-2,0) b(-3,-1)
    CHECK(s[(-1 + 2) * 15 + (-5 + 7)] == doctest::Approx(a[0] * b[0]));
  }
}

TEST_CASE("ring_convolve: serial and OpenMP agree, wrap is periodic") {
  std::mt19937 rng(2);
  const int n = 16, steps = 5;
  const auto k = random_vec(rng, 3 * 2), sig = random_vec(rng, n * steps);
  std::vector<double> s(n * steps, 0.0), p(n * steps, 0.0);
  const GridView kv{k.data(), -1, 0, 3, 2}, sv{sig.data(), 0, 0, n, steps};
  serial::ring_convolve(kv, sv, {s.data(), 0, 0, n, steps});
  omp::ring_convolve(kv, sv, {p.data(), 0, 0, n, steps});
  CHECK(max_diff(s, p) <= 1e-14);
  // site 0 at t=0 receives kernel(-1,0) * signal(1,0) + kernel(0,0) signal(0,0) + kernel(1,0) signal(n-1,0)
  CHECK(s[0] == doctest::Approx(k[0] * sig[1] + k[1] * sig[0] + k[2] * sig[n - 1]));
}

TEST_CASE("ring_zmatvec: serial and OpenMP agree") {
  std::mt19937 rng(3);
  const int n = 32, rows = 3, cols = 2;
  const auto m1 = random_vec(rng, rows * cols), m0 = random_vec(rng, rows * cols), p1 = random_vec(rng, rows * cols);
  const auto x = random_vec(rng, n * cols);
  std::vector<double> s(n * rows, 0.0), p(n * rows, 0.0);
  const ZMatView a{m1.data(), m0.data(), p1.data(), rows, cols};
  serial::ring_zmatvec(a, x.data(), s.data(), n);
  omp::ring_zmatvec(a, x.data(), p.data(), n);
  CHECK(max_diff(s, p) <= 1e-14);
  double want = 0.0;
  for (int c = 0; c < cols; ++c) want += m1[c] * x[1 * cols + c] + m0[c] * x[c] + p1[c] * x[(n - 1) * cols + c];
  CHECK(s[0] == doctest::Approx(want));
}
