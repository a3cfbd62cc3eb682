#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using conesynth::BiSeries;
using conesynth::SupportBox;

Coeffs coeffs_of(const BiSeries& a) {
  Coeffs c;
  const auto& b = a.box();
  for (int t = b.temporal_min; t <= b.temporal_max; ++t)
    for (int i = b.spatial_min; i <= b.spatial_max; ++i)
      if (a(i, t) != 0.0) c[{i, t}] = a(i, t);
  return c;
}

BiSeries series_of(const Coeffs& c, const SupportBox& box) {
  BiSeries s(box);
  for (const auto& [k, v] : c)
    if (box.contains(k.first, k.second)) s.at(k.first, k.second) = v;
  return s;
}

double torus_grid_energy(const BiSeries& a, int n) {
  // Evaluate along theta row by row, then along w, at the grid points.
  const auto& b = a.box();
  const double step = 2.0 * std::numbers::pi / n;
  std::vector<std::complex<double>> rows(static_cast<std::size_t>(b.height()) * n);
  for (int t = b.temporal_min; t <= b.temporal_max; ++t) {
    for (int p = 0; p < n; ++p) {
      std::complex<double> v = 0.0;
      for (int i = b.spatial_min; i <= b.spatial_max; ++i)
        if (const double c = a(i, t); c != 0.0) v += c * std::polar(1.0, step * ((static_cast<long>(i) * p) % n));
      rows[static_cast<std::size_t>(t - b.temporal_min) * n + p] = v;
    }
  }
  double total = 0.0;
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p) {
      std::complex<double> v = 0.0;
      for (int t = b.temporal_min; t <= b.temporal_max; ++t)
        v += rows[static_cast<std::size_t>(t - b.temporal_min) * n + p] * std::polar(1.0, step * ((static_cast<long>(t) * q) % n));
      total += std::norm(v);
    }
  }
  return total / (static_cast<double>(n) * n);
}

Coeffs convolve(const Coeffs& a, const Coeffs& b) {
  Coeffs out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) out[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
  return out;
}

Coeffs divide(const Coeffs& num, const Coeffs& den, int T) {
  const double d0 = den.count({0, 0}) ? den.at({0, 0}) : 0.0;
  Coeffs q;
  Coeffs rem = num;
  int lo = 0;
  for (const auto& [k, v] : num) lo = std::min(lo, k.second);
  for (int t = lo; t <= T; ++t) {
    // quotient slice t = remainder slice t / d0
    std::vector<std::pair<int, double>> slice;
    for (const auto& [k, v] : rem)
      if (k.second == t && v != 0.0) slice.emplace_back(k.first, v / d0);
    for (const auto& [i, v] : slice) {
      q[{i, t}] = v;
      for (const auto& [kd, vd] : den) rem[{i + kd.first, t + kd.second}] -= v * vd;
    }
  }
  return q;
}

Coeffs realization_response(const conesynth::LRealization& g, int T) {
  using Vec = Eigen::VectorXd;
  const auto n = g.states();
  Coeffs out;
  out[{0, 0}] = g.D(0, 0);
  std::map<int, Vec> x;  // state at each site
  if (n > 0) x[0] = g.B.col(0);
  for (int t = 1; t <= T; ++t) {
    std::map<int, double> y;
    std::map<int, Vec> next;
    for (const auto& [s, v] : x) {
      // (z^k M v)(s + k): the z^{+1} term moves data one site up
      for (int k = -1; k <= 1; ++k) {
        y[s + k] += (g.C.coeff(k) * v)(0);
        auto [it, fresh] = next.try_emplace(s + k, Vec::Zero(n));
        it->second += g.A.coeff(k) * v;
      }
    }
    for (const auto& [s, v] : y)
      if (v != 0.0) out[{s, t}] = v;
    x = std::move(next);
  }
  return out;
}

BiSeries random_cone(std::mt19937& rng, int S, int T, double density) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  BiSeries a(SupportBox::symmetric(S, 0, T));
  for (int t = 0; t <= T; ++t)
    for (int i = -std::min(S, t); i <= std::min(S, t); ++i)
      if (keep(rng)) a.at(i, t) = val(rng);
  return a;
}

BiSeries random_box(std::mt19937& rng, const SupportBox& box) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  BiSeries a(box);
  for (double& v : a.data()) v = val(rng);
  return a;
}

BiSeries random_cone_denominator(std::mt19937& rng, int T, double scale) {
  BiSeries d = random_cone(rng, T, T);
  double l1 = 0.0;
  for (int t = 1; t <= T; ++t)
    for (int i = -t; i <= t; ++i) l1 += std::abs(d(i, t));
  for (double& v : d.data()) v *= scale / std::max(l1, 1e-12);
  d.at(0, 0) = 1.0;
  return d;
}

conesynth::RationalTransfer random_lattice(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), g(0.5, 2.0), mag(0.2, 0.85);
  double a = u(rng), b = u(rng), c = u(rng);
  const double s = mag(rng) / (std::abs(a) + std::abs(b) + std::abs(c));
  const BiSeries den = conesynth::sub(BiSeries::delta(),
                                      conesynth::shift_temporal(BiSeries::laurent(-1, {a * s, b * s, c * s}), 1));
  return {BiSeries::monomial(g(rng), 0, 1), den};
}

conesynth::LRealization random_realization(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  auto rnd = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < c; ++b) m(a, b) = val(rng);
    return m;
  };
  conesynth::LRealization g;
  g.A = {rnd(n, n), rnd(n, n), rnd(n, n)};
  double sum = g.A.minus.norm() + g.A.zero.norm() + g.A.plus.norm();
  if (sum > 0) {
    const double s = 0.8 / sum;
    g.A = {g.A.minus * s, g.A.zero * s, g.A.plus * s};
  }
  g.B = rnd(n, 1);
  g.C = {rnd(1, n), rnd(1, n), rnd(1, n)};
  g.D = rnd(1, 1);
  return g;
}

}  // namespace oracle
