#include "conesynth/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "conesynth/errors.hpp"

namespace conesynth {

using Eigen::MatrixXd;

ZMatrix::ZMatrix(MatrixXd m1, MatrixXd m0, MatrixXd p1)
    : minus(std::move(m1)), zero(std::move(m0)), plus(std::move(p1)) {
  if (minus.rows() != zero.rows() || plus.rows() != zero.rows() || minus.cols() != zero.cols() ||
      plus.cols() != zero.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "ZMatrix", "coefficient matrices differ in shape");
  }
}

Eigen::MatrixXcd ZMatrix::eval(double theta) const {
  const std::complex<double> z = std::polar(1.0, theta);
  return minus.cast<std::complex<double>>() / z + zero.cast<std::complex<double>>() +
         plus.cast<std::complex<double>>() * z;
}

ZMatrix operator*(const MatrixXd& left, const ZMatrix& m) {
  return {left * m.minus, left * m.zero, left * m.plus};
}

ZMatrix operator*(const ZMatrix& m, const MatrixXd& right) {
  return {m.minus * right, m.zero * right, m.plus * right};
}

ZMatrix block2x2(const ZMatrix& a, const ZMatrix& b, const ZMatrix& c, const ZMatrix& d) {
  ZMatrix out(a.rows() + c.rows(), a.cols() + b.cols());
  for (int p = -1; p <= 1; ++p) {
    auto& o = out.coeff(p);
    o.topLeftCorner(a.rows(), a.cols()) = a.coeff(p);
    o.topRightCorner(b.rows(), b.cols()) = b.coeff(p);
    o.bottomLeftCorner(c.rows(), c.cols()) = c.coeff(p);
    o.bottomRightCorner(d.rows(), d.cols()) = d.coeff(p);
  }
  return out;
}

ZMatrix hcat(const ZMatrix& a, const ZMatrix& b) {
  ZMatrix out(a.rows(), a.cols() + b.cols());
  for (int p = -1; p <= 1; ++p) out.coeff(p) << a.coeff(p), b.coeff(p);
  return out;
}

LRealization LRealization::gain(const MatrixXd& D) {
  return {ZMatrix(0, 0), MatrixXd::Zero(0, D.cols()), ZMatrix(D.rows(), 0), D};
}

namespace {

MatrixXd vstack(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

// Inverse with a rank check; `code` selects the error raised when singular.
MatrixXd checked_inverse(const MatrixXd& m, ErrorCode code, const char* where, const char* what) {
  if (m.rows() != m.cols()) throw Error(code, where, std::string(what) + " is not square");
  Eigen::FullPivLU<MatrixXd> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw Error(code, where, std::string(what) + " is singular");
  return lu.inverse();
}

}  // namespace

LRealization ss_inverse(const LRealization& g) {
  const MatrixXd Dinv = checked_inverse(g.D, ErrorCode::SingularD, "ss_inverse", "D");
  return {g.A - (g.B * Dinv) * g.C, -g.B * Dinv, Dinv * g.C, Dinv};
}

LRealization ss_add(const LRealization& g1, const LRealization& g2) {
  if (g1.inputs() != g2.inputs() || g1.outputs() != g2.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "ss_add", "input/output dimensions differ");
  }
  const auto n1 = g1.states(), n2 = g2.states();
  return {block2x2(g1.A, ZMatrix(n1, n2), ZMatrix(n2, n1), g2.A), vstack(g1.B, g2.B), hcat(g1.C, g2.C),
          g1.D + g2.D};
}

LRealization ss_mul(const LRealization& g1, const LRealization& g2) {
  if (g1.inputs() != g2.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "ss_mul", "inputs of the left factor must match outputs of the right");
  }
  const auto n1 = g1.states(), n2 = g2.states();
  return {block2x2(g1.A, g1.B * g2.C, ZMatrix(n2, n1), g2.A), vstack(g1.B * g2.D, g2.B),
          hcat(g1.C, g1.D * g2.C), g1.D * g2.D};
}

namespace {

// A tapped chain: its state s (0-based) carries offset sign * min(s, drift).
struct Chain {
  int sign;
  int drift;
  int offset(int stage) const { return sign * std::min(stage, drift); }
};

}  // namespace

LRealization realize_cone_polynomial(const BiSeries& P) {
  const char* where = "realize_cone_polynomial";
  const BiSeries p = P.trimmed();
  const auto& b = p.box();
  for (int t = b.temporal_min; t <= b.temporal_max; ++t) {
    for (int i = b.spatial_min; i <= b.spatial_max; ++i) {
      if (p(i, t) != 0.0 && (t < 0 || std::abs(i) > t)) {
        std::ostringstream msg;
        msg << "term " << p(i, t) << " z^" << i << " lambda^" << t << " lies outside the cone t >= |i|";
        throw Error(ErrorCode::NotCone, where, msg.str());
      }
    }
  }
  const int K = std::max(0, b.temporal_max);
  if (K == 0) return LRealization::scalar_gain(p(0, 0));

  std::vector<Chain> chains{{0, 0}, {1, K - 1}, {-1, K - 1}};
  for (int a = 3; a < K - 1; a += 3) {
    chains.push_back({1, a});
    chains.push_back({-1, a});
  }

  struct Tap {
    std::size_t chain;
    int stage;  // 0-based: the tap produces lambda^{stage+1}
    int power;  // residual z power read by C, in {-1,0,1}
    double value;
  };
  std::vector<Tap> taps;
  std::vector<int> length(chains.size(), 0);
  for (int k = 1; k <= K; ++k) {
    for (int j = -k; j <= k; ++j) {
      const double v = p(j, k);
      if (v == 0.0) continue;
      std::size_t c = 0;
      while (c < chains.size() && std::abs(j - chains[c].offset(k - 1)) > 1) ++c;
      if (c == chains.size()) {
        throw Error(ErrorCode::NotCone, where, "internal: no chain covers the term");  // unreachable for cone input
      }
      taps.push_back({c, k - 1, j - chains[c].offset(k - 1), v});
      length[c] = std::max(length[c], k);
    }
  }

  std::vector<int> start(chains.size(), 0);
  int n = 0;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    start[c] = n;
    n += length[c];
  }
  LRealization g{ZMatrix(n, n), MatrixXd::Zero(n, 1), ZMatrix(1, n), MatrixXd::Constant(1, 1, p(0, 0))};
  for (std::size_t c = 0; c < chains.size(); ++c) {
    if (length[c] == 0) continue;
    g.B(start[c], 0) = 1.0;
    for (int s = 0; s + 1 < length[c]; ++s) {
      const int step = chains[c].offset(s + 1) - chains[c].offset(s);
      g.A.coeff(step)(start[c] + s + 1, start[c] + s) = 1.0;
    }
  }
  for (const Tap& tap : taps) g.C.coeff(tap.power)(0, start[tap.chain] + tap.stage) += tap.value;
  return g;
}

namespace {

int lambda_slice_reach(const BiSeries& s, int t) {
  int reach = 0;
  for (int i = s.box().spatial_min; i <= s.box().spatial_max; ++i)
    if (s(i, t) != 0.0) reach = std::max(reach, std::abs(i));
  return reach;
}

}  // namespace

LRealization realize_rational(const RationalTransfer& r) {
  const char* where = "realize_rational";
  try {
    if (r.has_unit_denominator()) return realize_cone_polynomial(r.num());

    const BiSeries& num = r.num();
    const BiSeries& den = r.den();
    const int n = den.box().temporal_max;
    bool companion = num.is_temporally_causal() && num.box().temporal_max <= n;
    for (int i = num.box().spatial_min; companion && i <= num.box().spatial_max; ++i)
      if (i != 0 && num(i, 0) != 0.0) companion = false;
    const double n0 = num(0, 0);
    for (int k = 1; companion && k <= n; ++k) {
      if (lambda_slice_reach(den, k) > 1) companion = false;
      for (int i = std::min(num.box().spatial_min, den.box().spatial_min);
           companion && i <= std::max(num.box().spatial_max, den.box().spatial_max); ++i) {
        if (std::abs(i) > 1 && num(i, k) - n0 * den(i, k) != 0.0) companion = false;
      }
    }
    if (!companion) {
      return ss_mul(realize_cone_polynomial(num), ss_inverse(realize_cone_polynomial(den)));
    }

    // x1' = -sum d_k x_k + u, x_{k+1}' = x_k, y = sum (n_k - n0 d_k) x_k + n0 u
    LRealization g{ZMatrix(n, n), MatrixXd::Zero(n, 1), ZMatrix(1, n), MatrixXd::Constant(1, 1, n0)};
    g.B(0, 0) = 1.0;
    for (int k = 1; k <= n; ++k) {
      for (int p = -1; p <= 1; ++p) {
        g.A.coeff(p)(0, k - 1) = -den(p, k);
        g.C.coeff(p)(0, k - 1) = num(p, k) - n0 * den(p, k);
      }
      if (k < n) g.A.zero(k, k - 1) = 1.0;
    }
    return g;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotCone || e.code() == ErrorCode::SingularD) {
      throw Error(ErrorCode::NotRealizableAsLCausal, where, e.what());
    }
    throw;
  }
}

LRealization realize_product(std::span<const RationalTransfer> factors) {
  if (factors.empty()) return LRealization::scalar_gain(1.0);
  LRealization g = realize_rational(factors.front());
  for (std::size_t k = 1; k < factors.size(); ++k) g = ss_mul(g, realize_rational(factors[k]));
  return g;
}

LRealization feedback_realize_K(const LRealization& g3, const LRealization& gyu) {
  const char* where = "feedback_realize_K";
  if (g3.inputs() != gyu.outputs() || g3.outputs() != gyu.inputs()) {
    throw Error(ErrorCode::DimensionMismatch, where, "G3 and Gyu do not form a loop");
  }
  const auto p = g3.outputs();
  const auto q = gyu.outputs();
  const MatrixXd& D = gyu.D;
  const MatrixXd& D3 = g3.D;
  // M = (I - D D3)^{-1} on the measurement side, N = (I - D3 D)^{-1} on the control side.
  const MatrixXd N = checked_inverse(MatrixXd::Identity(p, p) - D3 * D, ErrorCode::AlgebraicLoop, where, "I - D3 D");
  const MatrixXd M = checked_inverse(MatrixXd::Identity(q, q) - D * D3, ErrorCode::AlgebraicLoop, where, "I - D D3");

  LRealization k;
  k.A = block2x2(g3.A + (g3.B * M * D) * g3.C, (g3.B * M) * gyu.C, (gyu.B * N) * g3.C,
                 gyu.A + (gyu.B * D3 * M) * gyu.C);
  k.B = vstack(-g3.B * M, -gyu.B * D3 * M);
  k.C = hcat(N * g3.C, (D3 * M) * gyu.C);
  k.D = -D3 * M;
  return k;
}

BiSeries expand_realization(const LRealization& g, int S, int T) {
  if (g.inputs() != 1 || g.outputs() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "expand_realization", "only SISO realizations expand to a scalar series");
  }
  BiSeries out(SupportBox::symmetric(S, 0, T));
  out.at(0, 0) = g.D(0, 0);
  const auto n = g.states();
  if (n == 0 || T == 0) return out;

  // v_k(z) = A(z)^{k-1} B, stored as columns for powers -w..w. Powers beyond
  // S + (T - k) + 1 cannot reach the output window and are dropped.
  int w = 0;
  MatrixXd v = g.B;
  for (int k = 1; k <= T; ++k) {
    for (int c = -w; c <= w; ++c) {
      for (int p = -1; p <= 1; ++p) {
        const int i = c + p;
        if (std::abs(i) > S) continue;
        out.at(i, k) += g.C.coeff(p).row(0).dot(v.col(c + w));
      }
    }
    if (k == T) break;
    const int limit = S + (T - k) + 1;
    const int nw = std::min(w + 1, limit);
    MatrixXd next = MatrixXd::Zero(n, 2 * nw + 1);
    for (int p = -1; p <= 1; ++p) {
      const MatrixXd& Ap = g.A.coeff(p);
      if (Ap.isZero(0.0)) continue;
      // column c of v lands on column c + p of next
      const int lo = std::max(-w, -nw - p);
      const int hi = std::min(w, nw - p);
      if (lo > hi) continue;
      next.middleCols(lo + p + nw, hi - lo + 1).noalias() += Ap * v.middleCols(lo + w, hi - lo + 1);
    }
    v = std::move(next);
    w = nw;
  }
  return out;
}

double stability_probe(const LRealization& g, int grid_n) {
  if (g.states() == 0) return 0.0;
  double worst = 0.0;
  for (int k = 0; k < grid_n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / grid_n;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g.A.eval(theta), false);
    worst = std::max(worst, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return worst;
}

ControllerRealization realize_controller(const SynthesisResult& result, const Problem& prob) {
  ControllerRealization c;
  c.G1 = realize_cone_polynomial(result.G1);
  c.T2out = realize_product(result.fact.outer_factors);
  c.G3 = ss_mul(c.G1, ss_inverse(c.T2out));
  c.Gyu = realize_rational(prob.Gyu);
  c.K = feedback_realize_K(c.G3, c.Gyu);
  return c;
}

}  // namespace conesynth
