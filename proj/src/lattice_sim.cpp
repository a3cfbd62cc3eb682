#include "conesynth/lattice_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "conesynth/errors.hpp"
#include "conesynth/kernels.hpp"

namespace conesynth {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_reach(int reach, int sites, const char* where) {
  if (2 * reach >= sites) {
    throw Error(ErrorCode::WraparoundRisk, where,
                "response may reach " + std::to_string(reach) + " sites on a ring of " + std::to_string(sites) +
                    "; need sites > 2 * reach");
  }
}

// Row-major copies of a z-matrix for the ring kernel.
struct RingZ {
  RowMajor m1, m0, p1;
  explicit RingZ(const ZMatrix& z) : m1(z.minus), m0(z.zero), p1(z.plus) {}
  kernels::ZMatView view() const {
    return {m1.data(), m0.data(), p1.data(), static_cast<int>(m0.rows()), static_cast<int>(m0.cols())};
  }
};

// One SISO realization marched on the ring.
class RingMarch {
 public:
  RingMarch(const LRealization& g, int sites)
      : A_(g.A), C_(g.C), B_(g.B.col(0)), d_(g.D(0, 0)), n_(static_cast<int>(g.states())), sites_(sites),
        x_(static_cast<std::size_t>(sites) * n_, 0.0), scratch_(x_.size()) {}

  double feedthrough() const { return d_; }

  // C-applied state at every site (output minus feedthrough).
  void free_output(std::vector<double>& out, Exec exec) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (n_ > 0) kernels::ring_zmatvec(C_.view(), x_.data(), out.data(), sites_, exec);
  }

  void advance(const std::vector<double>& u, Exec exec) {
    if (n_ == 0) return;
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    kernels::ring_zmatvec(A_.view(), x_.data(), scratch_.data(), sites_, exec);
    for (int s = 0; s < sites_; ++s)
      for (int k = 0; k < n_; ++k) scratch_[static_cast<std::size_t>(s) * n_ + k] += B_(k) * u[s];
    x_.swap(scratch_);
  }

 private:
  RingZ A_;
  RingZ C_;
  Eigen::VectorXd B_;
  double d_;
  int n_;
  int sites_;
  std::vector<double> x_;
  std::vector<double> scratch_;
};

void require_siso(const LRealization& g, const char* where) {
  if (g.inputs() != 1 || g.outputs() != 1) {
    throw Error(ErrorCode::DimensionMismatch, where, "lattice simulation needs SISO realizations");
  }
}

LatticeSignal simulate_kernel(const BiSeries& kernel, const LatticeSignal& input, Exec exec) {
  const int H = input.horizon();
  const BiSeries k = truncate_rect(kernel.trimmed(), spatial_reach(kernel.box()), H).trimmed();
  if (!k.is_temporally_causal()) {
    throw Error(ErrorCode::InvalidInput, "simulate", "kernel has negative temporal powers");
  }
  check_reach(spatial_reach(k.box()), input.sites(), "simulate");
  LatticeSignal out(input.sites(), H);
  const auto& b = k.box();
  kernels::ring_convolve({k.data().data(), b.spatial_min, b.temporal_min, b.width(), b.height()},
                         {input.values().data(), 0, 0, input.sites(), H + 1},
                         {out.values().data(), 0, 0, input.sites(), H + 1}, exec);
  return out;
}

LatticeSignal simulate_realization(const LRealization& g, const LatticeSignal& input, Exec exec) {
  require_siso(g, "simulate");
  const int n = input.sites();
  const int H = input.horizon();
  if (g.states() > 0) check_reach(H, n, "simulate");
  RingMarch march(g, n);
  LatticeSignal out(n, H);
  std::vector<double> u(n), y(n);
  for (int t = 0; t <= H; ++t) {
    for (int s = 0; s < n; ++s) u[s] = input(s, t);
    march.free_output(y, exec);
    for (int s = 0; s < n; ++s) out.at(s, t) = y[s] + march.feedthrough() * u[s];
    march.advance(u, exec);
  }
  return out;
}

}  // namespace

LatticeSignal::LatticeSignal(int sites, int horizon) : sites_(sites), horizon_(horizon) {
  if (sites <= 0 || horizon < 0) {
    throw Error(ErrorCode::InvalidInput, "LatticeSignal", "need sites > 0 and horizon >= 0");
  }
  values_.assign(static_cast<std::size_t>(sites) * (horizon + 1), 0.0);
}

LatticeSignal LatticeSignal::impulse(int sites, int horizon, int site) {
  LatticeSignal s(sites, horizon);
  s.at(((site % sites) + sites) % sites, 0) = 1.0;
  return s;
}

double LatticeSignal::energy() const {
  double e = 0.0;
  for (double v : values_) e += v * v;
  return e;
}

LatticeSignal simulate(const LatticeSystem& sys, const LatticeSignal& input, Exec exec) {
  return std::visit(
      [&](const auto& s) -> LatticeSignal {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BiSeries>) {
          return simulate_kernel(s, input, exec);
        } else {
          return simulate_realization(s, input, exec);
        }
      },
      sys);
}

double impulse_energy(const LatticeSystem& sys, int H, int sites, Exec exec) {
  return simulate(sys, LatticeSignal::impulse(sites, H, 0), exec).energy();
}

bool verify_cone_support(const LatticeSignal& response, double tol, int impulse_site) {
  const int n = response.sites();
  for (int t = 0; t <= response.horizon(); ++t) {
    for (int s = 0; s < n; ++s) {
      const int d = ((s - impulse_site) % n + n) % n;
      const int dist = std::min(d, n - d);
      if (t < dist && std::abs(response(s, t)) > tol) return false;
    }
  }
  return true;
}

LatticeSignal simulate_disturbance_loop(const LRealization& W, const LRealization& G, const LRealization& K,
                                        const LatticeSignal& w, Exec exec) {
  const char* where = "simulate_disturbance_loop";
  require_siso(W, where);
  require_siso(G, where);
  require_siso(K, where);
  const int n = w.sites();
  const int H = w.horizon();
  check_reach(H, n, where);
  const double loop = 1.0 - G.D(0, 0) * K.D(0, 0);
  if (std::abs(loop) < 1e-12) throw Error(ErrorCode::AlgebraicLoop, where, "1 - D_G D_K is singular");

  RingMarch mw(W, n), mg(G, n), mk(K, n);
  LatticeSignal out(n, H);
  std::vector<double> wt(n), yw(n), yg(n), uk(n), y(n), u(n);
  for (int t = 0; t <= H; ++t) {
    for (int s = 0; s < n; ++s) wt[s] = w(s, t);
    mw.free_output(yw, exec);
    mg.free_output(yg, exec);
    mk.free_output(uk, exec);
    for (int s = 0; s < n; ++s) {
      // y = W w + G u and u = K y, solved for the current step
      y[s] = (yw[s] + mw.feedthrough() * wt[s] + yg[s] + mg.feedthrough() * uk[s]) / loop;
      u[s] = uk[s] + mk.feedthrough() * y[s];
      out.at(s, t) = y[s];
    }
    mw.advance(wt, exec);
    mg.advance(u, exec);
    mk.advance(y, exec);
  }
  return out;
}

void write_csv(std::ostream& os, const LatticeSignal& s) {
  for (int i = 0; i < s.sites(); ++i) os << (i ? "," : "") << i;
  os << '\n';
  char buf[32];
  for (int t = 0; t <= s.horizon(); ++t) {
    for (int i = 0; i < s.sites(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", s(i, t));
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
}

}  // namespace conesynth
