#include "conesynth/kernels.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

namespace conesynth::kernels {

namespace {

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

namespace serial {

void convolve2d(GridView a, GridView b, MutGridView out) {
  for (int q = 0; q < a.nt; ++q) {
    for (int p = 0; p < a.ni; ++p) {
      const double av = a.data[q * a.ni + p];
      if (av == 0.0) continue;
      for (int tb = 0; tb < b.nt; ++tb) {
        for (int ib = 0; ib < b.ni; ++ib) {
          const int i = (a.i0 + p) + (b.i0 + ib) - out.i0;
          const int t = (a.t0 + q) + (b.t0 + tb) - out.t0;
          if (i < 0 || i >= out.ni || t < 0 || t >= out.nt) continue;
          out.data[t * out.ni + i] += av * b.data[tb * b.ni + ib];
        }
      }
    }
  }
}

void ring_convolve(GridView kernel, GridView signal, MutGridView out) {
  const int n = signal.ni;
  for (int t = 0; t < out.nt; ++t) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int q = 0; q < kernel.nt; ++q) {
        const int tau = t - (kernel.t0 + q);
        if (tau < 0 || tau >= signal.nt) continue;
        for (int p = 0; p < kernel.ni; ++p) {
          const int j = wrap(i - (kernel.i0 + p), n);
          acc += kernel.data[q * kernel.ni + p] * signal.data[tau * n + j];
        }
      }
      out.data[t * out.ni + i] = acc;
    }
  }
}

void ring_zmatvec(ZMatView a, const double* x, double* y, int sites) {
  for (int s = 0; s < sites; ++s) {
    const double* xl = x + static_cast<std::size_t>(wrap(s + 1, sites)) * a.cols;
    const double* xc = x + static_cast<std::size_t>(s) * a.cols;
    const double* xr = x + static_cast<std::size_t>(wrap(s - 1, sites)) * a.cols;
    double* ys = y + static_cast<std::size_t>(s) * a.rows;
    for (int r = 0; r < a.rows; ++r) {
      double acc = 0.0;
      for (int c = 0; c < a.cols; ++c) {
        const std::size_t k = static_cast<std::size_t>(r) * a.cols + c;
        acc += a.m1[k] * xl[c] + a.m0[k] * xc[c] + a.p1[k] * xr[c];
      }
      ys[r] += acc;
    }
  }
}

}  // namespace serial

namespace omp {

// Gather form: each output row is owned by one thread.
void convolve2d(GridView a, GridView b, MutGridView out) {
#pragma omp parallel for schedule(dynamic, 4)
  for (int t = 0; t < out.nt; ++t) {
    double* orow = out.data + static_cast<std::size_t>(t) * out.ni;
    const int tt = out.t0 + t;
    for (int q = 0; q < a.nt; ++q) {
      const int tb = tt - (a.t0 + q) - b.t0;
      if (tb < 0 || tb >= b.nt) continue;
      const double* arow = a.data + static_cast<std::size_t>(q) * a.ni;
      const double* brow = b.data + static_cast<std::size_t>(tb) * b.ni;
      for (int p = 0; p < a.ni; ++p) {
        const double av = arow[p];
        if (av == 0.0) continue;
        // out index i <-> b index i + out.i0 - (a.i0 + p) - b.i0
        const int shift = out.i0 - (a.i0 + p) - b.i0;
        const int lo = std::max(0, -shift);
        const int hi = std::min(out.ni, b.ni - shift);
        for (int i = lo; i < hi; ++i) orow[i] += av * brow[i + shift];
      }
    }
  }
}

// Scatter over the nonzero input entries; rows of `out` are independent.
void ring_convolve(GridView kernel, GridView signal, MutGridView out) {
  const int n = signal.ni;
  struct Entry {
    int site, step;
    double value;
  };
  std::vector<Entry> nonzero;
  for (int tau = 0; tau < signal.nt; ++tau)
    for (int j = 0; j < n; ++j)
      if (const double v = signal.data[tau * n + j]; v != 0.0) nonzero.push_back({j, tau, v});

#pragma omp parallel for schedule(dynamic, 4)
  for (int t = 0; t < out.nt; ++t) {
    double* orow = out.data + static_cast<std::size_t>(t) * out.ni;
    std::fill(orow, orow + out.ni, 0.0);
    for (const Entry& e : nonzero) {
      const int q = t - e.step - kernel.t0;
      if (q < 0 || q >= kernel.nt) continue;
      const double* krow = kernel.data + static_cast<std::size_t>(q) * kernel.ni;
      for (int p = 0; p < kernel.ni; ++p) {
        if (krow[p] == 0.0) continue;
        orow[wrap(e.site + kernel.i0 + p, n)] += e.value * krow[p];
      }
    }
  }
}

void ring_zmatvec(ZMatView a, const double* x, double* y, int sites) {
#pragma omp parallel for schedule(static)
  for (int s = 0; s < sites; ++s) {
    const double* xl = x + static_cast<std::size_t>(wrap(s + 1, sites)) * a.cols;
    const double* xc = x + static_cast<std::size_t>(s) * a.cols;
    const double* xr = x + static_cast<std::size_t>(wrap(s - 1, sites)) * a.cols;
    double* ys = y + static_cast<std::size_t>(s) * a.rows;
    for (int r = 0; r < a.rows; ++r) {
      const double* m1 = a.m1 + static_cast<std::size_t>(r) * a.cols;
      const double* m0 = a.m0 + static_cast<std::size_t>(r) * a.cols;
      const double* p1 = a.p1 + static_cast<std::size_t>(r) * a.cols;
      double acc = 0.0;
      for (int c = 0; c < a.cols; ++c) acc += m1[c] * xl[c] + m0[c] * xc[c] + p1[c] * xr[c];
      ys[r] += acc;
    }
  }
}

}  // namespace omp

void convolve2d(GridView a, GridView b, MutGridView out, Exec exec) {
  exec == Exec::parallel ? omp::convolve2d(a, b, out) : serial::convolve2d(a, b, out);
}

void ring_convolve(GridView kernel, GridView signal, MutGridView out, Exec exec) {
  exec == Exec::parallel ? omp::ring_convolve(kernel, signal, out)
                         : serial::ring_convolve(kernel, signal, out);
}

void ring_zmatvec(ZMatView a, const double* x, double* y, int sites, Exec exec) {
  exec == Exec::parallel ? omp::ring_zmatvec(a, x, y, sites)
                         : serial::ring_zmatvec(a, x, y, sites);
}

}  // namespace conesynth::kernels
