#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version (namespace
// omp) and a plain serial reference (namespace serial) kept for testing and
// benchmarking; results agree up to summation order.

#include "conesynth/exec.hpp"

namespace conesynth::kernels {

// Row-major grid over (i, t): element (i,t) at data[(t - t0) * ni + (i - i0)].
struct GridView {
  const double* data;
  int i0, t0, ni, nt;
};
struct MutGridView {
  double* data;
  int i0, t0, ni, nt;
};

// out(i,t) += sum_{p,q} a(p,q) b(i-p, t-q) for every (i,t) in out.
namespace serial {
void convolve2d(GridView a, GridView b, MutGridView out);
}
namespace omp {
void convolve2d(GridView a, GridView b, MutGridView out);
}
void convolve2d(GridView a, GridView b, MutGridView out, Exec exec);

// Periodic lattice convolution. `signal` and `out` are sites x steps grids
// with i0 = t0 = 0 (site index = i). kernel has t0 >= 0.
// out(i,t) = sum_{p,q} kernel(p,q) signal((i-p) mod n, t-q).
namespace serial {
void ring_convolve(GridView kernel, GridView signal, MutGridView out);
}
namespace omp {
void ring_convolve(GridView kernel, GridView signal, MutGridView out);
}
void ring_convolve(GridView kernel, GridView signal, MutGridView out, Exec exec);

// Spatially applied z-matrix on a ring of `sites` sites. x holds `cols`
// values per site (site-major), y holds `rows` values per site.
//   y(s) += Am1 x(s+1) + A0 x(s) + Ap1 x(s-1)
// (z^{+1} delays along the ring: (z x)(s) = x(s-1).) Matrices are row-major
// rows x cols.
struct ZMatView {
  const double* m1;
  const double* m0;
  const double* p1;
  int rows, cols;
};
namespace serial {
void ring_zmatvec(ZMatView a, const double* x, double* y, int sites);
}
namespace omp {
void ring_zmatvec(ZMatView a, const double* x, double* y, int sites);
}
void ring_zmatvec(ZMatView a, const double* x, double* y, int sites, Exec exec);

}  // namespace conesynth::kernels
