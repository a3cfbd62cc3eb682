#pragma once

// Finite ring-lattice simulation of spatially invariant systems.
//
// The lattice is periodic with n sites so a single impulse at site 0 sees
// the exact spatial invariance of the infinite system, provided the response
// cannot wrap around within the horizon (checked, WraparoundRisk otherwise).

#include <iosfwd>
#include <variant>
#include <vector>

#include "conesynth/bivariate.hpp"
#include "conesynth/statespace.hpp"

namespace conesynth {

class LatticeSignal {
 public:
  LatticeSignal(int sites, int horizon);

  static LatticeSignal impulse(int sites, int horizon, int site = 0);

  int sites() const { return sites_; }
  int horizon() const { return horizon_; }

  double operator()(int site, int t) const { return values_[index(site, t)]; }
  double& at(int site, int t) { return values_[index(site, t)]; }

  // t-major: the row for step t holds sites 0..n-1.
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double energy() const;

 private:
  std::size_t index(int site, int t) const { return static_cast<std::size_t>(t) * sites_ + site; }

  int sites_;
  int horizon_;
  std::vector<double> values_;
};

// Kernel (impulse response) or l-causal realization marched per site.
using LatticeSystem = std::variant<BiSeries, LRealization>;

// Exact response on the ring. Throws WraparoundRisk when the system can
// reach more than half way round the ring within the horizon.
LatticeSignal simulate(const LatticeSystem& sys, const LatticeSignal& input, Exec exec = Exec::parallel);

// Energy of the response to a unit impulse at (site 0, t 0) over t <= H.
double impulse_energy(const LatticeSystem& sys, int H, int sites = 512, Exec exec = Exec::parallel);

// |y(i,t)| <= tol whenever t < ring distance from impulse_site to i.
bool verify_cone_support(const LatticeSignal& response, double tol, int impulse_site = 0);

// Disturbance-attenuation loop: y = W w + G u, u = K y. Returns y.
LatticeSignal simulate_disturbance_loop(const LRealization& W, const LRealization& G, const LRealization& K,
                                        const LatticeSignal& w, Exec exec = Exec::parallel);

// Header row of site indices, then one row per time step. LF endings.
void write_csv(std::ostream& os, const LatticeSignal& s);

}  // namespace conesynth
