// SPDX-License-Identifier: MIT

#include "oracles/lattice_sum.hpp"

#include <cmath>

namespace plab::oracle {

double ewald_gaussian_pair(const Lattice& lattice, const Vec3& d, double s, double eta,
                           int real_shells, int recip_shells) {
  PLAB_CHECK(s > 0 && eta >= s, errc::bad_config,
             "Ewald splitting width must satisfy eta >= s > 0");
  const double volume = lattice.volume();

  // Broad-width reciprocal part: converges in a handful of shells.
  double recip = 0.0;
  for (int m0 = -recip_shells; m0 <= recip_shells; ++m0)
    for (int m1 = -recip_shells; m1 <= recip_shells; ++m1)
      for (int m2 = -recip_shells; m2 <= recip_shells; ++m2) {
        if (m0 == 0 && m1 == 0 && m2 == 0) continue;
        const Vec3 g = lattice.gvec({m0, m1, m2});
        const double g2 = g.squaredNorm();
        recip += std::exp(-0.5 * eta * eta * g2) * std::cos(g.dot(d)) / g2;
      }
  recip *= four_pi / volume;

  // Short-ranged real-space remainder: erf(r / sqrt(2) s) - erf(r / sqrt(2) eta)
  // over direct lattice images, with the analytic r -> 0 limit.
  double real_part = 0.0;
  const double inv_sqrt2_pi = std::sqrt(2.0 / pi);
  for (int n0 = -real_shells; n0 <= real_shells; ++n0)
    for (int n1 = -real_shells; n1 <= real_shells; ++n1)
      for (int n2 = -real_shells; n2 <= real_shells; ++n2) {
        const Vec3 x = d + lattice.direct(Vec3(n0, n1, n2));
        const double r = x.norm();
        if (r < 1e-14) {
          real_part += inv_sqrt2_pi * (1.0 / s - 1.0 / eta);
        } else {
          real_part += (std::erf(r / (std::sqrt(2.0) * s)) - std::erf(r / (std::sqrt(2.0) * eta))) / r;
        }
      }

  // Zero-mode correction from Poisson summation of the erf difference.
  const double zero_mode = 2.0 * pi * (eta * eta - s * s) / volume;

  return recip + real_part - zero_mode;
}

}  // namespace plab::oracle
