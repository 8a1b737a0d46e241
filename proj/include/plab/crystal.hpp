// SPDX-License-Identifier: MIT

#ifndef PLAB_CRYSTAL_HPP
#define PLAB_CRYSTAL_HPP

#include "plab/bloch.hpp"
#include "plab/coulomb.hpp"

namespace plab {

/// Converged ground state of the host crystal: nuclear density, electronic
/// density, mean-field potential, full Bloch spectrum, Fermi level inside a
/// certified positive gap.
struct CrystalGroundState {
  PeriodicField mu0;
  PeriodicField rho0;
  PeriodicField v0;
  BlochEigensystem bloch;
  int z = 0;
  double fermi_level = 0.0;
  double gap = 0.0;
  double scf_residual = 0.0;
  std::vector<double> energy_history;  ///< variational energy per iteration (diagnostic)

  /// Re-verify the state invariants: local neutrality, non-negative density,
  /// Poisson self-consistency, band gap straddling the Fermi level.
  void check(double tol = 1e-8) const;
};

/// Band gap above the z-th band and the midpoint Fermi level.  For z = 0 the
/// Fermi level sits one Hartree below the lowest band and the gap is +inf.
std::pair<double, double> check_gap(const BlochEigensystem& bloch, int z);

/// Self-consistent field loop for the periodic mean-field crystal problem:
/// rho -> density of the z lowest bands of -Lap/2 + v[rho], with
/// v[rho] = poisson_periodic(rho - mu0) and damped linear mixing.
///
/// Throws NoGap if the converged bands do not leave a positive gap above
/// band z, NoConvergence if the Coulomb-norm residual stays above tol.
CrystalGroundState scf_crystal(const PeriodicField& mu0, std::shared_ptr<const BZMesh> mesh,
                               int z, double mix = 0.6, double tol = 1e-10,
                               int max_iter = 400);

/// Variational total energy of an occupied-band configuration:
/// band kinetic energy + Coulomb energy (1/2) D(rho - mu, rho - mu).
double crystal_energy(const BlochEigensystem& bloch, const PeriodicField& rho,
                      const PeriodicField& mu0, int z);

}  // namespace plab

#endif  // PLAB_CRYSTAL_HPP
