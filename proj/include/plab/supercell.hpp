// SPDX-License-Identifier: MIT

#ifndef PLAB_SUPERCELL_HPP
#define PLAB_SUPERCELL_HPP

#include "plab/bloch.hpp"

namespace plab {

/// An n1 x n2 x n3 repetition of a crystal cell, discretized by the
/// plane-wave sphere at the cell's kinetic cutoff on the enlarged lattice.
///
/// Every supercell mode K folds uniquely as K = q + (n .* G): q is one of the
/// prod(n) Gamma-centered fractional wavevectors of the cell's Brillouin
/// zone, G a cell reciprocal mode.  A cell-periodic operator is therefore
/// block-diagonal over the residue classes ("fibers"), which is what makes
/// the folded diagonalization below exactly equivalent to the dense one.
/// Fiber mode sets are the sphere slices {G : |q+G|^2 <= 2 ecut}, so their
/// sizes vary with q; the class list is negation-closed by construction.
struct Supercell {
  std::shared_ptr<const PlaneWaveBasis> cell;   ///< cell sphere basis
  std::shared_ptr<const PlaneWaveBasis> basis;  ///< supercell sphere basis
  IVec3 repeat;

  std::vector<IVec3> q_int;               ///< numerators of q = m ./ n, window (-n/2, n/2]
  std::vector<Vec3> q_cart;
  std::vector<std::vector<int>> members;  ///< per fiber: positions in basis->g_int()

  int cells() const { return repeat.prod(); }
  std::size_t dim() const { return basis->size(); }
};

/// Build the supercell of a sphere basis.  The supercell FFT grid must come
/// out as repeat .* cell grid (it does for all sane cutoffs; violations are
/// reported as IncommensurateGrids rather than silently resampled).
Supercell make_supercell(std::shared_ptr<const PlaneWaveBasis> cell, const IVec3& repeat);

/// View a cell-periodic field on the supercell grid: a pure coefficient
/// relabel c_sc(n .* G) = c_cell(G), exact in both directions.
PeriodicField tile_to_supercell(const PeriodicField& f, const Supercell& sc);

/// Average over the repeat translates = orthogonal projection onto the
/// cell-periodic modes, returned on the cell grid.  Inverts tile_to_supercell
/// exactly and annihilates modes with nonzero folding wavevector.
PeriodicField cell_average(const PeriodicField& f, const Supercell& sc);

/// Dense one-body Hamiltonian -Lap/2 + v over the union basis; v is given on
/// the supercell grid (use tile_to_supercell for cell-periodic potentials).
Eigen::MatrixXcd supercell_hamiltonian(const Supercell& sc, const PeriodicField& v_sc);

/// Eigenstates of -Lap/2 + v0 on the supercell, stored fiber-major: for each
/// folding wavevector the lowest `bands_per_fiber` states (all of them when
/// negative), each lifted to an l2-normalized coefficient column over the
/// union basis.  Columns at different wavevectors have disjoint mode support
/// and are therefore orthogonal exactly.
struct SupercellSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  std::vector<int> q_of;     ///< fiber index per column
  std::vector<int> band_of;  ///< band index within the fiber

  int n_states() const { return static_cast<int>(values.size()); }

  /// Orthonormality of the columns and ascending band order per fiber.
  void check(double tol = 1e-10) const;
};

/// Diagonalize fiber by fiber (v0 on the cell grid).  Throws
/// InsufficientBands if a fiber carries fewer than bands_per_fiber states;
/// with cap_to_fiber, smaller fibers instead contribute all their states
/// (useful for screening sums that simply exhaust small fibers).
SupercellSpectrum fold_spectrum(const Supercell& sc, const PeriodicField& v0,
                                int bands_per_fiber = -1, bool cap_to_fiber = false);

/// Column indices with eigenvalue below the Fermi level.
std::vector<int> occupied_columns(const SupercellSpectrum& spec, double fermi_level);

/// Number density of l2-normalized coefficient columns:
/// rho(x) = sum_i |phi_i(x)|^2 / |supercell|, integrating to the column count.
PeriodicField density_from_columns(const Supercell& sc,
                                   const Eigen::Ref<const Eigen::MatrixXcd>& cols);

}  // namespace plab

#endif  // PLAB_SUPERCELL_HPP
