// SPDX-License-Identifier: MIT

#ifndef PLAB_CELLMODE_HPP
#define PLAB_CELLMODE_HPP

#include <utility>
#include <vector>

#include "plab/field.hpp"

namespace plab {

/// Microscopic oscillation mode of a light particle of mass m in the crystal
/// potential: the positive periodic ground state u of -Lap/(2m) + V on one
/// unit cell, its eigenvalue, and the first-order oscillation shape f with
/// -1/2 Lap f = -(V - mean V), int f = 0.  The scaled eigenvalue e_per_m / m
/// converges to the first-order energy at order m; `e_per_limit` stores the
/// volume-integrated first-order value int_cell V f (the limit of the cell
/// functional value of u divided by m, see e_per_convergence).
struct CellMode {
  double m = 0.0;
  PeriodicField u;        ///< positive ground state, int |u|^2 = cell volume
  double e_per_m = 0.0;   ///< ground eigenvalue of -Lap/(2m) + V
  PeriodicField f;        ///< first-order oscillation shape, zero mean
  double e_per_limit = 0.0;  ///< int_cell V f  (< 0 unless V is constant)
  double cell_gap = 0.0;  ///< distance to the second cell eigenvalue
  PeriodicField v0;       ///< the potential the mode was solved from

  /// Re-verify: u strictly positive, int |u|^2 = cell volume to 1e-10,
  /// int f = 0 to 1e-12, and the eigen-residual of u below tol * ||u||.
  void check(double tol = 1e-10) const;
};

/// First-order oscillation shape: fhat(G) = -2 vhat(G)/|G|^2 for G != 0,
/// fhat(0) = 0.  The mean of V never enters (it is carried by the eigenvalue,
/// not by the shape), so any constant offset of v0 gives the same f.
PeriodicField solve_f_per(const PeriodicField& v0);

/// Ground state of the dense collocation operator -Lap/(2m) + V on the full
/// FFT grid of v0 (kinetic term diagonal in Fourier space, potential diagonal
/// in real space).  The collocation eigenvalue equation then holds pointwise
/// at every grid point, which is what makes the energy-decoupling identity
/// below exact at the discrete level.  Throws DegenerateGroundState when the
/// first spectral gap falls below 1e-10 (the positive-ground-state
/// certificate would be meaningless).
CellMode solve_u_per(const PeriodicField& v0, double m);

/// One row of the eigenvalue-convergence table: the cell functional value of
/// u divided by m against its first-order limit int_cell V f.
struct EPerRow {
  double m = 0.0;
  double e_over_m = 0.0;  ///< (cell volume * e_per_m) / m, the functional value
  double limit = 0.0;     ///< int_cell V f
  double diff = 0.0;      ///< e_over_m - limit, O(m)
  double cell_gap = 0.0;
};

struct EPerTable {
  std::vector<EPerRow> rows;
  LineFit order;  ///< log-log fit of |diff| vs m; slope is the observed order
};

/// Scaled-eigenvalue convergence study over a descending list of masses.
EPerTable e_per_convergence(const PeriodicField& v0, const std::vector<double>& m_list);

/// Both sides of the scale-decoupling identity
///   E_m[psi] = m^{-1} e_per_m * int|psi|^2  +  E~_m[psi / u(./m)]
/// evaluated through independent code paths: the left side uses the sampled
/// potential V(./m) directly, the right side uses the eigenvalue together
/// with the weighted kinetic form, whose u-derivative part is evaluated from
/// the spectral Laplacian of u on the cell grid (the integration-by-parts
/// representation of int u^2 |grad .|^2).  The residual therefore measures
/// the pointwise collocation eigen-residual, not a discretization error.
struct DecoupleReport {
  int n_cell = 0;          ///< scaled cells per box side
  IVec3 ratio = IVec3::Zero();  ///< cell grid points per macro grid step
  double lhs_kinetic = 0.0;
  double lhs_potential = 0.0;  ///< m^{-1} int V(./m) |psi|^2
  double lhs_total = 0.0;
  double rhs_scale_term = 0.0;  ///< m^{-1} e_per_m * int |psi|^2
  double rhs_tilde_kinetic = 0.0;  ///< (1/2) int u(./m)^2 |grad psi_pol|^2
  double rhs_total = 0.0;
  double rel_residual = 0.0;
};

/// Factor a normalized state as psi = u(./m) * psi_pol and evaluate the
/// decoupling identity.  The box must be an integer number of scaled cells
/// per side and every micro-image x/m of a macro grid point must land on the
/// cell grid; otherwise IncommensurateGrids.  The nonlinear defect term is
/// not included: its argument |psi|^2 = u(./m)^2 |psi_pol|^2 is the same
/// field on both sides (see tilde_density), so it cancels identically.
std::pair<PeriodicField, DecoupleReport> energy_decouple(const PeriodicField& psi,
                                                         const CellMode& cell);

/// Linear part of the macroscopic-frame energy:
///   (1/2) int |grad psi|^2 + m^{-1} int V(x/m) |psi|^2.
double energy_macro_form(const PeriodicField& psi, const CellMode& cell);

/// The same energy written in the microscopic frame for psi~ = m^{3/2} psi(m .):
///   m^{-1} [ (1/(2m)) int |grad psi~|^2 + int V |psi~|^2 ].
double energy_micro_form(const PeriodicField& psi_tilde, const CellMode& cell);

/// Change of frame psi~ = m^{3/2} psi(m .): a pure relabel of the Fourier
/// series (coefficients scaled by m^{3/2}, box scaled by 1/m), so the two
/// energy forms above agree to roundoff, not merely to discretization error.
PeriodicField to_micro_frame(const PeriodicField& psi, double m);

/// Modified one-body density u(./m)^2 |psi_pol|^2 of a factored state; equals
/// |psi|^2 pointwise and integrates to the particle number.
PeriodicField tilde_density(const PeriodicField& psi_pol, const CellMode& cell);

}  // namespace plab

#endif  // PLAB_CELLMODE_HPP
