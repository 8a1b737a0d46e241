// SPDX-License-Identifier: MIT

#ifndef PLAB_RESPONSE_HPP
#define PLAB_RESPONSE_HPP

#include <memory>
#include <vector>

#include "plab/coulomb.hpp"
#include "plab/crystal.hpp"
#include "plab/dilate.hpp"
#include "plab/supercell.hpp"

namespace plab {

/// Static screening environment of a gapped crystal discretized on a chosen
/// supercell.  Holds the folded band structure with the z occupied bands and
/// n_empty unoccupied bands per fiber (capped at the fiber dimension), the
/// tiled crystal potential, and the solver parameters shared by all linear
/// response operations.
///
/// The central object is the response operator acting on charge sources nu
/// over the supercell grid:
///
///   L nu = -rho_{Q1},   Q1 = sum_{l empty, n occ} |a_l> M_{ln}/(lam_n-lam_l) <a_n| + h.c.,
///   M_{ln} = <a_l| (nu * 1/|x|) |a_n>,
///
/// i.e. minus the density induced at first order when the Coulomb potential
/// of nu perturbs the Fermi sea.  L is symmetric and nonnegative for the
/// Coulomb pairing D(.,.), which makes 1 + L invertible by conjugate
/// gradients in that metric.
///
/// Truncation control: bands above the included window are absent from the
/// sums.  Every response evaluation estimates the truncation tail as the
/// Coulomb-norm share contributed by the topmost included band of each
/// fiber that omits states, and refuses (InsufficientBands) when that share
/// exceeds 1e-6 of the result.  Requesting n_empty at least the largest
/// fiber dimension yields complete fibers and a vanishing tail estimate.
class ResponseContext {
 public:
  ResponseContext(const CrystalGroundState& crystal, const IVec3& repeat, int n_empty,
                  double cg_tol = 1e-8, int cg_max_iter = 500);

  const Supercell& supercell() const { return sc_; }
  const SupercellSpectrum& spectrum() const { return spec_; }
  /// Crystal mean-field potential tiled onto the supercell grid.
  const PeriodicField& crystal_potential() const { return v0_sc_; }
  double fermi_level() const { return fermi_; }
  int electrons_per_cell() const { return z_; }
  int n_empty() const { return n_empty_; }
  double cg_tol() const { return cg_tol_; }
  int cg_max_iter() const { return cg_max_iter_; }

  /// Spectrum columns below / above the Fermi level.
  const std::vector<int>& occupied() const { return occ_; }
  const std::vector<int>& empty() const { return emp_; }
  /// Topmost included band of each fiber that omits states; the Coulomb-norm
  /// share of these columns in the induced density is the truncation gate.
  const std::vector<int>& gate_columns() const { return gate_; }

 private:
  Supercell sc_;
  SupercellSpectrum spec_;
  PeriodicField v0_sc_;
  double fermi_ = 0.0;
  int z_ = 0;
  int n_empty_ = 0;
  double cg_tol_ = 0.0;
  int cg_max_iter_ = 0;
  std::vector<int> occ_, emp_, gate_;
};

/// Macroscopic dielectric tensor extracted from the screened response, with
/// the raw small-k fit data kept for diagnostics.
struct DielectricMatrix {
  Mat3 eps = Mat3::Identity();
  std::vector<Vec3> directions;      ///< unit probe directions u
  std::vector<double> eta0;          ///< per-direction extrapolated 1/(u.eps u)
  double fit_residual = 0.0;         ///< relative residual of the tensor fit
};

/// Response operator: returns L nu = -rho_{Q1(nu)} on the supercell grid.
/// Linear, symmetric and nonnegative in D(.,.); annihilates constants.
/// Throws InsufficientBands when the truncation gate fails.
PeriodicField apply_L(const ResponseContext& ctx, const PeriodicField& nu);

/// Screening operator K nu = nu - (1 + L)^{-1} nu, evaluated by conjugate
/// gradients in the Coulomb metric to relative residual cg_tol.  Satisfies
/// 0 <= D(nu, K nu) <= D(nu, nu).  Throws CGNoConvergence past cg_max_iter.
PeriodicField apply_K(const ResponseContext& ctx, const PeriodicField& nu);

/// Screened self-interaction functional
///   F_aux[nu] = -1/2 D(nu, K nu)  in  [-1/2 D(nu, nu), 0],
/// exactly quadratic in the source.
double f_aux(const ResponseContext& ctx, const PeriodicField& nu);

/// Effective macroscopic interaction at scale m in (0, 1]: dilate the
/// macroscopic source onto the supercell box, screen it, take the Coulomb
/// potential, and pull the result back:
///
///   B_m nu = m^{-1} U_m^* ( 1/|x| * (1+L)^{-1} U_m nu ),
///
/// returned on the source's own grid (sub-macroscopic Fourier content of the
/// screened potential is outside that grid and is discarded; every pairing
/// against band-limited macroscopic sources is unaffected).  Requires the
/// macroscopic box rescaled by 1/m to coincide with the supercell box
/// (IncommensurateGrids) and a source strictly band-limited below its grid's
/// Nyquist planes (ResolutionLoss).
PeriodicField apply_B_m(const ResponseContext& ctx, const PeriodicField& nu_macro, double m);

/// Macroscopic dielectric tensor from the screened response: for single-mode
/// probes nu_k, eta(k) = D(nu_k, (1+L)^{-1} nu_k) / D(nu_k, nu_k) is
/// extrapolated linearly in |k|^2 to eta_0(u) = 1/(u.eps u) along thirteen
/// directions (complete point-group orbits: axes, face diagonals, body
/// diagonals), and the symmetric tensor is recovered by least squares.
/// Throws FitFailure when the quadratic-form fit leaves a relative residual
/// above residual_gate; the default is the strict contract value.  Callers
/// extracting on boxes too small for the linear small-k regime may pass a
/// looser gate, and must then treat fit_residual as the honest uncertainty
/// of the returned tensor.
DielectricMatrix extract_eps_m(const ResponseContext& ctx, double residual_gate = 1e-2);

/// Relative residual of the first-order trace identity
///   Tr(|H0 - eF| Q1^2) = -1/2 Tr_0(Q1 V),  V = nu * 1/|x|:
/// the left side is evaluated by band sums over the spectral pairs, the
/// right side as 1/2 D(L nu, nu) through the induced-density route.
/// Returns 0 for a vanishing source by convention.
double kinetic_identity_residual(const ResponseContext& ctx, const PeriodicField& nu);

/// Anisotropic polaron interaction energy
///   F^P[rho] = 2 pi V sum_{K != 0} |rho_K|^2 ( 1/(K.eps K) - 1/|K|^2 ) <= 0
/// for any symmetric positive-definite eps with eps >= 1.  Throws
/// SingularEps otherwise.
double pekar_interaction(const PeriodicField& rho, const Mat3& eps);

/// Screened Poisson potential W = 4 pi rho_K / (K.eps K) (zero mode dropped),
/// the potential whose pairing against rho doubles F^P plus the bare term:
///   F^P[rho] = 1/2 integral rho (W - rho * 1/|x|).
/// Throws SingularEps for a non-SPD tensor.
PeriodicField w_poisson(const PeriodicField& rho, const Mat3& eps);

}  // namespace plab

#endif  // PLAB_RESPONSE_HPP
