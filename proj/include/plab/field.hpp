// SPDX-License-Identifier: MIT

#ifndef PLAB_FIELD_HPP
#define PLAB_FIELD_HPP

#include <memory>

#include "plab/basis.hpp"

namespace plab {

/// A periodic scalar field stored as Fourier-series coefficients on the full
/// FFT grid of its basis: f(x) = sum_m c_m exp(i G_m . x).  Densities and
/// potentials produced by the library are band-limited by construction (they
/// arise from orbital products on alias-free grids), so pointwise statements
/// (non-negativity of densities, reality) hold exactly on the grid.
class PeriodicField {
public:
  enum class Kind { density, potential, weight };

  PeriodicField(std::shared_ptr<const PlaneWaveBasis> basis, Kind kind);

  /// Build from real-space samples on the basis grid (row-major FFTW layout).
  static PeriodicField from_real(std::shared_ptr<const PlaneWaveBasis> basis, Kind kind,
                                 const std::vector<double>& values);

  const PlaneWaveBasis& basis() const { return *basis_; }
  const std::shared_ptr<const PlaneWaveBasis>& basis_ptr() const { return basis_; }
  Kind kind() const { return kind_; }
  void set_kind(Kind k) { kind_ = k; }

  std::vector<cdouble>& coeff() { return coeff_; }
  const std::vector<cdouble>& coeff() const { return coeff_; }

  cdouble coeff0() const { return coeff_[0]; }
  void set_coeff0(cdouble c) { coeff_[0] = c; }

  /// Complex real-space samples (inverse transform).
  std::vector<cdouble> to_grid() const;
  /// Real-space samples; checks the imaginary residue is at roundoff level.
  std::vector<double> to_real() const;

  /// Volume integral over the box: V * c_0.
  double integral() const;
  /// L2 pairing  integral of conj(f) g  over the box (spectrally exact).
  cdouble inner(const PeriodicField& g) const;

  double min_real() const;
  double max_abs_real() const;

  PeriodicField& operator+=(const PeriodicField& g);
  PeriodicField& operator-=(const PeriodicField& g);
  PeriodicField& operator*=(double s);

  /// Largest |c_m| over modes outside |m_i| <= cap_i; used for resolution
  /// diagnostics when transferring fields between grids.
  double tail_above(const IVec3& cap) const;

  void check_same_grid(const PeriodicField& g) const;

private:
  std::shared_ptr<const PlaneWaveBasis> basis_;
  Kind kind_;
  std::vector<cdouble> coeff_;
};

/// Pointwise product computed on the shared grid.  Exact (alias-free) when
/// the factors' combined bandwidth fits the grid rule, which holds for all
/// library-internal uses.
PeriodicField multiply(const PeriodicField& a, const PeriodicField& b,
                       PeriodicField::Kind kind);

/// Periodized sum of Gaussians sampled pointwise on the grid (positive by
/// construction).  centers are fractional; the zero mode is rescaled so the
/// integral equals total charge exactly on the grid.
PeriodicField gaussian_density(std::shared_ptr<const PlaneWaveBasis> basis,
                               const std::vector<Vec3>& centers_frac,
                               const std::vector<double>& widths,
                               const std::vector<double>& charges);

/// Deterministic random real trig polynomial with modes |m_i| <= max_mode.
/// zero_mean drops the constant mode (useful for neutral defect shapes).
PeriodicField random_band_limited(std::shared_ptr<const PlaneWaveBasis> basis,
                                  PeriodicField::Kind kind, int max_mode,
                                  std::uint64_t seed, bool zero_mean);

}  // namespace plab

#endif  // PLAB_FIELD_HPP
