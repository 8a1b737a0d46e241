// SPDX-License-Identifier: MIT

#ifndef PLAB_BASIS_HPP
#define PLAB_BASIS_HPP

#include <memory>

#include "plab/fft.hpp"
#include "plab/lattice.hpp"

namespace plab {

/// Plane-wave basis on a periodic box: the sphere of reciprocal vectors with
/// kinetic energy |G|^2/2 <= ecut (used for orbital coefficients), plus an
/// FFT grid sized so that pointwise products of two sphere-limited functions,
/// and potential-times-density pairings, are alias-free.
///
/// The sphere list is sorted lexicographically by integer coordinates, which
/// makes every derived quantity bit-reproducible run to run.
class PlaneWaveBasis {
public:
  PlaneWaveBasis(const Lattice& lattice, double ecut);

  /// Basis over an explicit integer mode set with a caller-chosen FFT grid
  /// (used for supercell union bases, where the grid must stay commensurate
  /// with the per-cell grid).  The set must be closed under negation and
  /// representable on the grid.
  PlaneWaveBasis(const Lattice& lattice, std::vector<IVec3> modes, const IVec3& grid);

  /// Same integer modes and grid as src, on a lattice with direct vectors
  /// multiplied by `scale` (the coefficient-relabel dilation target).
  static PlaneWaveBasis rescaled(const PlaneWaveBasis& src, double scale);
  /// As above with the target lattice given explicitly; it must agree with
  /// src.lattice() scaled by `scale` to relative 1e-12.
  static PlaneWaveBasis rescaled(const PlaneWaveBasis& src, double scale,
                                 const Lattice& target);

  const Lattice& lattice() const { return lattice_; }
  double ecut() const { return ecut_; }

  std::size_t size() const { return g_int_.size(); }
  const std::vector<IVec3>& g_int() const { return g_int_; }
  const std::vector<Vec3>& g_cart() const { return g_cart_; }

  const IVec3& grid() const { return grid_; }
  std::size_t grid_size() const {
    return static_cast<std::size_t>(grid_[0]) * grid_[1] * grid_[2];
  }

  /// Flat grid index of sphere member j.
  std::size_t grid_index(std::size_t j) const { return grid_index_[j]; }

  /// Flat grid index of an arbitrary integer mode (wrapped into the grid);
  /// throws resolution_loss if the mode lies outside representable range.
  std::size_t grid_index_of_mode(const IVec3& m) const;
  /// True if integer mode m is representable on the grid.
  bool mode_in_grid(const IVec3& m) const;

  /// Position of integer mode within the sphere list, or -1.
  long sphere_position(const IVec3& m) const;

  /// Cartesian reciprocal vector of a grid array index triple.
  Vec3 g_of_grid_index(int i0, int i1, int i2) const;

  /// Largest |integer mode| along each axis over the sphere.
  const IVec3& max_index() const { return max_index_; }

  bool same_grid(const PlaneWaveBasis& other) const;

private:
  void finalize_modes(bool compute_grid);

  Lattice lattice_;
  double ecut_;
  std::vector<IVec3> g_int_;
  std::vector<Vec3> g_cart_;
  std::vector<std::size_t> grid_index_;
  IVec3 grid_;
  IVec3 max_index_;
};

/// Smallest even, 5-smooth integer >= n (FFT-friendly grid length).
int fft_friendly_size(int n);

}  // namespace plab

#endif  // PLAB_BASIS_HPP
