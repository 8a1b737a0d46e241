// SPDX-License-Identifier: MIT

#ifndef PLAB_LATTICE_HPP
#define PLAB_LATTICE_HPP

#include "plab/common.hpp"

namespace plab {

/// A three-dimensional Bravais lattice: direct vectors a_i (columns of A),
/// reciprocal vectors b_i (columns of B) with b_i . a_j = 2 pi delta_ij,
/// and the unit-cell volume.
class Lattice {
public:
  explicit Lattice(const Mat3& a);
  static Lattice cubic(double a);

  const Mat3& vectors() const { return a_; }
  const Mat3& reciprocal() const { return b_; }
  double volume() const { return volume_; }

  Vec3 direct(const Vec3& frac) const { return a_ * frac; }
  /// Reciprocal vector for an integer mode triple.
  Vec3 gvec(const IVec3& m) const { return b_ * m.cast<double>(); }

  /// Lattice scaled in real space by s (reciprocal scales by 1/s).
  Lattice scaled(double s) const { return Lattice(a_ * s); }
  /// Supercell with n_i repetitions along each direct vector.
  Lattice supercell(const IVec3& n) const;

  bool approx_equal(const Lattice& other, double tol = 1e-12) const;

private:
  Mat3 a_;
  Mat3 b_;
  double volume_;
};

}  // namespace plab

#endif  // PLAB_LATTICE_HPP
