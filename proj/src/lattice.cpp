// SPDX-License-Identifier: MIT

#include "plab/lattice.hpp"

namespace plab {

Lattice::Lattice(const Mat3& a) : a_(a) {
  volume_ = a_.determinant();
  PLAB_CHECK(volume_ > 1e-14, errc::bad_config,
             "lattice vectors must be right-handed with positive volume");
  b_ = 2.0 * pi * a_.inverse().transpose();
}

Lattice Lattice::cubic(double a) {
  PLAB_CHECK(a > 0, errc::bad_config, "cubic lattice constant must be positive");
  return Lattice(Mat3::Identity() * a);
}

Lattice Lattice::supercell(const IVec3& n) const {
  PLAB_CHECK(n.minCoeff() >= 1, errc::bad_config, "supercell repetitions must be >= 1");
  Mat3 s = a_;
  for (int i = 0; i < 3; ++i) s.col(i) *= static_cast<double>(n[i]);
  return Lattice(s);
}

bool Lattice::approx_equal(const Lattice& other, double tol) const {
  return (a_ - other.a_).cwiseAbs().maxCoeff() <= tol * a_.cwiseAbs().maxCoeff();
}

}  // namespace plab
