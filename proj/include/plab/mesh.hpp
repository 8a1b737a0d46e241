// SPDX-License-Identifier: MIT

#ifndef PLAB_MESH_HPP
#define PLAB_MESH_HPP

#include "plab/lattice.hpp"

namespace plab {

/// Gamma-centered Monkhorst-Pack sampling of the Brillouin zone: fractional
/// points i/n mapped to the symmetric window (-1/2, 1/2], uniform weights
/// summing to one, closed under q -> -q modulo a reciprocal vector.
class BZMesh {
public:
  BZMesh(const Lattice& lattice, int n);

  int n() const { return n_; }
  std::size_t size() const { return q_cart_.size(); }
  const std::vector<Vec3>& q_cart() const { return q_cart_; }
  const std::vector<IVec3>& q_int() const { return q_int_; }  // numerators of q = m/n
  const std::vector<double>& weights() const { return w_; }

  /// Index of the point equal to -q[i] modulo the reciprocal lattice.
  std::size_t negation_partner(std::size_t i) const { return neg_[i]; }

  /// True when -q[i] itself lies in the window, i.e. the partner needed no
  /// reciprocal-lattice wrap.  Identities that hold per plane-wave sphere
  /// (band time reversal in a fixed truncated basis) are exact only then.
  bool negation_exact(std::size_t i) const { return q_int_[neg_[i]] == -q_int_[i]; }

private:
  int n_;
  std::vector<Vec3> q_cart_;
  std::vector<IVec3> q_int_;
  std::vector<double> w_;
  std::vector<std::size_t> neg_;
};

}  // namespace plab

#endif  // PLAB_MESH_HPP
