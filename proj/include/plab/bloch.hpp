// SPDX-License-Identifier: MIT

#ifndef PLAB_BLOCH_HPP
#define PLAB_BLOCH_HPP

#include "plab/field.hpp"
#include "plab/mesh.hpp"

namespace plab {

/// Dense Hermitian eigendecomposition (divide and conquer), ascending values,
/// orthonormal columns.
struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};
HermitianEigen hermitian_eigen(Eigen::MatrixXcd h);

/// Bloch fiber Hamiltonian at wavevector q over the plane-wave sphere of the
/// potential's basis: kinetic part (1/2)|G_j + q|^2 on the diagonal plus the
/// convolution matrix vhat(G_j - G_k).
Eigen::MatrixXcd bloch_hamiltonian(const PeriodicField& v, const Vec3& q);

/// Band-structure kinetic energy of one coefficient column at wavevector q.
double kinetic_energy(const PlaneWaveBasis& basis, const Vec3& q,
                      const Eigen::Ref<const Eigen::VectorXcd>& a);

/// Full Bloch eigensystem of a periodic one-body Hamiltonian: for every mesh
/// point the complete spectrum of the fiber (the basis is finite, so "all
/// bands" is exact and keeps later spectral sums free of truncation error).
struct BlochEigensystem {
  std::shared_ptr<const PlaneWaveBasis> basis;
  std::shared_ptr<const BZMesh> mesh;
  int n_bands = 0;  ///< bands certified for reporting (full spectrum stored)
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixXcd> vectors;

  std::size_t n_fiber() const { return basis->size(); }

  /// Ordering, orthonormality and (for real potentials) time-reversal
  /// symmetry lambda_{n,-q} = lambda_{n,q}.
  void check(double tol = 1e-10) const;
};

/// Diagonalize the fiber Hamiltonians of a real potential on a BZ mesh.
BlochEigensystem solve_bloch(const PeriodicField& v, std::shared_ptr<const BZMesh> mesh,
                             int n_bands);

/// Occupied density  sum_q w_q sum_{n<=z} |psi_{n,q}|^2  (non-negative on the
/// grid by construction; integrates to z exactly by Parseval).
PeriodicField density_from_bands(const BlochEigensystem& bloch, int z);

}  // namespace plab

#endif  // PLAB_BLOCH_HPP
