// SPDX-License-Identifier: MIT

#include "plab/bloch.hpp"

#include <lapacke.h>

namespace plab {

HermitianEigen hermitian_eigen(Eigen::MatrixXcd h) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  PLAB_CHECK(n > 0 && h.cols() == n, errc::bad_config, "eigensolver needs a square matrix");
  HermitianEigen out;
  out.values.resize(n);
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'U', n, reinterpret_cast<lapack_complex_double*>(h.data()), n,
      out.values.data());
  PLAB_CHECK(info == 0, errc::no_convergence,
             "dense Hermitian eigensolver failed with info " + std::to_string(info));
  out.vectors = std::move(h);
  return out;
}

Eigen::MatrixXcd bloch_hamiltonian(const PeriodicField& v, const Vec3& q) {
  const auto& basis = v.basis();
  const std::size_t p = basis.size();
  Eigen::MatrixXcd h(p, p);
  for (std::size_t col = 0; col < p; ++col) {
    for (std::size_t row = 0; row < p; ++row) {
      const IVec3 diff = basis.g_int()[row] - basis.g_int()[col];
      h(row, col) = v.coeff()[basis.grid_index_of_mode(diff)];
    }
    h(col, col) += 0.5 * (basis.g_cart()[col] + q).squaredNorm();
  }
  return h;
}

double kinetic_energy(const PlaneWaveBasis& basis, const Vec3& q,
                      const Eigen::Ref<const Eigen::VectorXcd>& a) {
  PLAB_CHECK(static_cast<std::size_t>(a.size()) == basis.size(), errc::domain_mismatch,
             "coefficient column does not match the basis");
  double e = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j)
    e += 0.5 * (basis.g_cart()[j] + q).squaredNorm() * std::norm(a[j]);
  return e;
}

void BlochEigensystem::check(double tol) const {
  PLAB_CHECK(values.size() == mesh->size() && vectors.size() == mesh->size(),
             errc::invariant_violation, "eigensystem does not cover the mesh");
  for (std::size_t iq = 0; iq < mesh->size(); ++iq) {
    const auto& w = values[iq];
    for (int n = 1; n < w.size(); ++n)
      PLAB_CHECK(w[n] >= w[n - 1] - 1e-12, errc::invariant_violation,
                 "eigenvalues not sorted ascending");
    // Orthonormality of the stored columns.
    const auto& u = vectors[iq];
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    const double err = (gram - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    PLAB_CHECK(err <= tol, errc::invariant_violation, "Bloch vectors lost orthonormality");
    // Time reversal for real potentials.  Only unwrapped pairs -q are exact
    // in a fixed truncated basis: a pair reached through a reciprocal-lattice
    // wrap sees a shifted plane-wave sphere and differs by truncation error.
    if (!mesh->negation_exact(iq)) continue;
    const std::size_t jq = mesh->negation_partner(iq);
    const auto& wneg = values[jq];
    for (int n = 0; n < std::min(n_bands, static_cast<int>(w.size())); ++n)
      PLAB_CHECK(std::abs(w[n] - wneg[n]) <= tol * std::max(1.0, std::abs(w[n])),
                 errc::invariant_violation, "time-reversal symmetry of bands violated");
  }
}

BlochEigensystem solve_bloch(const PeriodicField& v, std::shared_ptr<const BZMesh> mesh,
                             int n_bands) {
  BlochEigensystem out;
  out.basis = v.basis_ptr();
  out.mesh = std::move(mesh);
  const std::size_t p = out.basis->size();
  PLAB_CHECK(n_bands >= 1 && static_cast<std::size_t>(n_bands) <= p, errc::insufficient_bands,
             "requested more bands than the plane-wave sphere supports");
  out.n_bands = n_bands;
  out.values.resize(out.mesh->size());
  out.vectors.resize(out.mesh->size());
  parallel_for(static_cast<std::int64_t>(out.mesh->size()), [&](std::int64_t iq) {
    auto eig = hermitian_eigen(bloch_hamiltonian(v, out.mesh->q_cart()[iq]));
    out.values[iq] = std::move(eig.values);
    out.vectors[iq] = std::move(eig.vectors);
  });
  return out;
}

PeriodicField density_from_bands(const BlochEigensystem& bloch, int z) {
  const auto& basis = *bloch.basis;
  const auto& dims = basis.grid();
  const double volume = basis.lattice().volume();
  PLAB_CHECK(z >= 0 && static_cast<std::size_t>(z) <= basis.size(), errc::insufficient_bands,
             "occupied band count outside the fiber dimension");

  std::vector<double> rho(basis.grid_size(), 0.0);
  std::vector<cdouble> work(basis.grid_size());
  for (std::size_t iq = 0; iq < bloch.mesh->size(); ++iq) {
    const double w = bloch.mesh->weights()[iq] / volume;
    for (int n = 0; n < z; ++n) {
      std::fill(work.begin(), work.end(), cdouble{0.0, 0.0});
      for (std::size_t j = 0; j < basis.size(); ++j)
        work[basis.grid_index(j)] = bloch.vectors[iq](j, n);
      Fft3::backward(dims, work);
      for (std::size_t i = 0; i < work.size(); ++i) rho[i] += w * std::norm(work[i]);
    }
  }
  return PeriodicField::from_real(bloch.basis, PeriodicField::Kind::density, rho);
}

}  // namespace plab
