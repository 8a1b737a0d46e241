// SPDX-License-Identifier: MIT

#include "plab/crystal.hpp"

#include <limits>

namespace plab {

std::pair<double, double> check_gap(const BlochEigensystem& bloch, int z) {
  PLAB_CHECK(z >= 0, errc::bad_config, "negative electron count");
  PLAB_CHECK(static_cast<std::size_t>(z) < bloch.n_fiber(), errc::insufficient_bands,
             "need at least z+1 bands to certify a gap");
  double top = -std::numeric_limits<double>::infinity();
  double bottom = std::numeric_limits<double>::infinity();
  for (const auto& w : bloch.values) {
    if (z > 0) top = std::max(top, w[z - 1]);
    bottom = std::min(bottom, w[z]);
  }
  if (z == 0) return {std::numeric_limits<double>::infinity(), bottom - 1.0};
  const double gap = bottom - top;
  PLAB_CHECK(gap > 0, errc::no_gap,
             "bands " + std::to_string(z) + " and " + std::to_string(z + 1) +
                 " overlap across the mesh (insulator assumption violated)");
  return {gap, 0.5 * (top + bottom)};
}

double crystal_energy(const BlochEigensystem& bloch, const PeriodicField& rho,
                      const PeriodicField& mu0, int z) {
  double kinetic = 0.0;
  for (std::size_t iq = 0; iq < bloch.mesh->size(); ++iq)
    for (int n = 0; n < z; ++n)
      kinetic += bloch.mesh->weights()[iq] *
                 kinetic_energy(*bloch.basis, bloch.mesh->q_cart()[iq], bloch.vectors[iq].col(n));
  PeriodicField net = rho;
  net -= mu0;
  return kinetic + 0.5 * coulomb_D(net, net);
}

CrystalGroundState scf_crystal(const PeriodicField& mu0, std::shared_ptr<const BZMesh> mesh,
                               int z, double mix, double tol, int max_iter) {
  PLAB_CHECK(mix > 0 && mix <= 1, errc::bad_config, "mixing parameter must lie in (0, 1]");
  PLAB_CHECK(tol > 0 && max_iter >= 1, errc::bad_config, "invalid SCF tolerances");
  PLAB_CHECK(std::abs(mu0.integral() - z) <= 1e-8 * std::max(1.0, std::abs(static_cast<double>(z))),
             errc::non_neutral_source, "nuclear charge per cell must equal z");
  const auto basis = mu0.basis_ptr();
  const int n_bands = z + std::max(8, z);
  PLAB_CHECK(static_cast<std::size_t>(n_bands) <= basis->size(), errc::insufficient_bands,
             "plane-wave sphere too small for the requested band budget");

  CrystalGroundState st{mu0,
                        PeriodicField(basis, PeriodicField::Kind::density),
                        PeriodicField(basis, PeriodicField::Kind::potential),
                        BlochEigensystem{},
                        z,
                        0.0,
                        0.0,
                        std::numeric_limits<double>::infinity(),
                        {}};

  // Start from the neutral guess rho = mu0 (positive, exactly charge z).
  PeriodicField rho_in = mu0;
  rho_in.set_kind(PeriodicField::Kind::density);

  for (int iter = 0; iter < max_iter; ++iter) {
    PeriodicField net = rho_in;
    net -= mu0;
    const PeriodicField v = poisson_periodic(net, /*jellium=*/true);
    BlochEigensystem bloch = solve_bloch(v, mesh, n_bands);
    PeriodicField rho_out = density_from_bands(bloch, z);

    PeriodicField diff = rho_out;
    diff -= rho_in;
    st.scf_residual = coulomb_norm(diff);
    st.energy_history.push_back(crystal_energy(bloch, rho_out, mu0, z));

    st.rho0 = std::move(rho_out);
    st.v0 = v;
    st.bloch = std::move(bloch);

    if (st.scf_residual <= tol) break;
    diff *= mix;
    rho_in += diff;  // rho_in + mix (rho_out - rho_in)
  }
  PLAB_CHECK(st.scf_residual <= tol, errc::no_convergence,
             "crystal SCF residual " + std::to_string(st.scf_residual) +
                 " above tolerance after max_iter iterations");

  std::tie(st.gap, st.fermi_level) = check_gap(st.bloch, z);
  st.check(std::max(1e-8, 10.0 * tol));
  return st;
}

void CrystalGroundState::check(double tol) const {
  PLAB_CHECK(std::abs(rho0.integral() - z) <= 1e-8 * std::max(1.0, std::abs(static_cast<double>(z))),
             errc::invariant_violation, "electronic charge per cell drifted from z");
  PLAB_CHECK(std::abs(mu0.integral() - z) <= 1e-8 * std::max(1.0, std::abs(static_cast<double>(z))),
             errc::invariant_violation, "nuclear charge per cell drifted from z");
  PLAB_CHECK(rho0.min_real() >= -1e-10, errc::invariant_violation,
             "electronic density went negative");

  // Poisson self-consistency of the stored potential.
  PeriodicField net = rho0;
  net -= mu0;
  PeriodicField v_check = poisson_periodic(net, /*jellium=*/true);
  v_check -= v0;
  double verr = 0.0;
  for (const auto& c : v_check.coeff()) verr = std::max(verr, std::abs(c));
  PLAB_CHECK(verr <= tol, errc::invariant_violation,
             "stored potential violates the Poisson equation");

  bloch.check(1e-10);
  if (z > 0) {
    for (const auto& w : bloch.values) {
      PLAB_CHECK(w[z - 1] < fermi_level, errc::invariant_violation,
                 "occupied band crosses the Fermi level");
      PLAB_CHECK(w[z] > fermi_level, errc::invariant_violation,
                 "empty band crosses the Fermi level");
    }
  }
}

}  // namespace plab
