// SPDX-License-Identifier: MIT

#include "plab/crystal.hpp"

#include <cmath>

#include "test_util.hpp"

using namespace plab;

namespace {

std::shared_ptr<const BZMesh> make_mesh(const Lattice& lat, int n) {
  return std::make_shared<BZMesh>(lat, n);
}

}  // namespace

TEST_SUITE("crystal") {
  TEST_CASE("free fiber is diagonal with kinetic eigenvalues") {
    auto basis = std::make_shared<PlaneWaveBasis>(Lattice::cubic(1.0), 2.0 * pi * pi);
    PeriodicField zero(basis, PeriodicField::Kind::potential);
    const auto h = bloch_hamiltonian(zero, Vec3::Zero());
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
    auto eig = hermitian_eigen(h);
    // Modes |m|^2 <= 1 at q=0: one zero eigenvalue, six at 2 pi^2.
    CHECK(std::abs(eig.values[0]) <= 1e-14);
    for (int j = 1; j < 7; ++j)
      CHECK(eig.values[j] == doctest::Approx(2.0 * pi * pi).epsilon(1e-13));
  }

  TEST_CASE("constant potentials shift the spectrum rigidly") {
    auto basis = std::make_shared<PlaneWaveBasis>(Lattice::cubic(1.3), 40.0);
    PeriodicField zero(basis, PeriodicField::Kind::potential);
    PeriodicField c(basis, PeriodicField::Kind::potential);
    c.set_coeff0(0.37);
    const Vec3 q = basis->lattice().gvec({1, 0, 0}) * 0.25;
    const auto e0 = hermitian_eigen(bloch_hamiltonian(zero, q));
    const auto ec = hermitian_eigen(bloch_hamiltonian(c, q));
    for (int j = 0; j < e0.values.size(); ++j)
      CHECK(ec.values[j] - e0.values[j] == doctest::Approx(0.37).epsilon(1e-12));
  }

  TEST_CASE("weak single-mode potential follows second-order perturbation theory") {
    // H(c) = -Lap/2 + 2 c cos(b1 . x) on the unit cube.  The q = 0 ground
    // state has E(c) = -c^2/pi^2 + O(c^4) (first order vanishes, the second
    // order sums over G = +-b1 with denominator -(1/2)|b1|^2 = -2 pi^2).
    auto basis = std::make_shared<PlaneWaveBasis>(Lattice::cubic(1.0), 180.0);
    for (double c : {0.04, 0.02, 0.01}) {
      PeriodicField v(basis, PeriodicField::Kind::potential);
      v.coeff()[basis->grid_index_of_mode({1, 0, 0})] = c;
      v.coeff()[basis->grid_index_of_mode({-1, 0, 0})] = c;
      const auto eig = hermitian_eigen(bloch_hamiltonian(v, Vec3::Zero()));
      const double predicted = -c * c / (pi * pi);
      CHECK(std::abs(eig.values[0] - predicted) <= c * c * c);
    }
  }

  TEST_CASE("flat two-band model gives gap one and midpoint fermi level") {
    auto basis = std::make_shared<PlaneWaveBasis>(Lattice::cubic(1.0), 2.0 * pi * pi);
    auto mesh = make_mesh(basis->lattice(), 1);
    BlochEigensystem fake;
    fake.basis = basis;
    fake.mesh = mesh;
    fake.n_bands = 2;
    fake.values = {Eigen::VectorXd(2)};
    fake.values[0] << 0.0, 1.0;
    fake.vectors = {Eigen::MatrixXcd::Identity(2, 2)};
    const auto [gap, fermi] = check_gap(fake, 1);
    CHECK(gap == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fermi == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("free bands have no insulating gap at z = 1") {
    auto basis = std::make_shared<PlaneWaveBasis>(Lattice::cubic(1.0), 180.0);
    PeriodicField zero(basis, PeriodicField::Kind::potential);
    auto mesh = make_mesh(basis->lattice(), 2);  // contains 0 and zone boundary
    const auto bloch = solve_bloch(zero, mesh, 4);
    CHECK_ERRC(check_gap(bloch, 1), errc::no_gap);
  }

  TEST_CASE("empty crystal converges to the vacuum") {
    auto basis = std::make_shared<PlaneWaveBasis>(Lattice::cubic(1.5), 30.0);
    PeriodicField mu(basis, PeriodicField::Kind::density);
    auto st = scf_crystal(mu, make_mesh(basis->lattice(), 2), 0, 0.6, 1e-12, 10);
    CHECK(st.rho0.max_abs_real() <= 1e-14);
    CHECK(st.v0.max_abs_real() <= 1e-14);
    CHECK(st.fermi_level < st.bloch.values[0][0]);
    CHECK(std::isinf(st.gap));
    // Free bands on the mesh: lowest eigenvalue at gamma is zero.
    CHECK(std::abs(st.bloch.values[0][0]) <= 1e-13);
  }
}

#include "reference_config.hpp"

TEST_SUITE("crystal") {
  TEST_CASE("reference crystal reproduces its frozen ground state") {
    using namespace plab_tests;
    const CrystalGroundState& st = reference_crystal();
    // Regression values from the first oracle run (mixing-path independent).
    CHECK(std::abs(st.gap - kReferenceGap) <= 1e-9);
    CHECK(std::abs(st.fermi_level - kReferenceFermi) <= 1e-9);
    const double e = crystal_energy(st.bloch, st.rho0, st.mu0, st.z);
    CHECK(std::abs(e - kReferenceEnergyPerCell) <= 1e-9);
    // Local neutrality: electron count matches the nuclear charge per cell.
    CHECK(std::abs(st.rho0.integral() - 1.0) <= 1e-8);
    CHECK(std::abs(st.mu0.integral() - 1.0) <= 1e-8);
    // Certified insulator: full invariant sweep.
    st.check();
  }

  TEST_CASE("reference fixed point is independent of the mixing path") {
    using namespace plab_tests;
    ReferenceConfig cfg;
    cfg.mix = 0.3;
    auto basis = make_reference_basis(cfg);
    auto mesh = make_mesh(basis->lattice(), cfg.mesh_n);
    const auto mu = make_reference_mu(basis, cfg);
    const auto st = scf_crystal(mu, mesh, cfg.z, cfg.mix, cfg.scf_tol, cfg.max_iter);
    CHECK(std::abs(st.gap - reference_crystal().gap) <= 1e-11);
  }
}
