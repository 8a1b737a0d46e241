// SPDX-License-Identifier: MIT

#include "plab/lattice.hpp"

#include "test_util.hpp"

using namespace plab;

TEST_SUITE("lattice") {
  TEST_CASE("cubic lattice has the textbook reciprocal") {
    const auto lat = Lattice::cubic(2.0);
    CHECK(lat.volume() == doctest::Approx(8.0).epsilon(1e-15));
    const Vec3 g = lat.gvec({1, 0, 0});
    CHECK(g[0] == doctest::Approx(pi).epsilon(1e-15));
    CHECK(std::abs(g[1]) <= 1e-15);
    CHECK(std::abs(g[2]) <= 1e-15);
  }

  TEST_CASE("duality b_i . a_j = 2 pi delta_ij holds for a skew lattice") {
    Mat3 a;
    a << 2.0, 0.5, 0.1,  //
        0.0, 1.7, 0.3,   //
        0.0, 0.0, 3.1;
    const Lattice lat(a);
    const Mat3 prod = lat.reciprocal().transpose() * lat.vectors();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(prod(i, j) - (i == j ? 2.0 * pi : 0.0)) <= 1e-13);
    CHECK(lat.volume() == doctest::Approx(2.0 * 1.7 * 3.1).epsilon(1e-14));
  }

  TEST_CASE("scaling and supercells transform the volume correctly") {
    const auto lat = Lattice::cubic(1.3);
    CHECK(lat.scaled(2.0).volume() == doctest::Approx(8.0 * lat.volume()).epsilon(1e-14));
    CHECK(lat.supercell({2, 3, 1}).volume() == doctest::Approx(6.0 * lat.volume()).epsilon(1e-14));
    // Reciprocal vectors of the supercell are fractions of the cell's.
    const Vec3 g_cell = lat.gvec({1, 0, 0});
    const Vec3 g_super = lat.supercell({2, 3, 1}).gvec({2, 0, 0});
    CHECK((g_cell - g_super).norm() <= 1e-14);
  }

  TEST_CASE("degenerate direct vectors are rejected") {
    Mat3 a = Mat3::Zero();
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    CHECK_ERRC(Lattice(a), errc::bad_config);
  }
}
