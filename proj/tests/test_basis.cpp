// SPDX-License-Identifier: MIT

#include "plab/basis.hpp"

#include "test_util.hpp"

using namespace plab;

TEST_SUITE("basis") {
  TEST_CASE("fft-friendly sizes are the smallest even 5-smooth numbers") {
    CHECK(fft_friendly_size(1) == 2);
    CHECK(fft_friendly_size(2) == 2);
    CHECK(fft_friendly_size(3) == 4);
    CHECK(fft_friendly_size(5) == 6);
    CHECK(fft_friendly_size(7) == 8);
    CHECK(fft_friendly_size(11) == 12);
    CHECK(fft_friendly_size(13) == 16);
    CHECK(fft_friendly_size(17) == 18);
    CHECK(fft_friendly_size(21) == 24);
    CHECK(fft_friendly_size(26) == 30);
  }

  TEST_CASE("cutoff sphere on the unit cube has the exact integer counts") {
    const auto lat = Lattice::cubic(1.0);
    // |m|^2 <= 1: origin plus 6 axis neighbours.
    PlaneWaveBasis b1(lat, 2.0 * pi * pi);
    CHECK(b1.size() == 7);
    CHECK(b1.max_index() == IVec3(1, 1, 1));
    CHECK(b1.grid() == IVec3(8, 8, 8));
    // |m|^2 <= 2 adds the 12 face diagonals: 19 modes.
    PlaneWaveBasis b2(lat, 4.0 * pi * pi);
    CHECK(b2.size() == 19);
    // |m|^2 <= 3 adds the 8 body diagonals: 27 modes.
    PlaneWaveBasis b3(lat, 6.0 * pi * pi);
    CHECK(b3.size() == 27);
  }

  TEST_CASE("sphere list is lexicographically sorted and self-consistent") {
    PlaneWaveBasis basis(Lattice::cubic(1.4), 80.0);
    const auto& modes = basis.g_int();
    for (std::size_t j = 1; j < modes.size(); ++j) {
      const IVec3 &a = modes[j - 1], &b = modes[j];
      const bool less = a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]) ||
                        (a[0] == b[0] && a[1] == b[1] && a[2] < b[2]);
      CHECK(less);
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      CHECK(basis.sphere_position(modes[j]) == static_cast<long>(j));
      CHECK(basis.grid_index(j) == basis.grid_index_of_mode(modes[j]));
      // Negation closure.
      CHECK(basis.sphere_position(IVec3(-modes[j])) >= 0);
    }
    CHECK(basis.sphere_position({999, 0, 0}) == -1);
  }

  TEST_CASE("grid rule leaves room for products of two sphere functions") {
    PlaneWaveBasis basis(Lattice::cubic(1.0), 2.0 * pi * pi);
    for (int i = 0; i < 3; ++i) {
      CHECK(basis.grid()[i] >= 4 * basis.max_index()[i] + 2);
      CHECK(basis.grid()[i] % 2 == 0);
    }
    // Mode representability window is [-(n-1)/2, n/2].
    CHECK(basis.mode_in_grid({4, 0, 0}));
    CHECK(basis.mode_in_grid({-3, 0, 0}));
    CHECK(!basis.mode_in_grid({5, 0, 0}));
    CHECK_ERRC(basis.grid_index_of_mode({5, 0, 0}), errc::resolution_loss);
  }

  TEST_CASE("explicit mode sets are validated") {
    const auto lat = Lattice::cubic(1.0);
    const IVec3 grid{8, 8, 8};
    std::vector<IVec3> good{{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}};
    PlaneWaveBasis b(lat, good, grid);
    CHECK(b.size() == 3);
    CHECK(b.ecut() == doctest::Approx(2.0 * pi * pi).epsilon(1e-14));

    std::vector<IVec3> unbalanced{{0, 0, 0}, {1, 0, 0}};
    CHECK_ERRC(PlaneWaveBasis(lat, unbalanced, grid), errc::invariant_violation);

    std::vector<IVec3> dup{{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {-1, 0, 0}};
    CHECK_ERRC(PlaneWaveBasis(lat, dup, grid), errc::bad_config);

    std::vector<IVec3> wide{{0, 0, 0}, {6, 0, 0}, {-6, 0, 0}};
    CHECK_ERRC(PlaneWaveBasis(lat, wide, grid), errc::resolution_loss);
  }

  TEST_CASE("rescaled basis keeps integer structure and scales wavevectors") {
    PlaneWaveBasis src(Lattice::cubic(1.2), 40.0);
    const auto half = PlaneWaveBasis::rescaled(src, 2.0);  // box doubled
    CHECK(half.size() == src.size());
    CHECK(half.grid() == src.grid());
    for (std::size_t j = 0; j < src.size(); ++j) {
      CHECK(half.g_int()[j] == src.g_int()[j]);
      CHECK((half.g_cart()[j] - 0.5 * src.g_cart()[j]).norm() <= 1e-13);
    }
    CHECK(half.ecut() == doctest::Approx(src.ecut() / 4.0).epsilon(1e-13));

    CHECK_ERRC(PlaneWaveBasis::rescaled(src, 2.0, Lattice::cubic(3.0)), errc::domain_mismatch);
  }

  TEST_CASE("negative cutoff has no modes") {
    CHECK_ERRC(PlaneWaveBasis(Lattice::cubic(1.0), -1.0), errc::empty_basis);
  }
}
