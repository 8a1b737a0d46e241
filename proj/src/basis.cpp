// SPDX-License-Identifier: MIT

#include "plab/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace plab {

int fft_friendly_size(int n) {
  for (int c = std::max(n, 2);; ++c) {
    if (c % 2 != 0) continue;
    int r = c;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return c;
  }
}

PlaneWaveBasis::PlaneWaveBasis(const Lattice& lattice, double ecut)
    : lattice_(lattice), ecut_(ecut) {
  PLAB_CHECK(ecut >= 0, errc::empty_basis, "cutoff must be non-negative");

  // Bounding box of the cutoff sphere in integer coordinates: |G| <= kmax
  // implies |m_i| <= kmax * |a_i| / (2 pi).
  const double kmax = std::sqrt(2.0 * ecut);
  IVec3 bound;
  for (int i = 0; i < 3; ++i) {
    const double alen = lattice_.vectors().col(i).norm();
    bound[i] = static_cast<int>(std::floor(kmax * alen / (2.0 * pi))) + 1;
  }

  for (int m0 = -bound[0]; m0 <= bound[0]; ++m0)
    for (int m1 = -bound[1]; m1 <= bound[1]; ++m1)
      for (int m2 = -bound[2]; m2 <= bound[2]; ++m2) {
        const IVec3 m(m0, m1, m2);
        const Vec3 g = lattice_.gvec(m);
        if (0.5 * g.squaredNorm() <= ecut * (1.0 + 1e-14)) g_int_.push_back(m);
      }
  PLAB_CHECK(!g_int_.empty(), errc::empty_basis, "no reciprocal vectors below the cutoff");
  finalize_modes(/*compute_grid=*/true);
}

PlaneWaveBasis::PlaneWaveBasis(const Lattice& lattice, std::vector<IVec3> modes,
                               const IVec3& grid)
    : lattice_(lattice), ecut_(0.0), g_int_(std::move(modes)), grid_(grid) {
  PLAB_CHECK(!g_int_.empty(), errc::empty_basis, "explicit mode set is empty");
  for (int i = 0; i < 3; ++i)
    PLAB_CHECK(grid_[i] >= 1, errc::bad_config, "grid lengths must be positive");
  finalize_modes(/*compute_grid=*/false);
  for (const auto& m : g_int_) ecut_ = std::max(ecut_, 0.5 * lattice_.gvec(m).squaredNorm());
}

void PlaneWaveBasis::finalize_modes(bool compute_grid) {
  auto lex = [](const IVec3& a, const IVec3& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
  };
  std::sort(g_int_.begin(), g_int_.end(), lex);
  PLAB_CHECK(std::adjacent_find(g_int_.begin(), g_int_.end(),
                                [](const IVec3& a, const IVec3& b) {
                                  return (a - b).cwiseAbs().maxCoeff() == 0;
                                }) == g_int_.end(),
             errc::bad_config, "duplicate integer modes in basis");

  max_index_.setZero();
  g_cart_.clear();
  g_cart_.reserve(g_int_.size());
  for (const auto& m : g_int_) {
    g_cart_.push_back(lattice_.gvec(m));
    for (int i = 0; i < 3; ++i) max_index_[i] = std::max(max_index_[i], std::abs(m[i]));
  }

  // Hermitian fields need the coefficient at -m whenever m is present.
  for (const auto& m : g_int_)
    PLAB_CHECK(std::binary_search(g_int_.begin(), g_int_.end(), IVec3(-m), lex),
               errc::invariant_violation, "plane-wave mode set not closed under negation");

  if (compute_grid) {
    // Alias-free product rule: products of two sphere-limited functions carry
    // modes up to 2*max_index; pairing those against a potential limited to
    // 2*max_index needs grid >= 4*max_index + 2 samples (we round up to an
    // even 5-smooth length).
    for (int i = 0; i < 3; ++i) grid_[i] = fft_friendly_size(4 * max_index_[i] + 4);
  }

  grid_index_.clear();
  grid_index_.reserve(g_int_.size());
  for (const auto& m : g_int_) grid_index_.push_back(grid_index_of_mode(m));
}

PlaneWaveBasis PlaneWaveBasis::rescaled(const PlaneWaveBasis& src, double scale) {
  return rescaled(src, scale, src.lattice().scaled(scale));
}

PlaneWaveBasis PlaneWaveBasis::rescaled(const PlaneWaveBasis& src, double scale,
                                        const Lattice& target) {
  PLAB_CHECK(scale > 0, errc::bad_config, "dilation scale must be positive");
  PLAB_CHECK(target.approx_equal(src.lattice().scaled(scale)), errc::domain_mismatch,
             "explicit dilation target lattice does not match the requested scale");
  PlaneWaveBasis out(target, src.g_int_, src.grid_);
  out.ecut_ = src.ecut_ / (scale * scale);
  return out;
}

bool PlaneWaveBasis::mode_in_grid(const IVec3& m) const {
  for (int i = 0; i < 3; ++i) {
    const int n = grid_[i];
    if (m[i] < -(n - 1) / 2 || m[i] > n / 2) return false;
  }
  return true;
}

std::size_t PlaneWaveBasis::grid_index_of_mode(const IVec3& m) const {
  PLAB_CHECK(mode_in_grid(m), errc::resolution_loss,
             "integer mode outside the representable grid range");
  return Fft3::flat(grid_, Fft3::index_of(m[0], grid_[0]), Fft3::index_of(m[1], grid_[1]),
                    Fft3::index_of(m[2], grid_[2]));
}

long PlaneWaveBasis::sphere_position(const IVec3& m) const {
  auto cmp = [](const IVec3& a, const IVec3& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
  };
  auto it = std::lower_bound(g_int_.begin(), g_int_.end(), m, cmp);
  if (it == g_int_.end() || (*it - m).cwiseAbs().maxCoeff() != 0) return -1;
  return it - g_int_.begin();
}

Vec3 PlaneWaveBasis::g_of_grid_index(int i0, int i1, int i2) const {
  const IVec3 m(Fft3::mode_of(i0, grid_[0]), Fft3::mode_of(i1, grid_[1]),
                Fft3::mode_of(i2, grid_[2]));
  return lattice_.gvec(m);
}

bool PlaneWaveBasis::same_grid(const PlaneWaveBasis& other) const {
  return grid_ == other.grid_ && lattice_.approx_equal(other.lattice_);
}

}  // namespace plab
