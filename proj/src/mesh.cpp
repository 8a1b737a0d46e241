// SPDX-License-Identifier: MIT

#include "plab/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace plab {

namespace {
// Map integer i in [0, n) to the signed representative in (-n/2, n/2].
int signed_rep(int i, int n) { return i <= n / 2 ? i : i - n; }
}  // namespace

BZMesh::BZMesh(const Lattice& lattice, int n) : n_(n) {
  PLAB_CHECK(n >= 1, errc::bad_config, "mesh subdivision must be >= 1");
  const Mat3& b = lattice.reciprocal();

  std::vector<IVec3> pts;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        pts.emplace_back(signed_rep(i0, n), signed_rep(i1, n), signed_rep(i2, n));
  std::sort(pts.begin(), pts.end(), [](const IVec3& a, const IVec3& c) {
    if (a[0] != c[0]) return a[0] < c[0];
    if (a[1] != c[1]) return a[1] < c[1];
    return a[2] < c[2];
  });

  const double w = 1.0 / static_cast<double>(pts.size());
  for (const auto& m : pts) {
    q_int_.push_back(m);
    q_cart_.push_back(b * m.cast<double>() / static_cast<double>(n));
    w_.push_back(w);
  }

  // Closure under negation modulo the reciprocal lattice: -m is congruent to
  // another representative mod n.
  neg_.resize(pts.size());
  auto find_rep = [&](const IVec3& m) -> std::size_t {
    IVec3 r;
    for (int d = 0; d < 3; ++d) {
      int v = ((m[d] % n) + n) % n;  // into [0, n)
      r[d] = signed_rep(v, n);
    }
    for (std::size_t j = 0; j < q_int_.size(); ++j)
      if (q_int_[j] == r) return j;
    fail(errc::invariant_violation, "mesh not closed under negation");
  };
  for (std::size_t i = 0; i < q_int_.size(); ++i) neg_[i] = find_rep(IVec3(-q_int_[i]));
}

}  // namespace plab
