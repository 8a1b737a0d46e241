// SPDX-License-Identifier: MIT

#include "plab/supercell.hpp"

#include <algorithm>

namespace plab {

namespace {

// Fiber slot of an integer mode: per-axis residue in [0, n).
std::size_t fiber_slot(const IVec3& m, const IVec3& repeat) {
  std::size_t slot = 0;
  for (int d = 0; d < 3; ++d) {
    const int r = ((m[d] % repeat[d]) + repeat[d]) % repeat[d];
    slot = slot * repeat[d] + r;
  }
  return slot;
}

// Gamma-centered numerator for a residue: the window (-n/2, n/2].
int centered_numerator(int residue, int n) { return residue > n / 2 ? residue - n : residue; }

void check_cell_field(const PeriodicField& f, const Supercell& sc) {
  PLAB_CHECK(f.basis().lattice().approx_equal(sc.cell->lattice()) &&
                 f.basis().grid() == sc.cell->grid(),
             errc::domain_mismatch, "field does not live on the supercell's unit cell");
}

void check_supercell_field(const PeriodicField& f, const Supercell& sc) {
  PLAB_CHECK(f.basis().lattice().approx_equal(sc.basis->lattice()) &&
                 f.basis().grid() == sc.basis->grid(),
             errc::domain_mismatch, "field does not live on the supercell grid");
}

}  // namespace

Supercell make_supercell(std::shared_ptr<const PlaneWaveBasis> cell, const IVec3& repeat) {
  PLAB_CHECK(cell != nullptr, errc::bad_config, "supercell needs a cell basis");
  PLAB_CHECK(repeat.minCoeff() >= 1, errc::bad_config, "repetition counts must be >= 1");

  Supercell sc;
  sc.cell = std::move(cell);
  sc.repeat = repeat;
  sc.basis = std::make_shared<PlaneWaveBasis>(sc.cell->lattice().supercell(repeat),
                                              sc.cell->ecut());

  // Cell-periodic fields must transfer by pure relabeling; anything else
  // would silently resample the converged crystal potential.
  for (int d = 0; d < 3; ++d)
    PLAB_CHECK(sc.basis->grid()[d] == repeat[d] * sc.cell->grid()[d], errc::incommensurate_grids,
               "supercell FFT grid is not a repetition of the cell grid");

  const std::size_t n_fibers = static_cast<std::size_t>(sc.cells());
  sc.members.assign(n_fibers, {});
  for (std::size_t j = 0; j < sc.dim(); ++j)
    sc.members[fiber_slot(sc.basis->g_int()[j], repeat)].push_back(static_cast<int>(j));

  sc.q_int.reserve(n_fibers);
  sc.q_cart.reserve(n_fibers);
  for (int r0 = 0; r0 < repeat[0]; ++r0)
    for (int r1 = 0; r1 < repeat[1]; ++r1)
      for (int r2 = 0; r2 < repeat[2]; ++r2) {
        const IVec3 q(centered_numerator(r0, repeat[0]), centered_numerator(r1, repeat[1]),
                      centered_numerator(r2, repeat[2]));
        sc.q_int.push_back(q);
        sc.q_cart.push_back(sc.basis->lattice().gvec(q));
      }

  for (std::size_t s = 0; s < n_fibers; ++s)
    PLAB_CHECK(!sc.members[s].empty(), errc::infeasible_supercell,
               "kinetic cutoff too small to populate every folding wavevector");
  return sc;
}

PeriodicField tile_to_supercell(const PeriodicField& f, const Supercell& sc) {
  check_cell_field(f, sc);
  PeriodicField out(sc.basis, f.kind());
  const IVec3 gc = sc.cell->grid();
  for (int i0 = 0; i0 < gc[0]; ++i0)
    for (int i1 = 0; i1 < gc[1]; ++i1)
      for (int i2 = 0; i2 < gc[2]; ++i2) {
        const IVec3 m(Fft3::mode_of(i0, gc[0]), Fft3::mode_of(i1, gc[1]),
                      Fft3::mode_of(i2, gc[2]));
        const IVec3 k = sc.repeat.cwiseProduct(m);
        out.coeff()[sc.basis->grid_index_of_mode(k)] =
            f.coeff()[Fft3::flat(gc, i0, i1, i2)];
      }
  return out;
}

PeriodicField cell_average(const PeriodicField& f, const Supercell& sc) {
  check_supercell_field(f, sc);
  PeriodicField out(sc.cell, f.kind());
  const IVec3 gc = sc.cell->grid();
  for (int i0 = 0; i0 < gc[0]; ++i0)
    for (int i1 = 0; i1 < gc[1]; ++i1)
      for (int i2 = 0; i2 < gc[2]; ++i2) {
        const IVec3 m(Fft3::mode_of(i0, gc[0]), Fft3::mode_of(i1, gc[1]),
                      Fft3::mode_of(i2, gc[2]));
        const IVec3 k = sc.repeat.cwiseProduct(m);
        out.coeff()[Fft3::flat(gc, i0, i1, i2)] =
            f.coeff()[sc.basis->grid_index_of_mode(k)];
      }
  return out;
}

Eigen::MatrixXcd supercell_hamiltonian(const Supercell& sc, const PeriodicField& v_sc) {
  check_supercell_field(v_sc, sc);
  const auto& basis = *sc.basis;
  const std::size_t d = basis.size();
  Eigen::MatrixXcd h(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    for (std::size_t row = 0; row < d; ++row) {
      const IVec3 diff = basis.g_int()[row] - basis.g_int()[col];
      h(row, col) = v_sc.coeff()[basis.grid_index_of_mode(diff)];
    }
    h(col, col) += 0.5 * basis.g_cart()[col].squaredNorm();
  }
  return h;
}

SupercellSpectrum fold_spectrum(const Supercell& sc, const PeriodicField& v0,
                                int bands_per_fiber, bool cap_to_fiber) {
  check_cell_field(v0, sc);
  const auto& cell = *sc.cell;
  const std::size_t n_fibers = sc.members.size();

  std::vector<int> counts(n_fibers);
  int total = 0;
  for (std::size_t s = 0; s < n_fibers; ++s) {
    const int msize = static_cast<int>(sc.members[s].size());
    counts[s] = bands_per_fiber < 0 ? msize : bands_per_fiber;
    if (cap_to_fiber) counts[s] = std::min(counts[s], msize);
    PLAB_CHECK(counts[s] <= msize, errc::insufficient_bands,
               "a folding fiber carries fewer states than requested");
    total += counts[s];
  }

  SupercellSpectrum spec;
  spec.values.resize(total);
  spec.vectors = Eigen::MatrixXcd::Zero(sc.dim(), total);
  spec.q_of.resize(total);
  spec.band_of.resize(total);

  std::vector<int> offsets(n_fibers, 0);
  for (std::size_t s = 1; s < n_fibers; ++s) offsets[s] = offsets[s - 1] + counts[s - 1];

  parallel_for(static_cast<std::int64_t>(n_fibers), [&](std::int64_t s) {
    const auto& mem = sc.members[s];
    const int p = static_cast<int>(mem.size());
    Eigen::MatrixXcd h(p, p);
    for (int col = 0; col < p; ++col) {
      for (int row = 0; row < p; ++row) {
        // Members share a folding wavevector, so mode differences are exact
        // multiples of the repeat counts: cell-potential coefficients.
        const IVec3 diff = sc.basis->g_int()[mem[row]] - sc.basis->g_int()[mem[col]];
        const IVec3 dg = diff.cwiseQuotient(sc.repeat);
        h(row, col) = v0.coeff()[cell.grid_index_of_mode(dg)];
      }
      h(col, col) += 0.5 * sc.basis->g_cart()[mem[col]].squaredNorm();
    }
    const HermitianEigen eig = hermitian_eigen(std::move(h));
    for (int b = 0; b < counts[s]; ++b) {
      const int col = offsets[s] + b;
      spec.values[col] = eig.values[b];
      for (int j = 0; j < p; ++j) spec.vectors(mem[j], col) = eig.vectors(j, b);
      spec.q_of[col] = static_cast<int>(s);
      spec.band_of[col] = b;
    }
  });
  return spec;
}

void SupercellSpectrum::check(double tol) const {
  for (int col = 0; col < n_states(); ++col) {
    PLAB_CHECK(std::isfinite(values[col]), errc::invariant_violation,
               "non-finite supercell eigenvalue");
    if (col > 0 && q_of[col] == q_of[col - 1])
      PLAB_CHECK(values[col] >= values[col - 1] - 1e-12, errc::invariant_violation,
                 "fiber eigenvalues not sorted ascending");
  }
  // Columns at different folding wavevectors occupy disjoint coefficient rows
  // and are orthogonal exactly; check the Gram blocks fiber by fiber.
  int begin = 0;
  while (begin < n_states()) {
    int end = begin;
    while (end < n_states() && q_of[end] == q_of[begin]) ++end;
    const auto block = vectors.middleCols(begin, end - begin);
    const Eigen::MatrixXcd gram = block.adjoint() * block;
    const double err =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    PLAB_CHECK(err <= tol, errc::invariant_violation,
               "supercell eigenvectors lost orthonormality");
    begin = end;
  }
}

std::vector<int> occupied_columns(const SupercellSpectrum& spec, double fermi_level) {
  std::vector<int> occ;
  for (int col = 0; col < spec.n_states(); ++col)
    if (spec.values[col] < fermi_level) occ.push_back(col);
  return occ;
}

PeriodicField density_from_columns(const Supercell& sc,
                                   const Eigen::Ref<const Eigen::MatrixXcd>& cols) {
  PLAB_CHECK(static_cast<std::size_t>(cols.rows()) == sc.dim(), errc::domain_mismatch,
             "coefficient columns do not match the union basis");
  const auto& basis = *sc.basis;
  const IVec3 dims = basis.grid();
  std::vector<double> rho(basis.grid_size(), 0.0);
  std::vector<cdouble> work(basis.grid_size());
  const double inv_volume = 1.0 / basis.lattice().volume();
  for (int c = 0; c < cols.cols(); ++c) {
    std::fill(work.begin(), work.end(), cdouble{0.0, 0.0});
    for (std::size_t j = 0; j < basis.size(); ++j) work[basis.grid_index(j)] = cols(j, c);
    Fft3::backward(dims, work);
    for (std::size_t i = 0; i < work.size(); ++i) rho[i] += inv_volume * std::norm(work[i]);
  }
  return PeriodicField::from_real(sc.basis, PeriodicField::Kind::density, rho);
}

}  // namespace plab
