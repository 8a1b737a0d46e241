// SPDX-License-Identifier: MIT

#include "plab/response.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace plab {

namespace {

void validate_solver_params(int n_empty, double cg_tol, int cg_max_iter) {
  PLAB_CHECK(n_empty >= 1, errc::bad_config, "response needs at least one unoccupied band");
  PLAB_CHECK(cg_tol > 0.0, errc::bad_config, "conjugate-gradient tolerance must be positive");
  PLAB_CHECK(cg_max_iter >= 1, errc::bad_config,
             "conjugate-gradient iteration cap must be positive");
}

void check_sc_source(const ResponseContext& ctx, const PeriodicField& nu) {
  PLAB_CHECK(nu.basis().same_grid(*ctx.supercell().basis), errc::domain_mismatch,
             "response sources must live on the supercell grid");
}

double max_abs(const std::vector<cdouble>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

/// Per-fiber column ranges of a fiber-major spectrum.
void fiber_ranges(const SupercellSpectrum& spec, std::size_t n_fibers, std::vector<int>& off,
                  std::vector<int>& cnt) {
  off.assign(n_fibers, -1);
  cnt.assign(n_fibers, 0);
  for (int j = 0; j < spec.n_states(); ++j) {
    const int f = spec.q_of[j];
    if (off[f] < 0) off[f] = j;
    ++cnt[f];
  }
}

struct InducedDensity {
  PeriodicField rho;        ///< density of the first-order projector response
  double band_sum = 0.0;    ///< sum over pairs of |M_{ln}|^2 / (lam_l - lam_n)
  double tail_ratio = 0.0;  ///< Coulomb-norm share of the topmost included bands
};

/// Core response assembly: the density induced at first order by the Coulomb
/// potential of `nu`, together with the spectral-pair energy sum and the
/// truncation-tail share.  For each occupied orbital the Coulomb potential is
/// applied on the grid, matrix elements against the unoccupied columns are
/// gathered fiber by fiber, and the energy-weighted backflow is accumulated
/// into the density; pairs at different folding wavevectors couple through
/// the off-fiber modes of the potential.
InducedDensity induce(const ResponseContext& ctx, const PeriodicField& nu) {
  check_sc_source(ctx, nu);
  const auto& sc = ctx.supercell();
  const auto& spec = ctx.spectrum();
  const auto& basis = *sc.basis;
  const IVec3 dims = basis.grid();
  const std::size_t ng = basis.grid_size();
  const std::size_t dim = basis.size();
  const double vol = basis.lattice().volume();
  const int z = ctx.electrons_per_cell();

  InducedDensity out{PeriodicField(sc.basis, PeriodicField::Kind::density), 0.0, 0.0};
  if (ctx.occupied().empty()) return out;

  const PeriodicField v = apply_kernel(nu, JelliumCoulomb{});
  if (max_abs(v.coeff()) == 0.0) return out;
  const std::vector<cdouble> vx = v.to_grid();

  const std::size_t n_fibers = sc.members.size();
  std::vector<int> off, cnt;
  fiber_ranges(spec, n_fibers, off, cnt);
  std::vector<char> gated(n_fibers, 0);
  for (int g : ctx.gate_columns()) gated[spec.q_of[g]] = 1;
  const bool want_tail = !ctx.gate_columns().empty();

  std::vector<cdouble> grid_n(ng), work(ng);
  std::vector<double> rho(ng, 0.0), rho_tail;
  if (want_tail) rho_tail.assign(ng, 0.0);
  Eigen::VectorXcd y(dim), bflow(dim), btail(dim);

  for (int j : ctx.occupied()) {
    const double lam_n = spec.values[j];

    // Occupied orbital on the grid.
    std::fill(grid_n.begin(), grid_n.end(), cdouble{0.0, 0.0});
    for (std::size_t p = 0; p < dim; ++p) grid_n[basis.grid_index(p)] = spec.vectors(p, j);
    Fft3::backward(dims, grid_n);

    // Coefficients of V * orbital, gathered onto the sphere; the l2 pairing
    // of a column against these is the matrix element <a_l| V |a_n>.
    for (std::size_t i = 0; i < ng; ++i) work[i] = vx[i] * grid_n[i];
    Fft3::forward(dims, work);
    for (std::size_t p = 0; p < dim; ++p) y[p] = work[basis.grid_index(p)];

    // Energy-weighted backflow over every unoccupied block.
    bflow.setZero();
    if (want_tail) btail.setZero();
    for (std::size_t f = 0; f < n_fibers; ++f) {
      const int e0 = off[f] + z;
      const int ne = cnt[f] - z;
      if (ne <= 0) continue;
      const auto block = spec.vectors.middleCols(e0, ne);
      Eigen::VectorXcd m = block.adjoint() * y;
      for (int l = 0; l < ne; ++l) {
        const double gap = spec.values[e0 + l] - lam_n;
        out.band_sum += std::norm(m[l]) / gap;
        m[l] /= -gap;  // M_{ln} / (lam_n - lam_l)
      }
      bflow.noalias() += block * m;
      if (gated[f]) btail.noalias() += spec.vectors.col(e0 + ne - 1) * m[ne - 1];
    }

    const auto accumulate = [&](const Eigen::VectorXcd& b, std::vector<double>& dst) {
      std::fill(work.begin(), work.end(), cdouble{0.0, 0.0});
      for (std::size_t p = 0; p < dim; ++p) work[basis.grid_index(p)] = b[p];
      Fft3::backward(dims, work);
      for (std::size_t i = 0; i < ng; ++i)
        dst[i] += 2.0 * std::real(std::conj(grid_n[i]) * work[i]) / vol;
    };
    accumulate(bflow, rho);
    if (want_tail) accumulate(btail, rho_tail);
  }

  out.rho = PeriodicField::from_real(sc.basis, PeriodicField::Kind::density, rho);
  if (want_tail) {
    const auto tail = PeriodicField::from_real(sc.basis, PeriodicField::Kind::density, rho_tail);
    const double nr = coulomb_norm(out.rho);
    out.tail_ratio = nr > 0.0 ? coulomb_norm(tail) / nr : 0.0;
  }
  return out;
}

/// (1 + L)^{-1} nu by conjugate gradients in the Coulomb inner product.
/// Constants pass through unchanged (the response annihilates them).
PeriodicField solve_screened(const ResponseContext& ctx, const PeriodicField& nu) {
  check_sc_source(ctx, nu);
  PeriodicField x(ctx.supercell().basis, PeriodicField::Kind::density);
  x.set_coeff0(nu.coeff0());
  PeriodicField r = nu;
  r.set_coeff0(cdouble{0.0, 0.0});
  // Keep rr as the plain pairing (not a squared norm) so that an exactly
  // vanishing response makes the first step length exactly one.
  double rr = coulomb_D(r, r);
  if (rr == 0.0) return x;
  const double b0 = std::sqrt(rr);

  PeriodicField p = r;
  for (int iter = 0; iter < ctx.cg_max_iter(); ++iter) {
    PeriodicField ap = apply_L(ctx, p);
    ap += p;
    const double pap = coulomb_D(p, ap);
    const double alpha = rr / pap;
    PeriodicField step = p;
    step *= alpha;
    x += step;
    step = ap;
    step *= alpha;
    r -= step;
    const double rr_new = coulomb_D(r, r);
    if (std::sqrt(rr_new) <= ctx.cg_tol() * b0) return x;
    p *= rr_new / rr;
    p += r;
    rr = rr_new;
  }
  PLAB_CHECK(false, errc::cg_no_convergence,
             "screened solve did not reach the requested residual within the iteration cap");
}

void check_eps_spd(const Mat3& eps) {
  PLAB_CHECK((eps - eps.transpose()).cwiseAbs().maxCoeff() <=
                 1e-12 * (1.0 + eps.cwiseAbs().maxCoeff()),
             errc::singular_eps, "dielectric tensor must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> es(eps, Eigen::EigenvaluesOnly);
  PLAB_CHECK(es.eigenvalues().minCoeff() > 0.0, errc::singular_eps,
             "dielectric tensor must be positive definite");
}

}  // namespace

ResponseContext::ResponseContext(const CrystalGroundState& crystal, const IVec3& repeat,
                                 int n_empty, double cg_tol, int cg_max_iter)
    : sc_((validate_solver_params(n_empty, cg_tol, cg_max_iter),
           make_supercell(crystal.v0.basis_ptr(), repeat))),
      spec_(fold_spectrum(sc_, crystal.v0, crystal.z + n_empty, /*cap_to_fiber=*/true)),
      v0_sc_(tile_to_supercell(crystal.v0, sc_)),
      fermi_(crystal.fermi_level),
      z_(crystal.z),
      n_empty_(n_empty),
      cg_tol_(cg_tol),
      cg_max_iter_(cg_max_iter) {
  const std::size_t n_fibers = sc_.members.size();
  std::vector<int> off, cnt;
  fiber_ranges(spec_, n_fibers, off, cnt);
  for (std::size_t f = 0; f < n_fibers; ++f) {
    PLAB_CHECK(cnt[f] > z_, errc::insufficient_bands,
               "every folding fiber must keep at least one band above the Fermi sea");
    const bool straddles = z_ > 0 ? (spec_.values[off[f] + z_ - 1] < fermi_ &&
                                     spec_.values[off[f] + z_] > fermi_)
                                  : spec_.values[off[f]] > fermi_;
    PLAB_CHECK(straddles, errc::no_gap,
               "folded spectrum does not straddle the crystal Fermi level");
    if (cnt[f] < static_cast<int>(sc_.members[f].size())) gate_.push_back(off[f] + cnt[f] - 1);
  }
  for (int j = 0; j < spec_.n_states(); ++j)
    (spec_.values[j] < fermi_ ? occ_ : emp_).push_back(j);
}

PeriodicField apply_L(const ResponseContext& ctx, const PeriodicField& nu) {
  InducedDensity ind = induce(ctx, nu);
  PLAB_CHECK(ind.tail_ratio <= 1e-6, errc::insufficient_bands,
             "topmost included bands still carry a significant share of the response");
  // L nu = -rho_{Q1}; the first-order projector change is traceless, so the
  // induced density is neutral and the zero mode is pinned exactly.
  for (auto& c : ind.rho.coeff()) c = -c;
  ind.rho.set_coeff0(cdouble{0.0, 0.0});
  return std::move(ind.rho);
}

PeriodicField apply_K(const ResponseContext& ctx, const PeriodicField& nu) {
  PeriodicField k = nu;
  k -= solve_screened(ctx, nu);
  k.set_kind(PeriodicField::Kind::density);
  return k;
}

double f_aux(const ResponseContext& ctx, const PeriodicField& nu) {
  return -0.5 * coulomb_D(nu, apply_K(ctx, nu));
}

PeriodicField apply_B_m(const ResponseContext& ctx, const PeriodicField& nu_macro, double m) {
  PLAB_CHECK(m > 0.0 && m <= 1.0, errc::bad_config, "scale parameter must lie in (0, 1]");
  const Lattice& sc_lat = ctx.supercell().basis->lattice();
  PLAB_CHECK(nu_macro.basis().lattice().scaled(1.0 / m).approx_equal(sc_lat),
             errc::incommensurate_grids,
             "macroscopic box rescaled by 1/m must coincide with the supercell box");

  // The pull-back projection below is exact for pairings against the source
  // only when the source owns every mode pair its grid can express, which
  // excludes the self-conjugate Nyquist planes.
  const IVec3 mg = nu_macro.basis().grid();
  double ceiling = max_abs(nu_macro.coeff());
  PLAB_CHECK(nu_macro.tail_above(IVec3{mg[0] / 2 - 1, mg[1] / 2 - 1, mg[2] / 2 - 1}) <=
                 1e-12 * std::max(1e-300, ceiling),
             errc::resolution_loss,
             "macroscopic sources must stay below their grid's Nyquist planes");

  const PeriodicField u = dilate(nu_macro, m, &sc_lat);
  const PeriodicField u_sc = resample(u, ctx.supercell().basis, 1e-12);
  const PeriodicField screened = solve_screened(ctx, u_sc);
  const PeriodicField w_sc = apply_kernel(screened, JelliumCoulomb{});
  const Lattice macro_lat = nu_macro.basis().lattice();
  const PeriodicField w_back = dilate_adjoint(w_sc, m, &macro_lat);
  // Intentional band projection: keep what the macroscopic grid represents.
  PeriodicField b = resample(w_back, nu_macro.basis_ptr(), 1e300);
  b *= 1.0 / m;
  b.set_kind(PeriodicField::Kind::potential);
  return b;
}

DielectricMatrix extract_eps_m(const ResponseContext& ctx, double residual_gate) {
  const auto& basis = ctx.supercell().basis;
  const Lattice& lat = basis->lattice();

  // Probe stencil: the three axes, all six face diagonals, and all four body
  // diagonals.  Thirteen directions overdetermine the six tensor components,
  // so the least-squares residual reports genuine inconsistency, and each
  // point-group orbit enters complete, which keeps the fit equivariant under
  // the lattice symmetries.
  static constexpr std::array<std::array<int, 3>, 13> kProbes{
      {{1, 0, 0},
       {0, 1, 0},
       {0, 0, 1},
       {1, 1, 0},
       {1, -1, 0},
       {1, 0, 1},
       {1, 0, -1},
       {0, 1, 1},
       {0, 1, -1},
       {1, 1, 1},
       {1, 1, -1},
       {1, -1, 1},
       {-1, 1, 1}}};

  DielectricMatrix dm;
  Eigen::MatrixXd a(kProbes.size(), 6);
  Eigen::VectorXd t(kProbes.size());
  for (std::size_t row = 0; row < kProbes.size(); ++row) {
    const IVec3 base{kProbes[row][0], kProbes[row][1], kProbes[row][2]};
    double eta[2], k2[2];
    for (int s = 1; s <= 2; ++s) {
      const IVec3 kint = s * base;
      PeriodicField nu(basis, PeriodicField::Kind::density);
      nu.coeff()[basis->grid_index_of_mode(kint)] = 0.5;
      nu.coeff()[basis->grid_index_of_mode(IVec3{-kint[0], -kint[1], -kint[2]})] = 0.5;
      const PeriodicField x = solve_screened(ctx, nu);
      eta[s - 1] = coulomb_D(nu, x) / coulomb_D(nu, nu);
      k2[s - 1] = lat.gvec(kint).squaredNorm();
    }
    // Linear extrapolation in |k|^2 to the homogeneous limit.
    const double eta0 = eta[0] - k2[0] * (eta[1] - eta[0]) / (k2[1] - k2[0]);
    PLAB_CHECK(eta0 > 0.0, errc::fit_failure,
               "extrapolated screening ratio must stay positive");
    const Vec3 u = lat.gvec(base).normalized();
    dm.directions.push_back(u);
    dm.eta0.push_back(eta0);
    t[row] = 1.0 / eta0;  // = u . eps u
    a.row(row) << u[0] * u[0], u[1] * u[1], u[2] * u[2], 2.0 * u[0] * u[1], 2.0 * u[0] * u[2],
        2.0 * u[1] * u[2];
  }

  const Eigen::VectorXd w = a.colPivHouseholderQr().solve(t);
  dm.fit_residual = (a * w - t).norm() / t.norm();
  PLAB_CHECK(dm.fit_residual <= residual_gate, errc::fit_failure,
             "screening ratios are not consistent with a quadratic form");
  dm.eps << w[0], w[3], w[4], w[3], w[1], w[5], w[4], w[5], w[2];
  return dm;
}

double kinetic_identity_residual(const ResponseContext& ctx, const PeriodicField& nu) {
  const InducedDensity ind = induce(ctx, nu);
  if (ind.band_sum == 0.0) return 0.0;
  // -1/2 Tr_0(Q1 V) = -1/2 D(rho_{Q1}, nu), evaluated through the assembled
  // density rather than the spectral pairs.
  const double rhs = -0.5 * coulomb_D(ind.rho, nu);
  return std::abs(ind.band_sum - rhs) / std::abs(ind.band_sum);
}

double pekar_interaction(const PeriodicField& rho, const Mat3& eps) {
  check_eps_spd(eps);
  return 0.5 * (coulomb_pairing(rho, rho, DielectricCoulomb(eps)) -
                coulomb_pairing(rho, rho, JelliumCoulomb{}));
}

PeriodicField w_poisson(const PeriodicField& rho, const Mat3& eps) {
  check_eps_spd(eps);
  return apply_kernel(rho, DielectricCoulomb(eps));
}

}  // namespace plab
