// SPDX-License-Identifier: MIT

#include "plab/coulomb.hpp"

#include <Eigen/Eigenvalues>

namespace plab {

namespace {

void check_spd(const Mat3& eps) {
  PLAB_CHECK((eps - eps.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + eps.cwiseAbs().maxCoeff()),
             errc::bad_config, "dielectric tensor must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> es(eps, Eigen::EigenvaluesOnly);
  PLAB_CHECK(es.eigenvalues().minCoeff() > 0, errc::bad_config,
             "dielectric tensor must be positive definite");
}

}  // namespace

DielectricCoulomb::DielectricCoulomb(const Mat3& eps) : eps_(eps) { check_spd(eps); }

TruncatedDielectricCoulomb::TruncatedDielectricCoulomb(const Mat3& eps, double radius)
    : eps_(eps), r_(radius) {
  check_spd(eps);
  PLAB_CHECK(radius > 0, errc::bad_config, "truncation radius must be positive");
}

PeriodicField apply_kernel(const PeriodicField& src, const CoulombKernel& kernel) {
  const auto& basis = src.basis();
  const auto& dims = basis.grid();
  PeriodicField out(src.basis_ptr(), PeriodicField::Kind::potential);
  const cdouble* in = src.coeff().data();
  cdouble* dst = out.coeff().data();
  for (int i0 = 0; i0 < dims[0]; ++i0)
    for (int i1 = 0; i1 < dims[1]; ++i1)
      for (int i2 = 0; i2 < dims[2]; ++i2) {
        const std::size_t idx = Fft3::flat(dims, i0, i1, i2);
        const IVec3 m{Fft3::mode_of(i0, dims[0]), Fft3::mode_of(i1, dims[1]),
                      Fft3::mode_of(i2, dims[2])};
        if (m == IVec3::Zero()) {
          dst[idx] = kernel.zero_mode() * in[idx];
        } else {
          dst[idx] = kernel.at(basis.lattice().gvec(m)) * in[idx];
        }
      }
  return out;
}

PeriodicField poisson_periodic(const PeriodicField& src, bool jellium) {
  if (!jellium) {
    const double scale = std::max(1.0, src.max_abs_real());
    PLAB_CHECK(std::abs(src.integral()) <= 1e-10 * scale * src.basis().lattice().volume(),
               errc::non_neutral_source,
               "source has a nonzero mean and no neutralizing background was requested");
  }
  return apply_kernel(src, JelliumCoulomb{});
}

double coulomb_pairing(const PeriodicField& f, const PeriodicField& g,
                       const CoulombKernel& kernel) {
  f.check_same_grid(g);
  const auto& basis = f.basis();
  const auto& dims = basis.grid();
  const cdouble* a = f.coeff().data();
  const cdouble* b = g.coeff().data();
  std::vector<double> re, im;
  re.reserve(f.basis().grid_size());
  im.reserve(f.basis().grid_size());
  for (int i0 = 0; i0 < dims[0]; ++i0)
    for (int i1 = 0; i1 < dims[1]; ++i1)
      for (int i2 = 0; i2 < dims[2]; ++i2) {
        const std::size_t idx = Fft3::flat(dims, i0, i1, i2);
        const IVec3 m{Fft3::mode_of(i0, dims[0]), Fft3::mode_of(i1, dims[1]),
                      Fft3::mode_of(i2, dims[2])};
        const double v = (m == IVec3::Zero()) ? kernel.zero_mode()
                                              : kernel.at(basis.lattice().gvec(m));
        const cdouble term = std::conj(a[idx]) * b[idx] * v;
        re.push_back(term.real());
        im.push_back(term.imag());
      }
  const double volume = basis.lattice().volume();
  const double real_part = volume * sum_ordered(re);
  const double imag_part = volume * sum_ordered(im);
  PLAB_CHECK(std::abs(imag_part) <= 1e-8 * std::max(1.0, std::abs(real_part)),
             errc::invariant_violation, "Coulomb pairing has a large imaginary residue");
  return real_part;
}

double coulomb_D(const PeriodicField& f, const PeriodicField& g) {
  return coulomb_pairing(f, g, JelliumCoulomb{});
}

double coulomb_norm(const PeriodicField& f) {
  const double d = coulomb_D(f, f);
  PLAB_CHECK(d >= -1e-12, errc::invariant_violation, "Coulomb norm of a field came out negative");
  return std::sqrt(std::max(0.0, d));
}

}  // namespace plab
