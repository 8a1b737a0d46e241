// SPDX-License-Identifier: MIT

#ifndef PLAB_COULOMB_HPP
#define PLAB_COULOMB_HPP

#include "plab/field.hpp"

namespace plab {

/// Reciprocal-space two-body kernel v(k).  Implementations cover the
/// periodic (jellium) Coulomb kernel, whole-space evaluation through
/// real-space truncation, and their anisotropic dielectric counterparts.
class CoulombKernel {
public:
  virtual ~CoulombKernel() = default;
  virtual double at(const Vec3& k) const = 0;
  virtual double zero_mode() const = 0;
};

/// 4 pi / |k|^2 with the zero mode dropped (neutralizing background).
class JelliumCoulomb final : public CoulombKernel {
public:
  double at(const Vec3& k) const override { return four_pi / k.squaredNorm(); }
  double zero_mode() const override { return 0.0; }
};

/// Fourier transform of 1/|x| truncated to |x| <= R: 4 pi (1 - cos|k|R)/|k|^2.
/// On a box of edge >= 2R this reproduces whole-space Coulomb integrals
/// exactly for densities supported in a ball of diameter R.
class TruncatedCoulomb final : public CoulombKernel {
public:
  explicit TruncatedCoulomb(double radius) : r_(radius) {
    PLAB_CHECK(radius > 0, errc::bad_config, "truncation radius must be positive");
  }
  double at(const Vec3& k) const override {
    const double k2 = k.squaredNorm();
    return four_pi * (1.0 - std::cos(std::sqrt(k2) * r_)) / k2;
  }
  double zero_mode() const override { return 2.0 * pi * r_ * r_; }
  double radius() const { return r_; }

private:
  double r_;
};

/// Green kernel of the anisotropic operator -div(eps grad .): 4 pi/(k.eps k),
/// zero mode dropped.
class DielectricCoulomb final : public CoulombKernel {
public:
  explicit DielectricCoulomb(const Mat3& eps);
  double at(const Vec3& k) const override { return four_pi / k.dot(eps_ * k); }
  double zero_mode() const override { return 0.0; }
  const Mat3& eps() const { return eps_; }

private:
  Mat3 eps_;
};

/// Ellipsoidally truncated anisotropic kernel: the real-space Green function
/// of -div(eps grad .) cut off on the ellipsoid x.eps^{-1} x <= R^2, whose
/// transform is 4 pi (1 - cos(R sqrt(k.eps k)))/(k.eps k).
class TruncatedDielectricCoulomb final : public CoulombKernel {
public:
  TruncatedDielectricCoulomb(const Mat3& eps, double radius);
  double at(const Vec3& k) const override {
    const double q2 = k.dot(eps_ * k);
    return four_pi * (1.0 - std::cos(std::sqrt(q2) * r_)) / q2;
  }
  double zero_mode() const override { return 2.0 * pi * r_ * r_; }

private:
  Mat3 eps_;
  double r_;
};

/// Convolve a source with a kernel: Vhat(m) = v(G_m) shat(m).
PeriodicField apply_kernel(const PeriodicField& src, const CoulombKernel& kernel);

/// Periodic Poisson solve -Lap V = 4 pi s.  With jellium=true the zero mode
/// is dropped (neutralizing background); otherwise the source must be neutral
/// to roundoff or NonNeutralSource is thrown.
PeriodicField poisson_periodic(const PeriodicField& src, bool jellium = true);

/// Coulomb pairing  <f, kernel * g>  (defaults to the periodic jellium
/// kernel, i.e. the D(.,.) bilinear form).  Checks the imaginary residue.
double coulomb_pairing(const PeriodicField& f, const PeriodicField& g,
                       const CoulombKernel& kernel);
double coulomb_D(const PeriodicField& f, const PeriodicField& g);
/// Coulomb-space norm sqrt(D(f, f)).
double coulomb_norm(const PeriodicField& f);

}  // namespace plab

#endif  // PLAB_COULOMB_HPP
