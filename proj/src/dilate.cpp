// SPDX-License-Identifier: MIT

#include "plab/dilate.hpp"

#include <array>

namespace plab {

namespace {

PeriodicField relabel(const PeriodicField& f, double lattice_scale, double coeff_scale,
                      const Lattice* target) {
  auto basis = std::make_shared<PlaneWaveBasis>(
      target ? PlaneWaveBasis::rescaled(f.basis(), lattice_scale, *target)
             : PlaneWaveBasis::rescaled(f.basis(), lattice_scale));
  PeriodicField out(basis, f.kind());
  const auto& src = f.coeff();
  auto& dst = out.coeff();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = coeff_scale * src[i];
  return out;
}

}  // namespace

PeriodicField dilate(const PeriodicField& f, double m, const Lattice* target) {
  PLAB_CHECK(m > 0, errc::bad_config, "dilation parameter must be positive");
  return relabel(f, 1.0 / m, m * m * m, target);
}

PeriodicField dilate_adjoint(const PeriodicField& f, double m, const Lattice* target) {
  PLAB_CHECK(m > 0, errc::bad_config, "dilation parameter must be positive");
  return relabel(f, m, 1.0, target);
}

PeriodicField resample(const PeriodicField& f,
                       std::shared_ptr<const PlaneWaveBasis> target, double drop_tol) {
  const auto& src_basis = f.basis();
  PLAB_CHECK(src_basis.lattice().approx_equal(target->lattice()), errc::domain_mismatch,
             "resample requires a shared periodic box");
  const auto& sdims = src_basis.grid();
  const auto& tdims = target->grid();
  PeriodicField out(target, f.kind());

  double ceiling = 0.0;
  for (const auto& c : f.coeff()) ceiling = std::max(ceiling, std::abs(c));
  double dropped = 0.0;

  const cdouble* in = f.coeff().data();
  cdouble* dst = out.coeff().data();
  for (int i0 = 0; i0 < sdims[0]; ++i0)
    for (int i1 = 0; i1 < sdims[1]; ++i1)
      for (int i2 = 0; i2 < sdims[2]; ++i2) {
        const cdouble c = in[Fft3::flat(sdims, i0, i1, i2)];
        if (c == cdouble{0.0, 0.0}) continue;
        const IVec3 m{Fft3::mode_of(i0, sdims[0]), Fft3::mode_of(i1, sdims[1]),
                      Fft3::mode_of(i2, sdims[2])};
        // A Nyquist slot (mode n/2 on an even n-point axis) stands for the
        // self-conjugate pair +-n/2, which samples to (-1)^j.  When the
        // target axis is strictly finer the pair becomes distinguishable and
        // the weight splits evenly so grid samples (and reality) carry over
        // exactly; axes are independent, so a slot has up to 8 descendants.
        std::array<std::array<int, 2>, 3> axis_modes{};
        std::array<int, 3> n_desc{};
        double weight = 1.0;
        for (int a = 0; a < 3; ++a) {
          if (sdims[a] % 2 == 0 && m[a] == sdims[a] / 2 && tdims[a] > sdims[a]) {
            axis_modes[a] = {m[a], -m[a]};
            n_desc[a] = 2;
            weight *= 0.5;
          } else {
            axis_modes[a] = {m[a], 0};
            n_desc[a] = 1;
          }
        }
        for (int d0 = 0; d0 < n_desc[0]; ++d0)
          for (int d1 = 0; d1 < n_desc[1]; ++d1)
            for (int d2 = 0; d2 < n_desc[2]; ++d2) {
              IVec3 v{axis_modes[0][d0], axis_modes[1][d1], axis_modes[2][d2]};
              // On the target, mode -n/2 aliases onto the +n/2 slot (both
              // sample to (-1)^j), so it accumulates there; modes beyond the
              // representable window are dropped under the tolerance.
              bool representable = true;
              for (int a = 0; a < 3; ++a) {
                const int n = tdims[a];
                if (n % 2 == 0 && v[a] == -n / 2) v[a] = n / 2;
                if (v[a] < -((n - 1) / 2) || v[a] > n / 2) representable = false;
              }
              if (representable) {
                dst[target->grid_index_of_mode(v)] += weight * c;
              } else {
                dropped = std::max(dropped, weight * std::abs(c));
              }
            }
      }
  PLAB_CHECK(dropped <= drop_tol * std::max(1e-300, ceiling), errc::resolution_loss,
             "resampling to the target grid would discard significant coefficients");
  return out;
}

}  // namespace plab
