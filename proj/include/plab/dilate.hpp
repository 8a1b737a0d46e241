// SPDX-License-Identifier: MIT

#ifndef PLAB_DILATE_HPP
#define PLAB_DILATE_HPP

#include "plab/field.hpp"

namespace plab {

/// Mass-preserving dilation (U_m f)(x) = m^3 f(m x).
///
/// In the Fourier series this is a pure relabel: the integer coefficients are
/// unchanged up to the m^3 factor, while the carrier wavevectors scale from G
/// to m G because the box direct vectors scale by 1/m.  Consequently every
/// homogeneity law of a reciprocal-space functional (e.g. the 1/|k|^2 energy
/// scaling as m) holds exactly in this representation, not just up to
/// discretization error.
///
/// The optional `target` pins the output lattice bit-exactly (e.g. to an
/// existing supercell lattice); it must match lattice().scaled(1/m).
PeriodicField dilate(const PeriodicField& f, double m, const Lattice* target = nullptr);

/// L2 adjoint of U_m: (U_m^* g)(x) = g(x/m).  Also a pure relabel
/// (coefficients unchanged, box scaled by m).
PeriodicField dilate_adjoint(const PeriodicField& f, double m,
                             const Lattice* target = nullptr);

/// Transfer a field to another basis over the same lattice (e.g. a finer or
/// coarser FFT grid).  Modes present in the source but not representable on
/// the target must carry relative weight below drop_tol, else ResolutionLoss.
PeriodicField resample(const PeriodicField& f,
                       std::shared_ptr<const PlaneWaveBasis> target,
                       double drop_tol = 1e-12);

}  // namespace plab

#endif  // PLAB_DILATE_HPP
