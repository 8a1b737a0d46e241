// SPDX-License-Identifier: MIT

#ifndef PLAB_FFT_HPP
#define PLAB_FFT_HPP

#include "plab/common.hpp"

namespace plab {

/// Thin wrapper around FFTW complex-to-complex 3-D transforms.
///
/// Convention: `forward` maps grid samples to Fourier-series coefficients
/// (including the 1/N normalization), `backward` maps coefficients to grid
/// samples, so f(x) = sum_m c_m exp(i G_m . x) holds exactly on the grid and
/// backward(forward(f)) == f to roundoff.  Plans are cached per grid shape
/// behind a mutex (the FFTW planner is not thread-safe).
class Fft3 {
public:
  static void forward(const IVec3& dims, std::vector<cdouble>& data);
  static void backward(const IVec3& dims, std::vector<cdouble>& data);

  /// Signed mode for array index i on an n-point axis (FFTW layout).
  static int mode_of(int index, int n) { return index <= n / 2 ? index : index - n; }
  /// Array index for signed mode m; m must lie in [-(n-1)/2, n/2].
  static int index_of(int mode, int n) { return mode >= 0 ? mode : mode + n; }

  /// Row-major flat index (last axis fastest), matching FFTW.
  static std::size_t flat(const IVec3& dims, int i0, int i1, int i2) {
    return (static_cast<std::size_t>(i0) * dims[1] + i1) * dims[2] + i2;
  }
};

}  // namespace plab

#endif  // PLAB_FFT_HPP
