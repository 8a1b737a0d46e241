// SPDX-License-Identifier: MIT

#include "plab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace plab {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::array<int, 3>, PlanPair>& plan_cache() {
  static std::map<std::array<int, 3>, PlanPair> cache;
  return cache;
}

// FFTW_ESTIMATE keeps planning deterministic and does not overwrite the
// caller's buffer during planning.  Plans are created once per shape on a
// scratch buffer and reused with the new-array execute interface; the plans
// must carry FFTW_UNALIGNED because the buffers they are later executed on
// are std::vector storage, whose alignment can differ from fftw_alloc's.
PlanPair& plans_for(const IVec3& dims) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::array<int, 3>{dims[0], dims[1], dims[2]};
  auto& cache = plan_cache();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  fftw_complex* scratch = fftw_alloc_complex(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.fwd = fftw_plan_dft_3d(dims[0], dims[1], dims[2], scratch, scratch, FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_3d(dims[0], dims[1], dims[2], scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  PLAB_CHECK(p.fwd && p.bwd, errc::bad_config, "FFTW plan creation failed");
  return cache.emplace(key, p).first->second;
}

}  // namespace

void Fft3::forward(const IVec3& dims, std::vector<cdouble>& data) {
  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  PLAB_CHECK(data.size() == n, errc::domain_mismatch, "FFT buffer size does not match grid");
  auto& p = plans_for(dims);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p.fwd, ptr, ptr);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& z : data) z *= scale;
}

void Fft3::backward(const IVec3& dims, std::vector<cdouble>& data) {
  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  PLAB_CHECK(data.size() == n, errc::domain_mismatch, "FFT buffer size does not match grid");
  auto& p = plans_for(dims);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p.bwd, ptr, ptr);
}

}  // namespace plab
