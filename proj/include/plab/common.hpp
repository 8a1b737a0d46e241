// polaronlab: plane-wave laboratory for dielectric crystals, lattice defects
// and polarons.
//
// SPDX-License-Identifier: MIT

#ifndef PLAB_COMMON_HPP
#define PLAB_COMMON_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace plab {

using cdouble = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using IVec3 = Eigen::Vector3i;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double four_pi = 4.0 * pi;

/// Typed failure classes.  Every throwing code path in the library uses one
/// of these so callers (and the CLI) can distinguish configuration mistakes,
/// numerical non-convergence and violated mathematical guarantees.
enum class errc {
  // configuration / input problems
  bad_config,
  empty_basis,
  domain_mismatch,
  incommensurate_grids,
  resolution_loss,
  non_neutral_source,
  infeasible_supercell,
  // numerical non-convergence
  no_convergence,
  cg_no_convergence,
  fit_failure,
  no_binding,
  box_too_small,
  insufficient_bands,
  // physics-state problems detected at runtime
  no_gap,
  gap_closure,
  degenerate_ground_state,
  singular_eps,
  // a mathematical guarantee failed to hold numerically
  invariant_violation,
};

const char* errc_name(errc c);

/// Exit-code category used by the CLI: 1 = invariant violation,
/// 2 = configuration error, 3 = numerical non-convergence.
int errc_exit_code(errc c);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

/// Check a runtime condition, throwing a typed Error when it fails.
#define PLAB_CHECK(cond, code, msg)                                                              \
  do {                                                                                           \
    if (!(cond)) ::plab::fail((code), (msg));                                                    \
  } while (0)

/// Deterministic accumulation: sums in fixed (container) order so results are
/// bit-stable run to run regardless of the thread count used elsewhere.
double sum_ordered(const std::vector<double>& terms);

/// Number of worker threads: --threads flag > POLARONLAB_THREADS env > 1.
int default_thread_count();
void set_thread_count(int n);
int thread_count();

/// Run body(i) for i in [0, n).  Deterministic static partition; falls back
/// to a plain loop when one thread is configured.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

/// Least-squares line through (x_i, y_i); used for log-log order fits.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int npoints = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log|y| vs log x, dropping points whose |y| is below `floor`
/// (machine-noise guard).  Throws fit_failure if fewer than 3 points survive.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double floor);

}  // namespace plab

#endif  // PLAB_COMMON_HPP
