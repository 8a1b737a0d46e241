// SPDX-License-Identifier: MIT

#include "plab/common.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace plab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::bad_config: return "BadConfig";
    case errc::empty_basis: return "EmptyBasis";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::incommensurate_grids: return "IncommensurateGrids";
    case errc::resolution_loss: return "ResolutionLoss";
    case errc::non_neutral_source: return "NonNeutralSource";
    case errc::infeasible_supercell: return "InfeasibleSupercell";
    case errc::no_convergence: return "NoConvergence";
    case errc::cg_no_convergence: return "CGNoConvergence";
    case errc::fit_failure: return "FitFailure";
    case errc::no_binding: return "NoBinding";
    case errc::box_too_small: return "BoxTooSmall";
    case errc::insufficient_bands: return "InsufficientBands";
    case errc::no_gap: return "NoGap";
    case errc::gap_closure: return "GapClosure";
    case errc::degenerate_ground_state: return "DegenerateGroundState";
    case errc::singular_eps: return "SingularEps";
    case errc::invariant_violation: return "InvariantViolation";
  }
  return "UnknownError";
}

int errc_exit_code(errc c) {
  switch (c) {
    case errc::bad_config:
    case errc::empty_basis:
    case errc::domain_mismatch:
    case errc::incommensurate_grids:
    case errc::resolution_loss:
    case errc::non_neutral_source:
    case errc::infeasible_supercell:
      return 2;
    case errc::no_convergence:
    case errc::cg_no_convergence:
    case errc::fit_failure:
    case errc::no_binding:
    case errc::box_too_small:
    case errc::insufficient_bands:
    case errc::no_gap:
    case errc::gap_closure:
    case errc::degenerate_ground_state:
    case errc::singular_eps:
      return 3;
    case errc::invariant_violation:
      return 1;
  }
  return 1;
}

double sum_ordered(const std::vector<double>& terms) {
  // Kahan-compensated, fixed order.
  double s = 0.0, c = 0.0;
  for (double t : terms) {
    double y = t - c;
    double u = s + y;
    c = (u - s) - y;
    s = u;
  }
  return s;
}

namespace {
std::atomic<int> g_threads{0};
}

int default_thread_count() {
  if (const char* env = std::getenv("POLARONLAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 1); }

int thread_count() {
  int n = g_threads.load();
  if (n <= 0) {
    n = default_thread_count();
    g_threads.store(n);
  }
  return n;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  const int nt = thread_count();
  if (nt <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(nt, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      // Static contiguous partition: deterministic assignment of work items.
      const std::int64_t lo = n * w / workers;
      const std::int64_t hi = n * (w + 1) / workers;
      for (std::int64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  PLAB_CHECK(x.size() == y.size() && x.size() >= 2, errc::fit_failure,
             "need at least two points for a line fit");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  PLAB_CHECK(std::abs(det) > 1e-30, errc::fit_failure, "degenerate abscissae in line fit");
  LineFit f;
  f.npoints = n;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  PLAB_CHECK(x.size() == y.size(), errc::fit_failure, "size mismatch in log-log fit");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (std::abs(y[i]) > floor && x[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::abs(y[i])));
    }
  }
  PLAB_CHECK(lx.size() >= 3, errc::fit_failure,
             "fewer than three usable points above the noise floor in log-log fit");
  return fit_line(lx, ly);
}

}  // namespace plab
