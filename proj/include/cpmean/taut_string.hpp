#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cpmean/time_series.hpp"

namespace cpmean {

/// Solution of the total-variation-penalized least-squares problem
///   minimize sum_i (X_i - f_i)^2 + gamma * sum_i |f_{i+1} - f_i|.
struct TvFit {
    std::vector<double> fit;
    double gamma = 0.0;
    std::vector<std::size_t> knots;  // t with fit[t+1] != fit[t], 1-based
};

/// Exact minimizer via the taut string pulled through the tube of half-width
/// gamma/2 around the running-sum process, pinned at (0, 0) and
/// (n, sum of X). The walk emits a string segment whenever the tube forces a
/// bend: convex bends on the upper boundary, concave bends on the lower.
/// Linear time on typical inputs (a bend restarts the scan at its location).
TvFit taut_string(const TimeSeries& ts, double gamma);

struct TvCheckResult {
    bool ok = false;
    double max_violation = 0.0;
};

/// Independent first-order optimality check for a candidate TV fit, with
/// r_t = sum_{i<=t} (X_i - f_i):
///   |r_t| <= gamma/2 for t < n,  r_n = 0,  and at each knot
///   r_t = -(gamma/2) * sign(f_{t+1} - f_t).
/// Returns the largest violation of these conditions.
TvCheckResult tv_optimality_check(const TimeSeries& ts, const TvFit& fit,
                                  double tol = 1e-8);

/// Knot counts of taut-string fits of a signal plus Gaussian noise, for
/// illustrating how weakly the L1 penalty discourages extra change-points.
/// Report only; no pass/fail.
struct StaircaseReport {
    double gamma = 0.0;
    double noise_sd = 0.0;
    std::vector<std::size_t> knots_per_rep;
    double mean_knots = 0.0;
};

StaircaseReport staircase_demo(const std::vector<double>& signal, double gamma,
                               double noise_sd = 1.0, std::size_t reps = 20,
                               std::uint64_t seed = 0);

}  // namespace cpmean
