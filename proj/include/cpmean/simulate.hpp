#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "cpmean/runner.hpp"
#include "cpmean/time_series.hpp"

namespace cpmean {

enum class SignalKind { blocks, teeth, mscale, constant, custom };

struct SignalSpec {
    SignalKind kind = SignalKind::constant;
    std::size_t n = 0;              // blocks, constant
    std::size_t n_per_tooth = 10;   // teeth: block length
    std::size_t n_teeth = 20;       // teeth: number of blocks
    double low = 0.0;
    double high = 1.0;
    std::vector<double> levels;          // custom
    std::vector<std::size_t> lengths;    // custom
};

struct GeneratedSignal {
    std::vector<double> values;
    Segmentation truth;
};

/// Piecewise-constant test signals with their ground truth. The blocks
/// signal uses the canonical breakpoint/jump parameters rescaled to length n
/// (amplitude x10) and always carries exactly 11 change-points.
GeneratedSignal gen_signal(const SignalSpec& spec);

enum class NoiseKind { gaussian, laplace, ar1 };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double sd = 1.0;   // marginal standard deviation (laplace: sqrt(variance))
    double phi = 0.0;  // ar1 coefficient, |phi| < 1
};

/// Deterministic per seed; Laplace is parametrized by its target variance,
/// AR(1) is stationary with the given marginal sd.
std::vector<double> add_noise(const std::vector<double>& signal,
                              const NoiseSpec& noise, std::uint64_t seed);

/// Hausdorff distance between change-point sets. Exactly one empty set gives
/// the sentinel n; two empty sets give 0.
double hausdorff(const std::vector<std::size_t>& a,
                 const std::vector<std::size_t>& b, std::size_t n);

/// max_j |a_j - b_j| under order pairing; requires equal cardinalities.
double max_location_error(const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b);

/// max over 0 <= i < j <= n of (eps_{i+1} + ... + eps_j)^2 / (j - i).
/// O(n^2) reference implementation, for diagnostics.
double max_norm_partial_sum(const std::vector<double>& eps);

struct SimScenario {
    SignalSpec signal;
    NoiseSpec noise;
    std::uint64_t seed = 0;
    std::size_t reps = 100;
};

struct RepRecord {
    std::size_t rep = 0;
    std::size_t n_true = 0;
    std::size_t n_est = 0;
    double hausdorff = 0.0;
    double max_location_error = -1.0;  // defined only when n_est == n_true
    double fit_mse = 0.0;
    double runtime_ms = 0.0;
};

struct AccuracyReport {
    std::map<int, std::size_t> n_error_histogram;  // counts of n_est - n_true
    std::vector<RepRecord> per_rep;
    double mean_hausdorff = 0.0;
    double mean_fit_mse = 0.0;
    double median_max_location_error = -1.0;  // over reps with n_est == n_true
    double total_runtime_ms = 0.0;
};

/// Monte Carlo evaluation of a method on a scenario. Replications use
/// independent substreams of the master seed and may run on several threads;
/// the report is identical regardless of the worker count. A replication
/// failure is reported with its index.
AccuracyReport run_scenario(const SimScenario& scenario, const MethodSpec& method,
                            std::size_t n_threads = 0);

}  // namespace cpmean
