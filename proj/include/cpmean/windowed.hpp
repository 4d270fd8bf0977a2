#pragma once

#include <cstddef>
#include <vector>

#include "cpmean/time_series.hpp"

namespace cpmean {

enum class MosumThresholdMode {
    absolute,        // compare |M| against `value` directly
    asymptotic,      // significance level `value`; Gumbel critical value times sigma
    non_asymptotic,  // sigma * (sqrt(4 log n) + `value`)
};

enum class MosumVarianceMode { global_mad, local_window };

struct MosumConfig {
    std::size_t bandwidth = 0;
    double eta = 0.4;  // gap-correction parameter, in (0, 1/2)
    MosumThresholdMode threshold_mode = MosumThresholdMode::asymptotic;
    double threshold_value = 0.05;
    MosumVarianceMode variance_mode = MosumVarianceMode::global_mad;
};

/// Gumbel-asymptotic critical value for max_tau |M_{tau,b}|/sigma at
/// significance alpha: (q_alpha + beta(n/b)) / a(n/b) with
/// a(x) = sqrt(2 log x), beta(x) = 2 log x + log log(x)/2 + log(3/2) - log(pi)/2,
/// q_alpha = -log(-log(1-alpha)/2). Requires n/b > e and alpha in (0, 1).
double mosum_threshold(std::size_t n, std::size_t b, double alpha);

/// The boundary-extended |M| profile, runs above the threshold, iterative
/// merging of runs separated by gaps shorter than eta*b, and one estimate
/// per run at the maximal statistic (ties to the smallest tau).
Segmentation mosum_detect(const TimeSeries& ts, const MosumConfig& cfg);

/// Bottom-up multi-bandwidth merge: bandwidths are processed in increasing
/// order and a candidate is discarded when it falls within its own bandwidth
/// of an already-accepted change.
Segmentation mosum_multiscale(const TimeSeries& ts,
                              const std::vector<std::size_t>& bandwidths,
                              const MosumConfig& cfg_template);

enum class IdVersion {
    restart_after_cp,        // V1: restart just after the detected change
    restart_after_interval,  // V2: restart from the end of the detection window
};

struct IdConfig {
    double zeta = 0.0;         // detection threshold, > 0
    std::size_t step = 3;      // window growth lambda_n
    IdVersion version = IdVersion::restart_after_cp;
};

/// Isolate-Detect: grow the window right from the current start by `step`
/// points at a time; on a CUSUM exceeding zeta record its argmax and
/// restart per the configured version.
Segmentation isolate_detect(const TimeSeries& ts, const IdConfig& cfg);

}  // namespace cpmean
