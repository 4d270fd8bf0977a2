#pragma once

#include <cstddef>
#include <vector>

#include "cpmean/time_series.hpp"

namespace cpmean {

/// One entry of a CROPS sweep: the segmentation that is optimal for every
/// penalty in [lambda_lo, lambda_hi].
struct CropsEntry {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    Segmentation segmentation;
    double unpenalized_cost = 0.0;
};

/// All optimal segmentations over a penalty interval, sorted by descending
/// number of changes; the intervals tile [lambda_min, lambda_max].
struct CropsResult {
    std::vector<CropsEntry> entries;
};

/// Exact least-squares segmentations with exactly m = 0..n_max changes
/// (Segment Neighbourhood dynamic programming, O(n_max n^2)).
///
/// Ties are broken toward the smallest last change-point, recursively, so
/// the output is deterministic. Requires (n_max+1)*min_seg_len <= n.
std::vector<PiecewiseFit> segment_neighbourhood(const TimeSeries& ts,
                                                std::size_t n_max,
                                                std::size_t min_seg_len = 1);

/// Minimizer of sum of segment RSS + lambda * (number of changes).
///
/// With `prune` set this is PELT: candidates whose conditional cost exceeds
/// the running minimum by more than lambda are dropped. With a minimum
/// segment length the removal of a failing candidate is delayed by
/// min_seg_len steps, which keeps the pruned solve exactly equal to the
/// unpruned one. Penalties are in RSS units; scale by 2 sigma^2 externally
/// for the likelihood form.
PiecewiseFit optimal_partitioning(const TimeSeries& ts, double lambda,
                                  std::size_t min_seg_len = 1, bool prune = true);

/// Full penalty sweep between lambda_min and lambda_max by interval
/// bisection: boundary penalties are computed exactly from the unpenalized
/// costs as (c_hi - c_lo) / (m_lo - m_hi).
CropsResult crops(const TimeSeries& ts, double lambda_min, double lambda_max,
                  std::size_t min_seg_len = 1);

/// (number of changes, RSS) rows for elbow inspection, N descending.
std::vector<std::pair<std::size_t, double>> rss_vs_n_table(const CropsResult& result);
std::vector<std::pair<std::size_t, double>> rss_vs_n_table(
    const std::vector<PiecewiseFit>& fits);

}  // namespace cpmean
