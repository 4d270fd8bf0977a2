#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "cpmean/time_series.hpp"

namespace cpmean {

/// One solution-path entry: candidate b detected on interval [s, e] with the
/// given CUSUM magnitude.
struct PathEntry {
    std::size_t b = 0;
    std::size_t s = 0;
    std::size_t e = 0;
    double cusum = 0.0;  // |C*_{s,b,e}|
};

/// Nested change-point candidates ordered by detection strength
/// (nonincreasing CUSUM; ties by smaller b). The prefix of length N is the
/// model with N changes.
struct SolutionPath {
    std::vector<PathEntry> entries;
    std::size_t n = 0;

    /// Segmentation given by the first `count` entries (sorted by location).
    Segmentation model(std::size_t count) const;
    /// Maximal prefix whose CUSUMs are >= threshold.
    Segmentation thresholded(double threshold) const;
};

enum class GridKind { random, deterministic };

/// Sampling intervals for WBS. The deterministic kind places the smallest
/// equispaced grid with at least M intervals; the random kind draws exactly
/// M intervals uniformly with replacement (degenerate s = e pairs redrawn).
/// If M meets or exceeds the number of all intervals on [1, n], all of them
/// are used.
struct IntervalGrid {
    std::vector<std::pair<std::size_t, std::size_t>> intervals;  // s < e
    GridKind kind = GridKind::deterministic;
    std::size_t requested_m = 0;
    std::uint64_t seed = 0;
};

/// Plain binary segmentation. zeta = 0 produces the complete path of n-1
/// candidates; zeta > 0 stops each recursion branch once the maximal CUSUM
/// falls below zeta.
SolutionPath binary_segmentation(const TimeSeries& ts, double zeta = 0.0,
                                 std::size_t min_seg_len = 1);

IntervalGrid make_grid(std::size_t n, GridKind kind, std::size_t m = 10000,
                       std::uint64_t seed = 0);

/// Wild binary segmentation over a fixed interval grid: repeatedly take the
/// surviving interval/break pair with the largest CUSUM, then drop every
/// interval whose interior contains the accepted candidate.
SolutionPath wbs(const TimeSeries& ts, const IntervalGrid& grid, double zeta = 0.0);

/// WBS2: a fresh deterministic grid (up to m_per_stage intervals) is built
/// on each interval the recursion currently operates on. Always produces the
/// complete path.
SolutionPath wbs2(const TimeSeries& ts, std::size_t m_per_stage = 1000);

/// One detail coefficient of the bottom-up transform: the signed CUSUM of
/// the merge of regions [p, q] and [q+1, r], recorded at stage `stage`.
struct TguhDetail {
    std::size_t p = 0, q = 0, r = 0;
    std::size_t stage = 0;
    std::size_t index_in_stage = 0;
    double value = 0.0;
};

/// Tail-greedy unbalanced Haar decomposition: n-1 details plus the final
/// smooth coefficient. Conditional on the merge order this is a rotation of
/// the data, so energy is preserved and the transform inverts exactly.
struct TguhDecomposition {
    std::vector<TguhDetail> details;  // in merge order
    double smooth = 0.0;              // (X_1 + ... + X_n)/sqrt(n)
    std::size_t n = 0;
};

/// Bottom-up transform: each stage computes all adjacent-region scaled
/// differences and merges the ceil(rho * regions) smallest in magnitude,
/// skipping merges that reuse a region already merged within the stage.
TguhDecomposition tguh_transform(const TimeSeries& ts, double rho = 0.01);

/// Exact inverse of the transform. With `threshold` > 0, details below the
/// threshold in absolute value are zeroed first, giving the denoised fit.
std::vector<double> tguh_inverse(const TguhDecomposition& decomp,
                                 double threshold = 0.0);

/// Change-points read off the surviving details (|d| > threshold): their q
/// indices, deduplicated and sorted.
Segmentation tguh_detect(const TimeSeries& ts, double rho, double threshold);

}  // namespace cpmean
