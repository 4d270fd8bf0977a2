#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cpmean {

/// Observed series X_1..X_n with cached prefix sums of values and squares.
///
/// Prefix sums are built once with compensated (Kahan) summation so that
/// segment costs over large-magnitude data (well-log values are ~1e5) stay
/// accurate. A TimeSeries is immutable after construction and safe to share
/// across threads.
class TimeSeries {
public:
    /// Builds the series. If `center` is set, the global mean is subtracted
    /// from every value and kept in `center_offset()`; change-point locations
    /// are unaffected, segment means shift by exactly the offset.
    ///
    /// Throws std::invalid_argument on empty input or non-finite values
    /// (the message names the offending 1-based index).
    explicit TimeSeries(std::vector<double> values, bool center = false);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double center_offset() const { return center_offset_; }

    /// Value X_i, 1-based.
    double at(std::size_t i) const { return values_[i - 1]; }

    /// Sum of X_{k+1..l}, 0 <= k <= l <= n.
    double sum(std::size_t k, std::size_t l) const {
        return prefix_sum_[l] - prefix_sum_[k];
    }
    /// Sum of X_i^2 over (k, l].
    double sum_sq(std::size_t k, std::size_t l) const {
        return prefix_sq_[l] - prefix_sq_[k];
    }
    /// Mean of X_{k+1..l}, requires k < l.
    double mean(std::size_t k, std::size_t l) const {
        return sum(k, l) / static_cast<double>(l - k);
    }

    const std::vector<double>& prefix_sum() const { return prefix_sum_; }
    const std::vector<double>& prefix_sq() const { return prefix_sq_; }

private:
    std::vector<double> values_;
    std::vector<double> prefix_sum_;  // length n+1, prefix_sum_[0] = 0
    std::vector<double> prefix_sq_;   // length n+1
    double center_offset_ = 0.0;
};

/// Ordered change-point locations tau_1 < ... < tau_N, each in [1, n-1].
/// tau means the last index of the left segment (f_tau != f_{tau+1}).
struct Segmentation {
    std::vector<std::size_t> change_points;
    std::size_t n = 0;

    Segmentation() = default;
    Segmentation(std::vector<std::size_t> cps, std::size_t n_);

    std::size_t n_changes() const { return change_points.size(); }
    std::size_t n_segments() const { return change_points.size() + 1; }

    /// Segment boundaries 0 = b_0 < b_1 < ... < b_{N+1} = n.
    std::vector<std::size_t> boundaries() const;

    /// Rescaled locations tau_j / n, each in (0, 1).
    std::vector<double> rescaled() const;

    bool operator==(const Segmentation& o) const {
        return n == o.n && change_points == o.change_points;
    }
};

/// Piecewise-constant least-squares fit implied by a segmentation.
struct PiecewiseFit {
    Segmentation segmentation;
    std::vector<double> levels;  // per-segment sample means, size N+1
    double rss = 0.0;

    /// Expands the fit to a length-n vector.
    std::vector<double> fitted() const;
};

/// Signed CUSUM value together with the triple it was computed on.
struct CusumValue {
    std::size_t s = 0, b = 0, e = 0;
    double signed_value = 0.0;
    double abs_value = 0.0;
};

/// Builds a TimeSeries; convenience wrapper mirroring the CLI entry point.
TimeSeries load_series(std::vector<double> values, bool center = false);

/// RSS of fitting X_{k+1..l} as one constant segment, O(1) from prefix sums.
/// Round-off can push the value a hair below zero; it is clamped to 0 so
/// downstream pruning sees nonnegative costs. Requires 0 <= k < l <= n.
double segment_cost(const TimeSeries& ts, std::size_t k, std::size_t l);

/// Signed CUSUM C*_{s,b,e} = sqrt((b-s+1)(e-b)/m) (mean X_{s:b} - mean X_{b+1:e}),
/// m = e-s+1. Requires 1 <= s <= b < e <= n.
CusumValue cusum(const TimeSeries& ts, std::size_t s, std::size_t b, std::size_t e);

/// Moving-sum statistic M_{tau,b} with CUSUM-type boundary extension:
///   interior (b <= tau <= n-b):  (2b)^{-1/2} (sum X_{tau-b+1..tau} - sum X_{tau+1..tau+b})
///   tau < b:                     sqrt(2b/(tau(2b-tau))) sum_{i<=tau} (mean X_{1:2b} - X_i)
///   tau > n-b:                   the same form mirrored about the right edge.
/// Requires 1 <= tau <= n-1 and 1 <= b <= n/2.
double mosum_stat(const TimeSeries& ts, std::size_t tau, std::size_t b);

/// Single-change basis vector e^j of length n: j = 0 gives the constant
/// 1/sqrt(n); j >= 1 has first j entries sqrt((n-j)/(nj)) and the rest
/// -sqrt(j/(n(n-j))). Sums to zero (j >= 1) and square-sums to one.
std::vector<double> basis_vector(std::size_t n, std::size_t j);

/// Least-squares fit of a given segmentation: per-segment means and total RSS.
PiecewiseFit fit_segmentation(const TimeSeries& ts, const Segmentation& seg);

}  // namespace cpmean
