#include "cpmean/time_series.hpp"

#include <cmath>
#include <stdexcept>

namespace cpmean {

namespace {

// Sequential Kahan summation; returns prefix sums of f(values[i]).
template <typename F>
std::vector<double> kahan_prefix(const std::vector<double>& values, F f) {
    std::vector<double> out(values.size() + 1, 0.0);
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double y = f(values[i]) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        out[i + 1] = sum;
    }
    return out;
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, bool center)
    : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("TimeSeries: input is empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("TimeSeries: non-finite value at index " +
                                        std::to_string(i + 1));
        }
    }
    if (center) {
        const auto sums = kahan_prefix(values_, [](double x) { return x; });
        center_offset_ = sums.back() / static_cast<double>(values_.size());
        for (double& x : values_) x -= center_offset_;
    }
    prefix_sum_ = kahan_prefix(values_, [](double x) { return x; });
    prefix_sq_ = kahan_prefix(values_, [](double x) { return x * x; });
}

Segmentation::Segmentation(std::vector<std::size_t> cps, std::size_t n_)
    : change_points(std::move(cps)), n(n_) {
    for (std::size_t j = 0; j < change_points.size(); ++j) {
        const bool increasing = j == 0 || change_points[j - 1] < change_points[j];
        if (!increasing || change_points[j] < 1 || change_points[j] > n - 1) {
            throw std::invalid_argument(
                "Segmentation: change-points must be strictly increasing in [1, n-1]");
        }
    }
}

std::vector<std::size_t> Segmentation::boundaries() const {
    std::vector<std::size_t> b;
    b.reserve(change_points.size() + 2);
    b.push_back(0);
    b.insert(b.end(), change_points.begin(), change_points.end());
    b.push_back(n);
    return b;
}

std::vector<double> Segmentation::rescaled() const {
    std::vector<double> q(change_points.size());
    for (std::size_t j = 0; j < change_points.size(); ++j) {
        q[j] = static_cast<double>(change_points[j]) / static_cast<double>(n);
    }
    return q;
}

std::vector<double> PiecewiseFit::fitted() const {
    std::vector<double> f(segmentation.n);
    const auto b = segmentation.boundaries();
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
        for (std::size_t i = b[j]; i < b[j + 1]; ++i) f[i] = levels[j];
    }
    return f;
}

TimeSeries load_series(std::vector<double> values, bool center) {
    return TimeSeries(std::move(values), center);
}

double segment_cost(const TimeSeries& ts, std::size_t k, std::size_t l) {
    if (k >= l || l > ts.size()) {
        throw std::invalid_argument("segment_cost: requires 0 <= k < l <= n");
    }
    const double s = ts.sum(k, l);
    const double s2 = ts.sum_sq(k, l);
    const double cost = s2 - s * s / static_cast<double>(l - k);
    return cost > 0.0 ? cost : 0.0;
}

CusumValue cusum(const TimeSeries& ts, std::size_t s, std::size_t b, std::size_t e) {
    if (s < 1 || s > b || b >= e || e > ts.size()) {
        throw std::invalid_argument("cusum: requires 1 <= s <= b < e <= n");
    }
    const double left_len = static_cast<double>(b - s + 1);
    const double right_len = static_cast<double>(e - b);
    const double m = static_cast<double>(e - s + 1);
    const double mean_left = ts.sum(s - 1, b) / left_len;
    const double mean_right = ts.sum(b, e) / right_len;
    CusumValue v;
    v.s = s;
    v.b = b;
    v.e = e;
    v.signed_value = std::sqrt(left_len * right_len / m) * (mean_left - mean_right);
    v.abs_value = std::abs(v.signed_value);
    return v;
}

double mosum_stat(const TimeSeries& ts, std::size_t tau, std::size_t b) {
    const std::size_t n = ts.size();
    if (b < 1 || 2 * b > n) {
        throw std::invalid_argument("mosum_stat: requires 1 <= b <= n/2");
    }
    if (tau < 1 || tau >= n) {
        throw std::invalid_argument("mosum_stat: requires 1 <= tau <= n-1");
    }
    if (tau >= b && tau <= n - b) {
        return (ts.sum(tau - b, tau) - ts.sum(tau, tau + b)) /
               std::sqrt(2.0 * static_cast<double>(b));
    }
    if (tau < b) {
        const double t = static_cast<double>(tau);
        const double w = 2.0 * static_cast<double>(b);
        const double mean2b = ts.sum(0, 2 * b) / w;
        return std::sqrt(w / (t * (w - t))) * (t * mean2b - ts.sum(0, tau));
    }
    // tau > n-b: the left-edge form applied to the reversed series.
    const double t = static_cast<double>(n - tau);
    const double w = 2.0 * static_cast<double>(b);
    const double mean2b = ts.sum(n - 2 * b, n) / w;
    return std::sqrt(w / (t * (w - t))) * (t * mean2b - ts.sum(tau, n));
}

std::vector<double> basis_vector(std::size_t n, std::size_t j) {
    if (n < 1 || j > n - 1) {
        throw std::invalid_argument("basis_vector: requires 0 <= j <= n-1");
    }
    std::vector<double> e(n);
    const double nd = static_cast<double>(n);
    if (j == 0) {
        const double v = 1.0 / std::sqrt(nd);
        for (double& x : e) x = v;
        return e;
    }
    const double jd = static_cast<double>(j);
    const double pos = std::sqrt((nd - jd) / (nd * jd));
    const double neg = -std::sqrt(jd / (nd * (nd - jd)));
    for (std::size_t i = 0; i < n; ++i) e[i] = i < j ? pos : neg;
    return e;
}

PiecewiseFit fit_segmentation(const TimeSeries& ts, const Segmentation& seg) {
    if (seg.n != ts.size()) {
        throw std::invalid_argument("fit_segmentation: segmentation length mismatch");
    }
    PiecewiseFit fit;
    fit.segmentation = seg;
    const auto bounds = seg.boundaries();
    fit.levels.resize(bounds.size() - 1);
    fit.rss = 0.0;
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        fit.levels[j] = ts.mean(bounds[j], bounds[j + 1]);
        fit.rss += segment_cost(ts, bounds[j], bounds[j + 1]);
    }
    return fit;
}

}  // namespace cpmean
