#include "cpmean/variance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpmean {

namespace {
constexpr double kMadConstant = 1.483;
constexpr double kIqrConstant = 1.349;

std::vector<double> diffs(const TimeSeries& ts) {
    const auto& x = ts.values();
    std::vector<double> y(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) y[i] = x[i + 1] - x[i];
    return y;
}
}  // namespace

double median(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("median: empty input");
    const std::size_t n = x.size();
    const std::size_t mid = n / 2;
    std::nth_element(x.begin(), x.begin() + mid, x.end());
    double hi = x[mid];
    if (n % 2 == 1) return hi;
    std::nth_element(x.begin(), x.begin() + mid - 1, x.begin() + mid);
    return 0.5 * (x[mid - 1] + hi);
}

double quantile(std::vector<double> x, double p) {
    if (x.empty()) throw std::invalid_argument("quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0, 1]");
    std::sort(x.begin(), x.end());
    const double h = (static_cast<double>(x.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= x.size()) return x.back();
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

VarianceEstimate sigma_mad(const TimeSeries& ts) {
    if (ts.size() < 2) throw std::invalid_argument("sigma_mad: requires n >= 2");
    auto y = diffs(ts);
    const double med = median(y);
    for (double& v : y) v = std::abs(v - med);
    VarianceEstimate est;
    est.method = VarianceMethod::mad_diff;
    est.sigma = kMadConstant * median(std::move(y)) / std::sqrt(2.0);
    return est;
}

VarianceEstimate sigma_iqr(const TimeSeries& ts) {
    if (ts.size() < 5) throw std::invalid_argument("sigma_iqr: requires n >= 5");
    auto y = diffs(ts);
    for (double& v : y) v /= std::sqrt(2.0);
    std::sort(y.begin(), y.end());
    const double iqr = quantile(y, 0.75) - quantile(y, 0.25);
    VarianceEstimate est;
    est.method = VarianceMethod::iqr_diff;
    est.sigma = iqr / kIqrConstant;
    return est;
}

std::vector<double> moving_median(const std::vector<double>& x, std::size_t h) {
    if (h < 1) throw std::invalid_argument("moving_median: requires h >= 1");
    const std::size_t n = x.size();
    std::vector<double> est(n);
    std::vector<double> window;
    for (std::size_t t = 1; t <= n; ++t) {
        const std::size_t lo = t > h ? t - h : 1;
        const std::size_t hi = std::min(n, t + h);
        window.assign(x.begin() + (lo - 1), x.begin() + hi);
        est[t - 1] = median(std::move(window));
        window.clear();
    }
    return est;
}

std::vector<double> moving_median(const TimeSeries& ts, std::size_t h) {
    return moving_median(ts.values(), h);
}

VarianceEstimate sigma_from_residuals(const TimeSeries& ts, std::size_t h) {
    const auto est = moving_median(ts, h);
    const auto& x = ts.values();
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = x[i] - est[i];
        ss += r * r;
    }
    VarianceEstimate out;
    out.method = VarianceMethod::moving_median_residual;
    out.sigma = std::sqrt(ss / static_cast<double>(x.size()));
    return out;
}

std::vector<double> sample_acf(const std::vector<double>& x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag >= n) throw std::invalid_argument("sample_acf: requires max_lag < n");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (denom <= 0.0) throw std::invalid_argument("sample_acf: zero-variance input");
    std::vector<double> rho(max_lag + 1);
    for (std::size_t t = 0; t <= max_lag; ++t) {
        double num = 0.0;
        for (std::size_t i = 0; i + t < n; ++i) {
            num += (x[i] - mean) * (x[i + t] - mean);
        }
        rho[t] = num / denom;
    }
    return rho;
}

double long_run_factor(const std::vector<double>& residuals, std::size_t max_lag) {
    const auto rho = sample_acf(residuals, max_lag);
    double c = 1.0;
    for (std::size_t t = 1; t <= max_lag; ++t) c += 2.0 * rho[t];
    return std::max(c, 0.01);
}

}  // namespace cpmean
