#pragma once

#include <cstddef>
#include <vector>

#include "cpmean/time_series.hpp"

namespace cpmean {

enum class VarianceMethod { mad_diff, iqr_diff, moving_median_residual };

struct VarianceEstimate {
    double sigma = 0.0;  // >= 0; 0 only for degenerate (constant) data
    VarianceMethod method = VarianceMethod::mad_diff;
    double long_run_factor = 1.0;
};

/// Median with the midpoint-average convention for even lengths.
double median(std::vector<double> x);

/// Quantile by linear interpolation between order statistics
/// (h = (n-1)p, interpolate between floor(h) and floor(h)+1).
double quantile(std::vector<double> x, double p);

/// MAD estimate of sigma from first differences:
/// sigma = 1.483 * median(|Y - median(Y)|) / sqrt(2), Y_i = X_{i+1} - X_i.
/// Requires n >= 2.
VarianceEstimate sigma_mad(const TimeSeries& ts);

/// IQR estimate of sigma: IQR(2^{-1/2} diff(X)) / 1.349. Requires n >= 5.
VarianceEstimate sigma_iqr(const TimeSeries& ts);

/// Moving median with truncated windows: est[t] = median(X[max(1,t-h)..min(n,t+h)]).
std::vector<double> moving_median(const TimeSeries& ts, std::size_t h);
std::vector<double> moving_median(const std::vector<double>& x, std::size_t h);

/// sigma = sqrt(mean((X - moving_median(X, h))^2)). The median filter overfits
/// a little, so this runs slightly below the truth on i.i.d. noise.
VarianceEstimate sigma_from_residuals(const TimeSeries& ts, std::size_t h);

/// Sample autocorrelations rho_0..rho_max_lag. Requires positive variance
/// and max_lag < n.
std::vector<double> sample_acf(const std::vector<double>& x, std::size_t max_lag);

/// Long-run variance inflation c = max(1 + 2 sum_{t=1..max_lag} rho_t, 0.01).
/// The default lag window is 8, matching the well-log analysis.
double long_run_factor(const std::vector<double>& residuals, std::size_t max_lag = 8);

}  // namespace cpmean
