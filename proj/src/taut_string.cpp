#include "cpmean/taut_string.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpmean/rng.hpp"

namespace cpmean {

TvFit taut_string(const TimeSeries& ts, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("taut_string: negative gamma");
    const std::size_t n = ts.size();
    const auto& w = ts.prefix_sum();  // running sums, w[0] = 0
    const double half = gamma / 2.0;

    TvFit result;
    result.gamma = gamma;
    result.fit.resize(n);

    // Walk the tube from the last fixed point of the string. A straight ray
    // with slope s reaches index t iff base <= s <= cap, where cap/base are
    // the running extremes of the slopes to the upper/lower tube bounds.
    // When base exceeds cap the string is forced to bend at whichever bound
    // became binding first, and the walk restarts there.
    std::size_t anchor_t = 0;
    double anchor_v = 0.0;
    while (anchor_t < n) {
        double cap = std::numeric_limits<double>::infinity();
        double base = -std::numeric_limits<double>::infinity();
        std::size_t cap_idx = anchor_t, base_idx = anchor_t;
        std::size_t kink_t = n;
        double kink_v = w[n];
        for (std::size_t t = anchor_t + 1; t <= n; ++t) {
            const double hi = t == n ? w[n] : w[t] + half;
            const double lo = t == n ? w[n] : w[t] - half;
            const double dt = static_cast<double>(t - anchor_t);
            const double s_hi = (hi - anchor_v) / dt;
            const double s_lo = (lo - anchor_v) / dt;
            if (s_hi <= cap) {
                cap = s_hi;
                cap_idx = t;
            }
            if (s_lo >= base) {
                base = s_lo;
                base_idx = t;
            }
            if (base > cap) {
                if (cap_idx < base_idx) {
                    kink_t = cap_idx;
                    kink_v = w[cap_idx] + half;  // bend on the upper bound
                } else {
                    kink_t = base_idx;
                    kink_v = w[base_idx] - half;  // bend on the lower bound
                }
                break;
            }
        }
        const double slope =
            (kink_v - anchor_v) / static_cast<double>(kink_t - anchor_t);
        for (std::size_t i = anchor_t + 1; i <= kink_t; ++i) {
            result.fit[i - 1] = slope;
        }
        anchor_t = kink_t;
        anchor_v = kink_v;
    }

    for (std::size_t t = 1; t < n; ++t) {
        if (result.fit[t] != result.fit[t - 1]) result.knots.push_back(t);
    }
    return result;
}

TvCheckResult tv_optimality_check(const TimeSeries& ts, const TvFit& fit,
                                  double tol) {
    const std::size_t n = ts.size();
    if (fit.fit.size() != n) {
        throw std::invalid_argument("tv_optimality_check: fit length mismatch");
    }
    const double half = fit.gamma / 2.0;
    double max_violation = 0.0;
    double r = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        r += ts.at(t) - fit.fit[t - 1];
        if (t == n) {
            max_violation = std::max(max_violation, std::abs(r));
            break;
        }
        max_violation = std::max(max_violation, std::abs(r) - half);
        const double step = fit.fit[t] - fit.fit[t - 1];
        if (step != 0.0) {
            const double target = step > 0.0 ? -half : half;
            max_violation = std::max(max_violation, std::abs(r - target));
        }
    }
    return {max_violation <= tol, max_violation};
}

StaircaseReport staircase_demo(const std::vector<double>& signal, double gamma,
                               double noise_sd, std::size_t reps,
                               std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("staircase_demo: reps >= 1");
    StaircaseReport report;
    report.gamma = gamma;
    report.noise_sd = noise_sd;
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        std::vector<double> x = signal;
        if (noise_sd > 0.0) {
            Rng rng = Rng::substream(seed, r);
            for (double& v : x) v += noise_sd * rng.gaussian();
        }
        const TvFit fit = taut_string(TimeSeries(std::move(x)), gamma);
        report.knots_per_rep.push_back(fit.knots.size());
        total += static_cast<double>(fit.knots.size());
        if (noise_sd == 0.0) break;  // identical replications
    }
    report.mean_knots = total / static_cast<double>(report.knots_per_rep.size());
    return report;
}

}  // namespace cpmean
