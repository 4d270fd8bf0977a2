#include "cpmean/windowed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpmean/variance.hpp"

namespace cpmean {

double mosum_threshold(std::size_t n, std::size_t b, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("mosum_threshold: alpha in (0, 1)");
    }
    const double x = static_cast<double>(n) / static_cast<double>(b);
    if (!(std::log(x) > 1.0)) {
        throw std::invalid_argument("mosum_threshold: requires n/b > e");
    }
    const double a = std::sqrt(2.0 * std::log(x));
    const double beta = 2.0 * std::log(x) + 0.5 * std::log(std::log(x)) +
                        std::log(1.5) - 0.5 * std::log(M_PI);
    const double q = -std::log(-std::log(1.0 - alpha) / 2.0);
    return (q + beta) / a;
}

namespace {

// Local sigma for tau: MAD of differences within [tau-b+1, tau+b], clamped.
double local_sigma(const TimeSeries& ts, std::size_t tau, std::size_t b) {
    const std::size_t n = ts.size();
    const std::size_t lo = tau >= b ? tau - b + 1 : 1;
    const std::size_t hi = std::min(n, tau + b);
    std::vector<double> window(ts.values().begin() + (lo - 1),
                               ts.values().begin() + hi);
    return sigma_mad(TimeSeries(std::move(window))).sigma;
}

}  // namespace

Segmentation mosum_detect(const TimeSeries& ts, const MosumConfig& cfg) {
    const std::size_t n = ts.size();
    const std::size_t b = cfg.bandwidth;
    if (b < 1 || 2 * b > n) throw std::invalid_argument("mosum_detect: requires 1 <= b <= n/2");
    if (!(cfg.eta > 0.0 && cfg.eta < 0.5)) {
        throw std::invalid_argument("mosum_detect: eta in (0, 1/2)");
    }

    // Statistic profile and the threshold it is compared against.
    std::vector<double> stat(n - 1);
    double threshold = cfg.threshold_value;
    if (cfg.threshold_mode == MosumThresholdMode::absolute) {
        for (std::size_t tau = 1; tau < n; ++tau) {
            stat[tau - 1] = std::abs(mosum_stat(ts, tau, b));
        }
    } else {
        const double mult = cfg.threshold_mode == MosumThresholdMode::asymptotic
                                ? mosum_threshold(n, b, cfg.threshold_value)
                                : std::sqrt(4.0 * std::log(static_cast<double>(n))) +
                                      cfg.threshold_value;
        threshold = mult;
        const double global = sigma_mad(ts).sigma;
        for (std::size_t tau = 1; tau < n; ++tau) {
            const double sigma = cfg.variance_mode == MosumVarianceMode::local_window
                                     ? local_sigma(ts, tau, b)
                                     : global;
            const double m = std::abs(mosum_stat(ts, tau, b));
            stat[tau - 1] = sigma > 0.0 ? m / sigma
                                        : (m > 0.0 ? std::numeric_limits<double>::infinity()
                                                   : 0.0);
        }
    }

    // Maximal runs of exceedances.
    struct Run {
        std::size_t s, e;
    };
    std::vector<Run> runs;
    for (std::size_t tau = 1; tau < n; ++tau) {
        if (stat[tau - 1] > threshold) {
            if (!runs.empty() && runs.back().e == tau - 1) {
                runs.back().e = tau;
            } else {
                runs.push_back({tau, tau});
            }
        }
    }

    // Merge neighbours separated by gaps shorter than eta*b, left to right
    // until no such pair remains.
    const double max_gap = cfg.eta * static_cast<double>(b);
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t j = 0; j + 1 < runs.size(); ++j) {
            const double gap = static_cast<double>(runs[j + 1].s - runs[j].e - 1);
            if (gap < max_gap) {
                runs[j].e = runs[j + 1].e;
                runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                merged = true;
                break;
            }
        }
    }

    std::vector<std::size_t> cps;
    cps.reserve(runs.size());
    for (const auto& run : runs) {
        std::size_t best_tau = run.s;
        for (std::size_t tau = run.s + 1; tau <= run.e; ++tau) {
            if (stat[tau - 1] > stat[best_tau - 1]) best_tau = tau;
        }
        cps.push_back(best_tau);
    }
    return Segmentation(std::move(cps), n);
}

Segmentation mosum_multiscale(const TimeSeries& ts,
                              const std::vector<std::size_t>& bandwidths,
                              const MosumConfig& cfg_template) {
    if (bandwidths.empty()) {
        throw std::invalid_argument("mosum_multiscale: empty bandwidth list");
    }
    std::vector<std::size_t> sorted_b = bandwidths;
    std::sort(sorted_b.begin(), sorted_b.end());

    std::vector<std::size_t> accepted;
    for (const std::size_t b : sorted_b) {
        MosumConfig cfg = cfg_template;
        cfg.bandwidth = b;
        const Segmentation found = mosum_detect(ts, cfg);
        for (const std::size_t cand : found.change_points) {
            bool keep = true;
            for (const std::size_t acc : accepted) {
                const std::size_t dist = cand > acc ? cand - acc : acc - cand;
                if (dist < b) {
                    keep = false;
                    break;
                }
            }
            if (keep) accepted.push_back(cand);
        }
    }
    std::sort(accepted.begin(), accepted.end());
    return Segmentation(std::move(accepted), ts.size());
}

Segmentation isolate_detect(const TimeSeries& ts, const IdConfig& cfg) {
    if (!(cfg.zeta > 0.0)) {
        throw std::invalid_argument("isolate_detect: requires zeta > 0");
    }
    if (cfg.step < 1) throw std::invalid_argument("isolate_detect: requires step >= 1");
    const std::size_t n = ts.size();

    std::vector<std::size_t> cps;
    std::size_t start = 1;
    while (start < n) {
        bool detected = false;
        for (std::size_t k = 1;; ++k) {
            const std::size_t e = std::min(n, start - 1 + k * cfg.step);
            if (e < start + 1) continue;
            // Max CUSUM over the current window [start, e].
            std::size_t best_b = start;
            double best = -1.0;
            for (std::size_t b = start; b < e; ++b) {
                const double c = cusum(ts, start, b, e).abs_value;
                if (c > best) {
                    best = c;
                    best_b = b;
                }
            }
            if (best >= cfg.zeta) {
                cps.push_back(best_b);
                start = cfg.version == IdVersion::restart_after_cp ? best_b + 1 : e;
                detected = true;
                break;
            }
            if (e == n) break;
        }
        if (!detected) break;
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    return Segmentation(std::move(cps), n);
}

}  // namespace cpmean
