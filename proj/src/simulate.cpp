#include "cpmean/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "cpmean/rng.hpp"
#include "cpmean/variance.hpp"

namespace cpmean {

namespace {

// Canonical blocks parameters: breakpoints in rescaled time and jump sizes,
// amplitude scaled x10.
constexpr double kBlocksT[] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                               0.44, 0.65, 0.76, 0.78, 0.81};
constexpr double kBlocksJump[] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                                  2.1, 4.3, -3.1, 2.1, -4.2};
constexpr double kBlocksScale = 10.0;

GeneratedSignal from_levels(const std::vector<double>& levels,
                            const std::vector<std::size_t>& lengths) {
    if (levels.empty() || levels.size() != lengths.size()) {
        throw std::invalid_argument("gen_signal: levels/lengths size mismatch");
    }
    GeneratedSignal out;
    std::vector<std::size_t> cps;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        if (lengths[j] == 0) throw std::invalid_argument("gen_signal: zero-length segment");
        out.values.insert(out.values.end(), lengths[j], levels[j]);
        if (j + 1 < levels.size()) {
            if (levels[j] == levels[j + 1]) {
                throw std::invalid_argument("gen_signal: adjacent segments share a level");
            }
            cps.push_back(out.values.size());
        }
    }
    out.truth = Segmentation(std::move(cps), out.values.size());
    return out;
}

}  // namespace

GeneratedSignal gen_signal(const SignalSpec& spec) {
    switch (spec.kind) {
        case SignalKind::constant: {
            if (spec.n < 1) throw std::invalid_argument("gen_signal: n >= 1");
            GeneratedSignal out;
            out.values.assign(spec.n, spec.low);
            out.truth = Segmentation({}, spec.n);
            return out;
        }
        case SignalKind::mscale:
            return from_levels({0.0, 5.0, 4.0}, {150, 30, 120});
        case SignalKind::teeth: {
            if (spec.n_per_tooth < 1 || spec.n_teeth < 2) {
                throw std::invalid_argument("gen_signal: teeth needs >= 2 blocks");
            }
            if (spec.low == spec.high) {
                throw std::invalid_argument("gen_signal: teeth levels must differ");
            }
            std::vector<double> levels(spec.n_teeth);
            std::vector<std::size_t> lengths(spec.n_teeth, spec.n_per_tooth);
            for (std::size_t j = 0; j < spec.n_teeth; ++j) {
                levels[j] = j % 2 == 0 ? spec.low : spec.high;
            }
            return from_levels(levels, lengths);
        }
        case SignalKind::blocks: {
            const std::size_t n = spec.n;
            if (n < 100) throw std::invalid_argument("gen_signal: blocks needs n >= 100");
            GeneratedSignal out;
            out.values.resize(n);
            std::vector<std::size_t> cps;
            double level = 0.0;
            std::size_t prev = 0;
            for (std::size_t j = 0; j < 11; ++j) {
                const std::size_t tau = static_cast<std::size_t>(
                    std::floor(kBlocksT[j] * static_cast<double>(n)));
                for (std::size_t i = prev; i < tau; ++i) out.values[i] = level;
                cps.push_back(tau);
                level += kBlocksJump[j] * kBlocksScale;
                prev = tau;
            }
            for (std::size_t i = prev; i < n; ++i) out.values[i] = level;
            out.truth = Segmentation(std::move(cps), n);
            if (out.truth.n_changes() != 11) {
                throw std::invalid_argument("gen_signal: blocks breakpoints collide");
            }
            return out;
        }
        case SignalKind::custom:
            return from_levels(spec.levels, spec.lengths);
    }
    throw std::invalid_argument("gen_signal: unknown signal kind");
}

std::vector<double> add_noise(const std::vector<double>& signal,
                              const NoiseSpec& noise, std::uint64_t seed) {
    if (noise.sd < 0.0) throw std::invalid_argument("add_noise: sd >= 0");
    std::vector<double> x = signal;
    if (noise.sd == 0.0) return x;
    Rng rng(seed);
    switch (noise.kind) {
        case NoiseKind::gaussian:
            for (double& v : x) v += noise.sd * rng.gaussian();
            break;
        case NoiseKind::laplace:
            for (double& v : x) v += rng.laplace(noise.sd);
            break;
        case NoiseKind::ar1: {
            if (!(std::abs(noise.phi) < 1.0)) {
                throw std::invalid_argument("add_noise: ar1 requires |phi| < 1");
            }
            const double innov_sd = noise.sd * std::sqrt(1.0 - noise.phi * noise.phi);
            double e = noise.sd * rng.gaussian();  // stationary start
            x[0] += e;
            for (std::size_t i = 1; i < x.size(); ++i) {
                e = noise.phi * e + innov_sd * rng.gaussian();
                x[i] += e;
            }
            break;
        }
    }
    return x;
}

double hausdorff(const std::vector<std::size_t>& a,
                 const std::vector<std::size_t>& b, std::size_t n) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return static_cast<double>(n);
    auto directed = [](const std::vector<std::size_t>& from,
                       const std::vector<std::size_t>& to) {
        double worst = 0.0;
        for (const std::size_t p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const std::size_t q : to) {
                const double d = p > q ? static_cast<double>(p - q)
                                       : static_cast<double>(q - p);
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double max_location_error(const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("max_location_error: cardinality mismatch");
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] > b[j] ? static_cast<double>(a[j] - b[j])
                                     : static_cast<double>(b[j] - a[j]);
        worst = std::max(worst, d);
    }
    return worst;
}

double max_norm_partial_sum(const std::vector<double>& eps) {
    const std::size_t n = eps.size();
    if (n < 2) throw std::invalid_argument("max_norm_partial_sum: n >= 2");
    std::vector<double> s(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) s[i + 1] = s[i] + eps[i];
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            const double d = s[j] - s[i];
            worst = std::max(worst, d * d / static_cast<double>(j - i));
        }
    }
    return worst;
}

AccuracyReport run_scenario(const SimScenario& scenario, const MethodSpec& method,
                            std::size_t n_threads) {
    if (scenario.reps < 1) throw std::invalid_argument("run_scenario: reps >= 1");
    const GeneratedSignal signal = gen_signal(scenario.signal);

    AccuracyReport report;
    report.per_rep.resize(scenario.reps);
    std::vector<std::string> errors(scenario.reps);

    auto run_rep = [&](std::size_t r) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng sub = Rng::substream(scenario.seed, r);
        const std::uint64_t rep_seed = sub.next_u64();
        const std::vector<double> data = add_noise(signal.values, scenario.noise, rep_seed);
        MethodSpec spec = method;
        spec.seed = rep_seed;
        const TimeSeries ts(data);
        const RunResult run = run_method(ts, spec);

        RepRecord rec;
        rec.rep = r;
        rec.n_true = signal.truth.n_changes();
        rec.n_est = run.segmentation.n_changes();
        rec.hausdorff = hausdorff(signal.truth.change_points,
                                  run.segmentation.change_points, ts.size());
        if (rec.n_est == rec.n_true && rec.n_true > 0) {
            rec.max_location_error = max_location_error(
                signal.truth.change_points, run.segmentation.change_points);
        } else if (rec.n_est == rec.n_true) {
            rec.max_location_error = 0.0;
        }
        const auto fitted = run.fit.fitted();
        double mse = 0.0;
        for (std::size_t i = 0; i < fitted.size(); ++i) {
            const double d = fitted[i] + ts.center_offset() - signal.values[i];
            mse += d * d;
        }
        rec.fit_mse = mse / static_cast<double>(fitted.size());
        rec.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        report.per_rep[r] = rec;
    };

    if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
    n_threads = std::max<std::size_t>(1, std::min(n_threads, scenario.reps));
    if (n_threads == 1) {
        for (std::size_t r = 0; r < scenario.reps; ++r) {
            try {
                run_rep(r);
            } catch (const std::exception& e) {
                throw std::runtime_error("replication " + std::to_string(r) + ": " +
                                         e.what());
            }
        }
    } else {
        std::vector<std::thread> workers;
        std::atomic<std::size_t> next{0};
        for (std::size_t w = 0; w < n_threads; ++w) {
            workers.emplace_back([&]() {
                for (std::size_t r = next.fetch_add(1); r < scenario.reps;
                     r = next.fetch_add(1)) {
                    try {
                        run_rep(r);
                    } catch (const std::exception& e) {
                        errors[r] = e.what();
                    }
                }
            });
        }
        for (auto& w : workers) w.join();
        for (std::size_t r = 0; r < scenario.reps; ++r) {
            if (!errors[r].empty()) {
                throw std::runtime_error("replication " + std::to_string(r) + ": " +
                                         errors[r]);
            }
        }
    }

    // Order-independent aggregation over the indexed records.
    std::vector<double> loc_errors;
    for (const auto& rec : report.per_rep) {
        const int err = static_cast<int>(rec.n_est) - static_cast<int>(rec.n_true);
        report.n_error_histogram[err] += 1;
        report.mean_hausdorff += rec.hausdorff;
        report.mean_fit_mse += rec.fit_mse;
        report.total_runtime_ms += rec.runtime_ms;
        if (rec.max_location_error >= 0.0) loc_errors.push_back(rec.max_location_error);
    }
    const double reps = static_cast<double>(scenario.reps);
    report.mean_hausdorff /= reps;
    report.mean_fit_mse /= reps;
    if (!loc_errors.empty()) {
        report.median_max_location_error = median(std::move(loc_errors));
    }
    return report;
}

}  // namespace cpmean
