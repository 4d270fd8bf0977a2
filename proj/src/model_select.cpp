#include "cpmean/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "cpmean/rng.hpp"
#include "cpmean/variance.hpp"

namespace cpmean {

namespace {

double rss_floored(const PiecewiseFit& fit) {
    // sum(X^2) recovered from the fit: rss + sum_j len_j * level_j^2.
    const auto bounds = fit.segmentation.boundaries();
    double sum_sq = fit.rss;
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
        sum_sq += static_cast<double>(bounds[j + 1] - bounds[j]) * fit.levels[j] *
                  fit.levels[j];
    }
    return std::max({fit.rss, 1e-12 * sum_sq, 1e-300});
}

}  // namespace

double sic_penalty(std::size_t n_changes, std::size_t n) {
    return static_cast<double>(n_changes) * std::log(static_cast<double>(n));
}

double mdl_penalty(std::size_t n_changes, const std::vector<std::size_t>& cps,
                   std::size_t n) {
    const double nd = static_cast<double>(n);
    double seg_term = 0.0;
    std::size_t prev = 0;
    for (std::size_t j = 0; j <= n_changes; ++j) {
        const std::size_t next = j < n_changes ? cps[j] : n;
        seg_term += std::log(static_cast<double>(next - prev));
        prev = next;
    }
    return std::log(static_cast<double>(n_changes) + 1.0) +
           static_cast<double>(n_changes) * std::log(nd) + 0.5 * seg_term;
}

double mbic_penalty(std::size_t n_changes, const std::vector<std::size_t>& cps,
                    std::size_t n) {
    const double nd = static_cast<double>(n);
    double loc_term = 0.0;
    double prev = 0.0;
    for (std::size_t j = 0; j <= n_changes; ++j) {
        const double next = j < n_changes ? static_cast<double>(cps[j]) / nd : 1.0;
        loc_term += std::log(next - prev);
        prev = next;
    }
    return 0.5 * (3.0 * static_cast<double>(n_changes) * std::log(nd) + loc_term);
}

double ic_value(const PiecewiseFit& fit, const PenaltySpec& spec, std::size_t n) {
    const std::size_t m = fit.segmentation.n_changes();
    const auto& cps = fit.segmentation.change_points;
    const double nd = static_cast<double>(n);
    const double loglik = nd / 2.0 * std::log(rss_floored(fit) / nd);

    switch (spec.kind) {
        case IcKind::sic:
            return loglik + sic_penalty(m, n);
        case IcKind::aic:
            return loglik + 2.0 * static_cast<double>(m);
        case IcKind::ic_p: {
            if (!spec.p_of_n) throw std::invalid_argument("ic_value: ic_p needs p(n)");
            return loglik + static_cast<double>(m) * spec.p_of_n(n);
        }
        case IcKind::mbic:
            return loglik + mbic_penalty(m, cps, n);
        case IcKind::mdl:
            return loglik + mdl_penalty(m, cps, n);
        case IcKind::lebarbier: {
            if (!spec.has_sigma) throw std::invalid_argument("ic_value: lebarbier needs sigma");
            const double md = static_cast<double>(m);
            const double pen = (md + 1.0) / nd * spec.sigma * spec.sigma *
                               (spec.lebarbier_c1 * std::log(nd / (md + 1.0)) +
                                spec.lebarbier_c2);
            return fit.rss / nd + pen;
        }
        case IcKind::potts: {
            double gamma = spec.potts_gamma;
            if (gamma < 0.0) {
                if (!spec.has_sigma) throw std::invalid_argument("ic_value: potts needs sigma");
                gamma = 2.5 * spec.sigma * spec.sigma * std::log(nd) / nd;
            }
            return fit.rss / nd + gamma * static_cast<double>(m);
        }
        case IcKind::manual:
            return fit.rss + spec.lambda * static_cast<double>(m);
    }
    throw std::invalid_argument("ic_value: unknown criterion");
}

Segmentation select_by_ic(const TimeSeries& ts, const SolutionPath& path,
                          const PenaltySpec& spec, std::size_t n_max) {
    const std::size_t top = std::min(n_max, path.entries.size());
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_m = 0;
    for (std::size_t m = 0; m <= top; ++m) {
        const PiecewiseFit fit = fit_segmentation(ts, path.model(m));
        const double value = ic_value(fit, spec, ts.size());
        if (value < best) {
            best = value;
            best_m = m;
        }
    }
    return path.model(best_m);
}

const PiecewiseFit& select_by_ic(const std::vector<PiecewiseFit>& fits,
                                 const PenaltySpec& spec, std::size_t n,
                                 std::size_t n_max) {
    if (fits.empty()) throw std::invalid_argument("select_by_ic: no fits");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i].segmentation.n_changes() > n_max) continue;
        const double value = ic_value(fits[i], spec, n);
        if (value < best ||
            (value == best && fits[i].segmentation.n_changes() <
                                  fits[best_i].segmentation.n_changes())) {
            best = value;
            best_i = i;
        }
    }
    return fits[best_i];
}

Segmentation select_by_threshold(const SolutionPath& path, double sigma,
                                 double constant) {
    if (!(sigma > 0.0)) throw std::invalid_argument("select_by_threshold: sigma > 0");
    const double threshold =
        constant * sigma * std::sqrt(2.0 * std::log(static_cast<double>(path.n)));
    return path.thresholded(threshold);
}

Segmentation select_by_sdll(const SolutionPath& path, const SdllConfig& cfg,
                            std::size_t n) {
    if (!(cfg.c1 > 0.0 && cfg.c2 > 0.0)) {
        throw std::invalid_argument("select_by_sdll: c1, c2 > 0");
    }
    const double root_log_n = std::sqrt(std::log(static_cast<double>(n)));
    const double lambda1 = cfg.c1 * root_log_n;
    const double low_floor = cfg.c2 * root_log_n;

    if (path.entries.empty() || path.entries.front().cusum < lambda1) {
        return Segmentation({}, n);
    }

    // Drops between consecutive logged sorted CUSUMs, restricted to entries
    // above the operating floor.
    struct Drop {
        double size;
        std::size_t i;  // drop between entries i and i+1 (1-based model size i)
    };
    std::vector<Drop> drops;
    for (std::size_t i = 0; i + 1 < path.entries.size(); ++i) {
        const double next = path.entries[i + 1].cusum;
        if (next < low_floor) break;  // entries are sorted nonincreasing
        drops.push_back({std::log(path.entries[i].cusum) - std::log(next), i + 1});
    }
    std::stable_sort(drops.begin(), drops.end(), [](const Drop& a, const Drop& b) {
        if (a.size != b.size) return a.size > b.size;
        return a.i < b.i;
    });
    for (const Drop& d : drops) {
        if (path.entries[d.i].cusum <= lambda1) {
            return path.model(d.i);
        }
    }

    // No drop lands at low levels: keep the lambda1-exceeding prefix.
    std::size_t count = 0;
    while (count < path.entries.size() && path.entries[count].cusum >= lambda1) {
        ++count;
    }
    return path.model(count);
}

std::vector<SdllCalibrationRow> calibrate_sdll_c1(
    const std::vector<std::size_t>& n_grid, double alpha, std::size_t reps,
    std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("calibrate_sdll_c1: alpha in (0, 1)");
    }
    if (reps < 100) throw std::invalid_argument("calibrate_sdll_c1: reps >= 100");
    std::vector<SdllCalibrationRow> rows;
    for (const std::size_t n : n_grid) {
        std::vector<double> stats(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng = Rng::substream(seed ^ (0x5d11ULL + n), r);
            std::vector<double> x(n);
            for (double& v : x) v = rng.gaussian();
            const SolutionPath path = wbs2(TimeSeries(std::move(x)));
            const double top = path.entries.empty() ? 0.0 : path.entries.front().cusum;
            stats[r] = top / std::sqrt(std::log(static_cast<double>(n)));
        }
        rows.push_back({n, alpha, quantile(std::move(stats), 1.0 - alpha)});
    }
    return rows;
}

void save_sdll_table(const std::string& path,
                     const std::vector<SdllCalibrationRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_sdll_table: cannot open " + path);
    out << "# cpmean sdll-c1 table v1\n";
    out << "# n alpha c1\n";
    out.precision(10);
    for (const auto& row : rows) {
        out << row.n << " " << row.alpha << " " << row.c1 << "\n";
    }
}

std::vector<SdllCalibrationRow> load_sdll_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_sdll_table: cannot open " + path);
    std::vector<SdllCalibrationRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        SdllCalibrationRow row;
        if (std::sscanf(line.c_str(), "%zu %lf %lf", &row.n, &row.alpha, &row.c1) == 3) {
            rows.push_back(row);
        }
    }
    if (rows.empty()) throw std::invalid_argument("load_sdll_table: no rows in " + path);
    return rows;
}

double sdll_c1_lookup(const std::vector<SdllCalibrationRow>& rows, std::size_t n,
                      double alpha) {
    const auto& table = rows.empty() ? builtin_sdll_table() : rows;
    // Nearest tabulated alpha, then linear interpolation in log n.
    double best_alpha = table.front().alpha;
    for (const auto& row : table) {
        if (std::abs(row.alpha - alpha) < std::abs(best_alpha - alpha)) {
            best_alpha = row.alpha;
        }
    }
    std::vector<const SdllCalibrationRow*> slice;
    for (const auto& row : table) {
        if (row.alpha == best_alpha) slice.push_back(&row);
    }
    std::sort(slice.begin(), slice.end(),
              [](const auto* a, const auto* b) { return a->n < b->n; });
    const double ln = std::log(static_cast<double>(n));
    if (n <= slice.front()->n) return slice.front()->c1;
    if (n >= slice.back()->n) return slice.back()->c1;
    for (std::size_t i = 0; i + 1 < slice.size(); ++i) {
        if (n <= slice[i + 1]->n) {
            const double l0 = std::log(static_cast<double>(slice[i]->n));
            const double l1 = std::log(static_cast<double>(slice[i + 1]->n));
            const double w = (ln - l0) / (l1 - l0);
            return (1.0 - w) * slice[i]->c1 + w * slice[i + 1]->c1;
        }
    }
    return slice.back()->c1;
}

const std::vector<SdllCalibrationRow>& builtin_sdll_table() {
    // Generated by calibrate_sdll_c1 with reps = 400, seed = 20240917.
    static const std::vector<SdllCalibrationRow> table = {
        {100, 0.05, 1.811665}, {200, 0.05, 1.814136}, {500, 0.05, 1.778819},
        {1000, 0.05, 1.750632}, {2000, 0.05, 1.735584}, {5000, 0.05, 1.697279},
        {100, 0.10, 1.714484}, {200, 0.10, 1.707202}, {500, 0.10, 1.686331},
        {1000, 0.10, 1.671746}, {2000, 0.10, 1.664647}, {5000, 0.10, 1.629573},
    };
    return table;
}

}  // namespace cpmean
