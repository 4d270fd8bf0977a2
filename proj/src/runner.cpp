#include "cpmean/runner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpmean/dp.hpp"
#include "cpmean/hierarchical.hpp"
#include "cpmean/model_select.hpp"
#include "cpmean/taut_string.hpp"
#include "cpmean/variance.hpp"

namespace cpmean {

namespace {

bool is_path_method(Method m) {
    return m == Method::bs || m == Method::wbs || m == Method::wbs2 ||
           m == Method::tguh;
}

Selection default_selection(Method m) {
    switch (m) {
        case Method::pelt:
            return Selection::manual;
        case Method::segneigh:
            return Selection::sic;
        case Method::bs:
        case Method::wbs:
            return Selection::sic;
        case Method::wbs2:
            return Selection::sdll;
        case Method::tguh:
            return Selection::thresh;
        default:
            return Selection::none;
    }
}

double universal_threshold(double sigma, std::size_t n, double constant) {
    return constant * sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

SolutionPath tguh_path(const TimeSeries& ts, double rho) {
    const TguhDecomposition decomp = tguh_transform(ts, rho);
    SolutionPath path;
    path.n = ts.size();
    path.entries.reserve(decomp.details.size());
    for (const auto& d : decomp.details) {
        path.entries.push_back({d.q, d.p, d.r, std::abs(d.value)});
    }
    std::stable_sort(path.entries.begin(), path.entries.end(),
                     [](const PathEntry& a, const PathEntry& b) {
                         if (a.cusum != b.cusum) return a.cusum > b.cusum;
                         return a.b < b.b;
                     });
    // Duplicate q indices can appear across stages; keep the strongest.
    std::vector<PathEntry> dedup;
    for (const auto& e : path.entries) {
        const bool seen = std::any_of(dedup.begin(), dedup.end(),
                                      [&](const PathEntry& d) { return d.b == e.b; });
        if (!seen) dedup.push_back(e);
    }
    path.entries = std::move(dedup);
    return path;
}

}  // namespace

void validate_method_spec(const MethodSpec& spec, std::size_t n) {
    const Selection sel = spec.selection == Selection::auto_default
                              ? default_selection(spec.method)
                              : spec.selection;
    switch (spec.method) {
        case Method::pelt:
            if (sel != Selection::manual && sel != Selection::potts &&
                sel != Selection::none) {
                throw std::invalid_argument(
                    "pelt minimizes a linear penalized cost; use manual/potts "
                    "penalties or segneigh for other criteria");
            }
            break;
        case Method::segneigh:
            if (sel == Selection::manual || sel == Selection::thresh ||
                sel == Selection::sdll || sel == Selection::none) {
                throw std::invalid_argument(
                    "segneigh takes an information criterion or fixed_n");
            }
            break;
        case Method::bs:
        case Method::wbs:
        case Method::wbs2:
        case Method::tguh:
            if (sel == Selection::manual || sel == Selection::none ||
                sel == Selection::potts) {
                throw std::invalid_argument(
                    "path methods take an IC, thresh, sdll or fixed_n selection");
            }
            break;
        case Method::mosum:
            if (sel != Selection::none) {
                throw std::invalid_argument("mosum does not take a selection rule");
            }
            if (spec.bandwidth < 1 || 2 * spec.bandwidth > n) {
                throw std::invalid_argument("mosum: requires 1 <= bandwidth <= n/2");
            }
            break;
        case Method::mosum_multi:
            if (sel != Selection::none) {
                throw std::invalid_argument("mosum-multi does not take a selection rule");
            }
            break;
        case Method::idetect:
            if (sel != Selection::none) {
                throw std::invalid_argument("idetect does not take a selection rule");
            }
            break;
        case Method::tautstring:
            if (sel != Selection::none && sel != Selection::manual) {
                throw std::invalid_argument("tautstring takes only the gamma penalty");
            }
            break;
    }
    if (spec.fixed_n > 0 && spec.fixed_n > n - 1) {
        throw std::invalid_argument("fixed_n exceeds n - 1");
    }
}

double resolve_sigma(const TimeSeries& ts, const MethodSpec& spec) {
    switch (spec.sigma_mode) {
        case SigmaMode::mad:
            return sigma_mad(ts).sigma;
        case SigmaMode::iqr:
            return sigma_iqr(ts).sigma;
        case SigmaMode::residual:
            return sigma_from_residuals(ts, spec.residual_h).sigma;
        case SigmaMode::explicit_value:
            if (!(spec.sigma_value > 0.0)) {
                throw std::invalid_argument("explicit sigma must be > 0");
            }
            return spec.sigma_value;
    }
    throw std::invalid_argument("unknown sigma mode");
}

namespace {

Segmentation select_on_path(const TimeSeries& ts, const SolutionPath& path,
                            const MethodSpec& spec, Selection sel, double sigma) {
    switch (sel) {
        case Selection::sic:
        case Selection::aic:
        case Selection::mbic:
        case Selection::mdl:
        case Selection::lebarbier:
        case Selection::potts: {
            PenaltySpec pen;
            pen.kind = sel == Selection::sic         ? IcKind::sic
                       : sel == Selection::aic       ? IcKind::aic
                       : sel == Selection::mbic      ? IcKind::mbic
                       : sel == Selection::mdl       ? IcKind::mdl
                       : sel == Selection::lebarbier ? IcKind::lebarbier
                                                     : IcKind::potts;
            pen.sigma = sigma;
            pen.has_sigma = true;
            return select_by_ic(ts, path, pen, spec.max_cpts);
        }
        case Selection::thresh:
            return select_by_threshold(path, sigma, spec.thresh_const);
        case Selection::sdll: {
            SdllConfig cfg;
            cfg.c1 = sdll_c1_lookup({}, ts.size(), spec.alpha) * sigma;
            cfg.c2 = 0.3 * std::sqrt(2.0) * sigma;
            return select_by_sdll(path, cfg, ts.size());
        }
        case Selection::fixed_n:
            return path.model(spec.fixed_n);
        default:
            throw std::invalid_argument("unsupported selection for a path method");
    }
}

}  // namespace

RunResult run_method(const TimeSeries& ts, const MethodSpec& spec) {
    validate_method_spec(spec, ts.size());
    const Selection sel = spec.selection == Selection::auto_default
                              ? default_selection(spec.method)
                              : spec.selection;

    RunResult result;
    result.method_label = method_name(spec.method);
    const double sigma = resolve_sigma(ts, spec);
    result.sigma_used = sigma;
    const double log_n = std::log(static_cast<double>(ts.size()));

    switch (spec.method) {
        case Method::pelt: {
            const double lambda =
                spec.penalty >= 0.0 ? spec.penalty : 2.0 * sigma * sigma * log_n;
            result.segmentation =
                optimal_partitioning(ts, lambda, spec.min_seg_len, true).segmentation;
            break;
        }
        case Method::segneigh: {
            const std::size_t n_max =
                sel == Selection::fixed_n
                    ? spec.fixed_n
                    : std::min(spec.max_cpts,
                               ts.size() / spec.min_seg_len == 0
                                   ? std::size_t{0}
                                   : ts.size() / spec.min_seg_len - 1);
            const auto fits = segment_neighbourhood(ts, n_max, spec.min_seg_len);
            if (sel == Selection::fixed_n) {
                result.segmentation = fits.back().segmentation;
            } else {
                PenaltySpec pen;
                pen.kind = sel == Selection::sic     ? IcKind::sic
                           : sel == Selection::aic   ? IcKind::aic
                           : sel == Selection::mbic  ? IcKind::mbic
                           : sel == Selection::mdl   ? IcKind::mdl
                           : sel == Selection::lebarbier ? IcKind::lebarbier
                                                         : IcKind::potts;
                pen.sigma = sigma;
                pen.has_sigma = true;
                result.segmentation =
                    select_by_ic(fits, pen, ts.size(), spec.max_cpts).segmentation;
            }
            break;
        }
        case Method::bs: {
            const SolutionPath path = binary_segmentation(ts, 0.0, spec.min_seg_len);
            result.segmentation = select_on_path(ts, path, spec, sel, sigma);
            break;
        }
        case Method::wbs: {
            const IntervalGrid grid =
                make_grid(ts.size(),
                          spec.random_grid ? GridKind::random : GridKind::deterministic,
                          spec.intervals, spec.seed);
            const SolutionPath path = wbs(ts, grid, 0.0);
            result.segmentation = select_on_path(ts, path, spec, sel, sigma);
            break;
        }
        case Method::wbs2: {
            const SolutionPath path = wbs2(ts, spec.wbs2_per_stage);
            result.segmentation = select_on_path(ts, path, spec, sel, sigma);
            break;
        }
        case Method::tguh: {
            if (sel == Selection::thresh) {
                result.segmentation = tguh_detect(
                    ts, spec.rho, universal_threshold(sigma, ts.size(), 1.0));
            } else {
                result.segmentation =
                    select_on_path(ts, tguh_path(ts, spec.rho), spec, sel, sigma);
            }
            break;
        }
        case Method::mosum: {
            MosumConfig cfg;
            cfg.bandwidth = spec.bandwidth;
            cfg.eta = spec.eta;
            cfg.threshold_mode = spec.mosum_mode;
            cfg.threshold_value = spec.mosum_value;
            result.segmentation = mosum_detect(ts, cfg);
            break;
        }
        case Method::mosum_multi: {
            MosumConfig cfg;
            cfg.eta = spec.eta;
            cfg.threshold_mode = spec.mosum_mode;
            cfg.threshold_value = spec.mosum_value;
            std::vector<std::size_t> bands = spec.bandwidths;
            if (bands.empty()) bands = {25, 50, 100, 200};
            std::erase_if(bands, [&](std::size_t b) { return 2 * b > ts.size(); });
            if (bands.empty()) {
                throw std::invalid_argument("mosum-multi: no feasible bandwidths");
            }
            result.segmentation = mosum_multiscale(ts, bands, cfg);
            break;
        }
        case Method::idetect: {
            IdConfig cfg;
            cfg.zeta = spec.id_zeta > 0.0
                           ? spec.id_zeta
                           : universal_threshold(sigma, ts.size(), spec.thresh_const);
            cfg.step = spec.id_step;
            cfg.version = spec.id_version;
            result.segmentation = isolate_detect(ts, cfg);
            break;
        }
        case Method::tautstring: {
            const double gamma =
                spec.gamma >= 0.0 ? spec.gamma : 2.0 * sigma * sigma * log_n;
            const TvFit tv = taut_string(ts, gamma);
            result.segmentation = Segmentation(tv.knots, ts.size());
            break;
        }
    }
    result.fit = fit_segmentation(ts, result.segmentation);
    return result;
}

Method parse_method(const std::string& name) {
    if (name == "pelt") return Method::pelt;
    if (name == "segneigh") return Method::segneigh;
    if (name == "bs") return Method::bs;
    if (name == "wbs") return Method::wbs;
    if (name == "wbs2") return Method::wbs2;
    if (name == "tguh") return Method::tguh;
    if (name == "mosum") return Method::mosum;
    if (name == "mosum-multi") return Method::mosum_multi;
    if (name == "idetect") return Method::idetect;
    if (name == "tautstring") return Method::tautstring;
    throw std::invalid_argument("unknown method: " + name);
}

Selection parse_selection(const std::string& name) {
    if (name == "auto") return Selection::auto_default;
    if (name == "none") return Selection::none;
    if (name == "sic") return Selection::sic;
    if (name == "aic") return Selection::aic;
    if (name == "mbic") return Selection::mbic;
    if (name == "mdl") return Selection::mdl;
    if (name == "lebarbier") return Selection::lebarbier;
    if (name == "potts") return Selection::potts;
    if (name == "thresh") return Selection::thresh;
    if (name == "sdll") return Selection::sdll;
    if (name == "manual") return Selection::manual;
    if (name == "fixed-n") return Selection::fixed_n;
    throw std::invalid_argument("unknown selection: " + name);
}

SigmaMode parse_sigma_mode(const std::string& name) {
    if (name == "mad") return SigmaMode::mad;
    if (name == "iqr") return SigmaMode::iqr;
    if (name == "residual") return SigmaMode::residual;
    if (name == "explicit") return SigmaMode::explicit_value;
    throw std::invalid_argument("unknown sigma mode: " + name);
}

std::string method_name(Method m) {
    switch (m) {
        case Method::pelt: return "pelt";
        case Method::segneigh: return "segneigh";
        case Method::bs: return "bs";
        case Method::wbs: return "wbs";
        case Method::wbs2: return "wbs2";
        case Method::tguh: return "tguh";
        case Method::mosum: return "mosum";
        case Method::mosum_multi: return "mosum-multi";
        case Method::idetect: return "idetect";
        case Method::tautstring: return "tautstring";
    }
    return "?";
}

std::string selection_name(Selection s) {
    switch (s) {
        case Selection::auto_default: return "auto";
        case Selection::none: return "none";
        case Selection::sic: return "sic";
        case Selection::aic: return "aic";
        case Selection::mbic: return "mbic";
        case Selection::mdl: return "mdl";
        case Selection::lebarbier: return "lebarbier";
        case Selection::potts: return "potts";
        case Selection::thresh: return "thresh";
        case Selection::sdll: return "sdll";
        case Selection::manual: return "manual";
        case Selection::fixed_n: return "fixed-n";
    }
    return "?";
}

}  // namespace cpmean
