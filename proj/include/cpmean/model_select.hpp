#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cpmean/hierarchical.hpp"
#include "cpmean/time_series.hpp"

namespace cpmean {

enum class IcKind { sic, aic, ic_p, mbic, mdl, lebarbier, potts, manual };

/// A model-selection rule: criterion plus its constants. `sigma` is required
/// by the kinds that penalize RSS directly (lebarbier, potts with the
/// default gamma); the likelihood-form criteria estimate the variance
/// implicitly.
struct PenaltySpec {
    IcKind kind = IcKind::sic;
    std::function<double(std::size_t)> p_of_n;  // ic_p only; should be >= log n
    double sigma = 0.0;
    bool has_sigma = false;
    double lebarbier_c1 = 2.0;
    double lebarbier_c2 = 5.0;
    double potts_gamma = -1.0;  // < 0 means the default 2.5 sigma^2 log(n)/n
    double lambda = 0.0;        // manual: rss + lambda * N
};

/// Criterion value of a fitted model. Perfect fits are handled with an RSS
/// floor of 1e-12 * sum(X^2) so the log stays defined and the smallest
/// perfectly-fitting model wins.
double ic_value(const PiecewiseFit& fit, const PenaltySpec& spec, std::size_t n);

/// Penalty terms on their own, for algebra checks and reuse.
double sic_penalty(std::size_t n_changes, std::size_t n);
double mdl_penalty(std::size_t n_changes, const std::vector<std::size_t>& cps,
                   std::size_t n);
double mbic_penalty(std::size_t n_changes, const std::vector<std::size_t>& cps,
                    std::size_t n);

/// Argmin of the criterion over the nested models M_0..M_{min(n_max, len)}
/// of a solution path; ties prefer fewer changes.
Segmentation select_by_ic(const TimeSeries& ts, const SolutionPath& path,
                          const PenaltySpec& spec, std::size_t n_max = 25);
/// Same over an explicit list of fits (e.g. Segment Neighbourhood output).
const PiecewiseFit& select_by_ic(const std::vector<PiecewiseFit>& fits,
                                 const PenaltySpec& spec, std::size_t n,
                                 std::size_t n_max = 25);

/// Maximal path prefix with detection CUSUMs >= constant * sigma * sqrt(2 log n).
Segmentation select_by_threshold(const SolutionPath& path, double sigma,
                                 double constant = 1.15);

/// Steepest-drop-to-low-levels constants, in data units: multiply the
/// calibrated table value by the estimated sigma.
struct SdllConfig {
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Two-stage SDLL model choice on a CUSUM-sorted path: gate on the top CUSUM
/// against c1*sqrt(log n); then scan the drops in the logged sorted CUSUMs,
/// largest first, and accept the first whose following CUSUM is below the
/// same low level. Falls back to the threshold-prefix rule when no drop
/// qualifies.
Segmentation select_by_sdll(const SolutionPath& path, const SdllConfig& cfg,
                            std::size_t n);

struct SdllCalibrationRow {
    std::size_t n = 0;
    double alpha = 0.0;
    double c1 = 0.0;
};

/// Monte Carlo calibration of the SDLL gate constant: for each n, the
/// empirical (1-alpha) quantile over `reps` standard-Gaussian replications
/// of (top WBS2-path CUSUM) / sqrt(log n).
std::vector<SdllCalibrationRow> calibrate_sdll_c1(
    const std::vector<std::size_t>& n_grid, double alpha, std::size_t reps,
    std::uint64_t seed);

/// Versioned plain-text table, rows "n alpha c1".
void save_sdll_table(const std::string& path,
                     const std::vector<SdllCalibrationRow>& rows);
std::vector<SdllCalibrationRow> load_sdll_table(const std::string& path);

/// c1 for (n, alpha) from a table: nearest alpha, interpolated linearly in
/// log n and clamped at the grid ends. Uses the built-in table when `rows`
/// is empty.
double sdll_c1_lookup(const std::vector<SdllCalibrationRow>& rows, std::size_t n,
                      double alpha);

/// Built-in calibration table shipped with the library (regenerate with the
/// `calibrate-sdll` CLI subcommand).
const std::vector<SdllCalibrationRow>& builtin_sdll_table();

}  // namespace cpmean
