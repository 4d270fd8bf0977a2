#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cpmean/time_series.hpp"
#include "cpmean/windowed.hpp"

namespace cpmean {

enum class Method {
    pelt,
    segneigh,
    bs,
    wbs,
    wbs2,
    tguh,
    mosum,
    mosum_multi,
    idetect,
    tautstring,
};

enum class Selection {
    auto_default,  // resolved per method
    none,
    sic,
    aic,
    mbic,
    mdl,
    lebarbier,
    potts,
    thresh,
    sdll,
    manual,
    fixed_n,
};

enum class SigmaMode { mad, iqr, residual, explicit_value };

/// One detection request: a method, a model-selection rule where the method
/// takes one, and the tuning knobs. Parameters at their sentinel defaults
/// (< 0 or 0) are resolved from n and the sigma estimate.
struct MethodSpec {
    Method method = Method::pelt;
    Selection selection = Selection::auto_default;

    SigmaMode sigma_mode = SigmaMode::mad;
    double sigma_value = 0.0;     // explicit_value
    std::size_t residual_h = 50;  // residual mode window

    double penalty = -1.0;      // pelt manual lambda; default 2 sigma^2 log n
    std::size_t fixed_n = 0;    // fixed_n selection
    std::size_t min_seg_len = 1;
    std::size_t max_cpts = 25;  // IC search bound

    std::size_t intervals = 10000;  // wbs grid size
    bool random_grid = false;
    std::size_t wbs2_per_stage = 1000;
    double thresh_const = 1.15;
    double rho = 0.01;  // tguh

    std::size_t bandwidth = 0;             // mosum (required)
    std::vector<std::size_t> bandwidths;   // mosum_multi; default {25,50,100,200}
    double eta = 0.4;
    MosumThresholdMode mosum_mode = MosumThresholdMode::asymptotic;
    double mosum_value = 0.05;

    double id_zeta = -1.0;  // idetect threshold; default 1.15 sigma sqrt(2 log n)
    std::size_t id_step = 3;
    IdVersion id_version = IdVersion::restart_after_cp;

    double gamma = -1.0;  // tautstring; default 2 sigma^2 log n

    double alpha = 0.1;  // sdll significance level
    std::uint64_t seed = 0;
};

struct RunResult {
    Segmentation segmentation;
    PiecewiseFit fit;       // least-squares fit of the returned segmentation
    double sigma_used = 0.0;
    std::string method_label;
};

/// Throws std::invalid_argument on incompatible method/selection pairs or
/// missing required parameters.
void validate_method_spec(const MethodSpec& spec, std::size_t n);

/// Resolves sigma per the spec's sigma_mode.
double resolve_sigma(const TimeSeries& ts, const MethodSpec& spec);

RunResult run_method(const TimeSeries& ts, const MethodSpec& spec);

Method parse_method(const std::string& name);
Selection parse_selection(const std::string& name);
SigmaMode parse_sigma_mode(const std::string& name);
std::string method_name(Method m);
std::string selection_name(Selection s);

}  // namespace cpmean
