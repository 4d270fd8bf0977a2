#include <cmath>
#include <vector>

#include "cpmean/rng.hpp"
#include "cpmean/simulate.hpp"
#include "cpmean/windowed.hpp"
#include "doctest.h"

using namespace cpmean;

TEST_CASE("mosum_threshold formula values") {
    // n = 2000, b = 100: q_0.05 = 3.6625, a(20) = 2.4477, beta(20) = 7.0226.
    const double mult = mosum_threshold(2000, 100, 0.05);
    CHECK(mult == doctest::Approx(4.365).epsilon(2e-3));
    CHECK(mosum_threshold(2000, 100, 0.2) < mult);  // monotone in alpha
    CHECK(mosum_threshold(2000, 100, 0.5) < mosum_threshold(2000, 100, 0.2));
    CHECK_THROWS_AS(mosum_threshold(2000, 1000, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(mosum_threshold(2000, 100, 0.0), std::invalid_argument);

    // Non-asymptotic alternative sqrt(4 log n) for n = 2000.
    CHECK(std::sqrt(4.0 * std::log(2000.0)) == doctest::Approx(5.513).epsilon(1e-3));
}

TEST_CASE("mosum_detect on a noiseless step with an absolute threshold") {
    std::vector<double> x(20, 0.0);
    for (std::size_t i = 10; i < 20; ++i) x[i] = 5.0;
    const TimeSeries ts(x);
    for (const double lambda : {0.5, 2.0, 7.0}) {
        MosumConfig cfg;
        cfg.bandwidth = 5;
        cfg.threshold_mode = MosumThresholdMode::absolute;
        cfg.threshold_value = lambda;
        const Segmentation found = mosum_detect(ts, cfg);
        REQUIRE(found.n_changes() == 1);
        CHECK(found.change_points[0] == 10);
    }
}

TEST_CASE("mosum size control under the asymptotic threshold") {
    int false_positives = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const auto x = add_noise(std::vector<double>(2000, 0.0),
                                 {NoiseKind::gaussian, 1.0, 0.0}, 40000 + r);
        MosumConfig cfg;
        cfg.bandwidth = 100;
        cfg.threshold_mode = MosumThresholdMode::asymptotic;
        cfg.threshold_value = 0.05;
        if (mosum_detect(TimeSeries(x), cfg).n_changes() > 0) ++false_positives;
    }
    CHECK(false_positives <= reps / 10);  // >= 90% clean
}

TEST_CASE("close changes merge under a wide bandwidth and separate under a narrow one") {
    // Small change at 200, two large close changes at 400 and 450.
    std::vector<double> x(600);
    for (std::size_t i = 0; i < 600; ++i) {
        x[i] = i < 200 ? 0.0 : i < 400 ? 1.0 : i < 450 ? 6.0 : 1.0;
    }
    const TimeSeries ts(x);
    MosumConfig cfg;
    cfg.threshold_mode = MosumThresholdMode::absolute;
    cfg.threshold_value = 5.0;

    cfg.bandwidth = 100;
    const Segmentation wide = mosum_detect(ts, cfg);
    int close_found_wide = 0;
    bool small_found_wide = false;
    for (const std::size_t cp : wide.change_points) {
        if (cp == 400 || cp == 450) ++close_found_wide;
        if (cp >= 190 && cp <= 210) small_found_wide = true;
    }
    CHECK(close_found_wide <= 1);  // misses at least one of the close pair
    CHECK(small_found_wide);

    cfg.bandwidth = 25;
    const Segmentation narrow = mosum_detect(ts, cfg);
    int close_found_narrow = 0;
    for (const std::size_t cp : narrow.change_points) {
        if (cp == 400 || cp == 450) ++close_found_narrow;
    }
    CHECK(close_found_narrow == 2);  // recovers both
}

TEST_CASE("mosum estimates are separated and N is monotone in the threshold") {
    const auto noisy = add_noise(
        gen_signal({SignalKind::teeth, 0, 40, 6, 0.0, 3.0, {}, {}}).values,
        {NoiseKind::gaussian, 0.7, 0.0}, 77);
    const TimeSeries ts(noisy);
    MosumConfig cfg;
    cfg.bandwidth = 20;
    cfg.threshold_mode = MosumThresholdMode::absolute;

    std::size_t prev_n = std::numeric_limits<std::size_t>::max();
    for (const double lambda : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        cfg.threshold_value = lambda;
        const Segmentation found = mosum_detect(ts, cfg);
        for (std::size_t j = 1; j < found.n_changes(); ++j) {
            CHECK(found.change_points[j] - found.change_points[j - 1] >= 1);
        }
        CHECK(found.n_changes() <= prev_n);
        prev_n = found.n_changes();
    }
}

TEST_CASE("mosum_multiscale merging rules") {
    std::vector<double> x(600);
    for (std::size_t i = 0; i < 600; ++i) {
        x[i] = i < 200 ? 0.0 : i < 400 ? 1.0 : i < 450 ? 6.0 : 1.0;
    }
    const TimeSeries ts(x);
    MosumConfig cfg;
    cfg.threshold_mode = MosumThresholdMode::absolute;
    cfg.threshold_value = 5.0;

    // Single bandwidth: identical to mosum_detect.
    cfg.bandwidth = 25;
    const Segmentation single = mosum_detect(ts, cfg);
    CHECK(mosum_multiscale(ts, {25}, cfg).change_points == single.change_points);

    // Narrow bandwidth recovers the close pair; the wide one contributes the
    // small change without overriding nearby accepted candidates.
    const Segmentation multi = mosum_multiscale(ts, {25, 100}, cfg);
    bool has_400 = false, has_450 = false, has_small = false;
    for (const std::size_t cp : multi.change_points) {
        if (cp == 400) has_400 = true;
        if (cp == 450) has_450 = true;
        if (cp >= 190 && cp <= 210) has_small = true;
    }
    CHECK(has_400);
    CHECK(has_450);
    CHECK(has_small);
    for (std::size_t j = 1; j < multi.n_changes(); ++j) {
        CHECK(multi.change_points[j] > multi.change_points[j - 1]);
    }
}

TEST_CASE("isolate_detect basics") {
    const TimeSeries c(std::vector<double>(50, 1.0));
    IdConfig cfg;
    cfg.zeta = 1.0;
    CHECK(isolate_detect(c, cfg).n_changes() == 0);

    cfg.zeta = 0.0;
    CHECK_THROWS_AS(isolate_detect(c, cfg), std::invalid_argument);
}

TEST_CASE("isolate_detect on a noiseless step, both versions") {
    std::vector<double> x(200, 0.0);
    for (std::size_t i = 50; i < 200; ++i) x[i] = 4.0;
    const TimeSeries ts(x);
    for (const IdVersion version :
         {IdVersion::restart_after_cp, IdVersion::restart_after_interval}) {
        IdConfig cfg;
        cfg.zeta = 2.0;
        cfg.step = 3;
        cfg.version = version;
        const Segmentation found = isolate_detect(ts, cfg);
        REQUIRE(found.n_changes() == 1);
        CHECK(found.change_points[0] == 50);
    }
}

TEST_CASE("isolate_detect V2 never re-scans left of a completed interval") {
    // Two well-separated changes; V2 must find both while walking right.
    std::vector<double> x(300, 0.0);
    for (std::size_t i = 100; i < 200; ++i) x[i] = 5.0;
    for (std::size_t i = 200; i < 300; ++i) x[i] = 0.5;
    const TimeSeries ts(add_noise(x, {NoiseKind::gaussian, 0.3, 0.0}, 5));
    IdConfig cfg;
    cfg.zeta = 3.0;
    cfg.version = IdVersion::restart_after_interval;
    const Segmentation found = isolate_detect(ts, cfg);
    REQUIRE(found.n_changes() >= 2);
    CHECK(found.change_points[0] >= 95);
    CHECK(found.change_points[0] <= 105);
}
