#include <cmath>
#include <set>
#include <vector>

#include "cpmean/rng.hpp"
#include "cpmean/simulate.hpp"
#include "doctest.h"

using namespace cpmean;

TEST_CASE("gen_signal: mscale, teeth, blocks") {
    const auto mscale = gen_signal({SignalKind::mscale, 0, 0, 0, 0.0, 0.0, {}, {}});
    CHECK(mscale.values.size() == 300);
    CHECK(mscale.truth.change_points == std::vector<std::size_t>{150, 180});

    const auto teeth = gen_signal({SignalKind::teeth, 0, 10, 20, 0.0, 1.0, {}, {}});
    CHECK(teeth.values.size() == 200);
    REQUIRE(teeth.truth.n_changes() == 19);
    for (std::size_t j = 0; j < 19; ++j) {
        CHECK(teeth.truth.change_points[j] == 10 * (j + 1));
    }

    for (const std::size_t n : {500UL, 1000UL, 2000UL}) {
        const auto blocks = gen_signal({SignalKind::blocks, n, 0, 0, 0.0, 0.0, {}, {}});
        CHECK(blocks.values.size() == n);
        CHECK(blocks.truth.n_changes() == 11);
        // Rescaled change locations are fixed across lengths.
        CHECK(blocks.truth.change_points[0] == n / 10);
    }
}

TEST_CASE("add_noise determinism and moments") {
    const std::vector<double> zero(1000000, 0.0);
    const auto a = add_noise(zero, {NoiseKind::laplace, 1.0, 0.0}, 31);
    const auto b = add_noise(zero, {NoiseKind::laplace, 1.0, 0.0}, 31);
    CHECK(a == b);

    double var = 0.0;
    for (const double v : a) var += v * v;
    var /= static_cast<double>(a.size());
    CHECK(var > 0.99);
    CHECK(var < 1.01);

    const auto untouched = add_noise({1.0, 2.0}, {NoiseKind::gaussian, 0.0, 0.0}, 5);
    CHECK(untouched == std::vector<double>{1.0, 2.0});
}

TEST_CASE("ar1 noise has the requested marginal sd and autocorrelation") {
    const auto x = add_noise(std::vector<double>(200000, 0.0),
                             {NoiseKind::ar1, 2.0, 0.6}, 7);
    double var = 0.0;
    for (const double v : x) var += v * v;
    var /= static_cast<double>(x.size());
    CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.02));
    double lag1 = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) lag1 += x[i] * x[i + 1];
    lag1 /= static_cast<double>(x.size()) * var;
    CHECK(lag1 == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("hausdorff distance") {
    CHECK(hausdorff({}, {}, 100) == 0.0);
    CHECK(hausdorff({50}, {}, 100) == 100.0);
    CHECK(hausdorff({}, {50}, 100) == 100.0);
    CHECK(hausdorff({10, 20}, {10, 20}, 100) == 0.0);
    CHECK(hausdorff({50}, {60}, 100) == 10.0);
    CHECK(hausdorff({50, 100}, {50}, 200) == 50.0);
}

TEST_CASE("hausdorff is a metric on nonempty sets") {
    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        auto draw = [&]() {
            std::set<std::size_t> s;
            const std::size_t count = 1 + rng.next_u64() % 4;
            while (s.size() < count) s.insert(1 + rng.next_u64() % 99);
            return std::vector<std::size_t>(s.begin(), s.end());
        };
        const auto a = draw(), b = draw(), c = draw();
        CHECK(hausdorff(a, b, 100) == hausdorff(b, a, 100));
        CHECK(hausdorff(a, c, 100) <=
              hausdorff(a, b, 100) + hausdorff(b, c, 100) + 1e-12);
        CHECK((hausdorff(a, b, 100) == 0.0) == (a == b));
    }
}

TEST_CASE("max_location_error") {
    CHECK(max_location_error({10, 20}, {10, 20}) == 0.0);
    CHECK(max_location_error({10, 20}, {12, 19}) == 2.0);
    CHECK_THROWS_AS(max_location_error({10}, {10, 20}), std::invalid_argument);
}

TEST_CASE("max_norm_partial_sum") {
    CHECK(max_norm_partial_sum(std::vector<double>(10, 0.0)) == 0.0);
    CHECK(max_norm_partial_sum({1.0, 1.0}) == doctest::Approx(2.0));

    // Gaussian noise: bounded by 2 * 1.3 * log n in most runs.
    int within = 0;
    const int reps = 50;
    for (int r = 0; r < reps; ++r) {
        const auto eps = add_noise(std::vector<double>(2000, 0.0),
                                   {NoiseKind::gaussian, 1.0, 0.0}, 600 + r);
        if (max_norm_partial_sum(eps) <= 2.0 * 1.3 * std::log(2000.0)) ++within;
    }
    CHECK(within >= 45);
}

TEST_CASE("run_scenario is deterministic and thread-count independent") {
    SimScenario scenario;
    scenario.signal = {SignalKind::custom, 0, 0, 0, 0.0, 0.0, {0.0, 4.0}, {50, 50}};
    scenario.noise = {NoiseKind::gaussian, 1.0, 0.0};
    scenario.seed = 99;
    scenario.reps = 16;

    MethodSpec pelt;
    pelt.method = Method::pelt;

    const AccuracyReport serial = run_scenario(scenario, pelt, 1);
    const AccuracyReport parallel = run_scenario(scenario, pelt, 4);
    REQUIRE(serial.per_rep.size() == parallel.per_rep.size());
    for (std::size_t r = 0; r < serial.per_rep.size(); ++r) {
        CHECK(serial.per_rep[r].n_est == parallel.per_rep[r].n_est);
        CHECK(serial.per_rep[r].hausdorff == parallel.per_rep[r].hausdorff);
        CHECK(serial.per_rep[r].fit_mse == parallel.per_rep[r].fit_mse);
    }
    CHECK(serial.n_error_histogram == parallel.n_error_histogram);

    std::size_t total = 0;
    for (const auto& [err, count] : serial.n_error_histogram) total += count;
    CHECK(total == scenario.reps);
}

TEST_CASE("run_scenario detects an easy step in most replications") {
    SimScenario scenario;
    scenario.signal = {SignalKind::custom, 0, 0, 0, 0.0, 0.0, {0.0, 6.0}, {60, 60}};
    scenario.noise = {NoiseKind::gaussian, 1.0, 0.0};
    scenario.seed = 5;
    scenario.reps = 40;
    MethodSpec pelt;
    pelt.method = Method::pelt;
    const AccuracyReport report = run_scenario(scenario, pelt);
    const auto exact = report.n_error_histogram.find(0);
    REQUIRE(exact != report.n_error_histogram.end());
    CHECK(exact->second >= 35);
    CHECK(report.median_max_location_error <= 2.0);
}
