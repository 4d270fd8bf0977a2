#include <cmath>
#include <vector>

#include "cpmean/rng.hpp"
#include "cpmean/time_series.hpp"
#include "doctest.h"

using namespace cpmean;

TEST_CASE("load_series builds prefix sums") {
    const TimeSeries ts({1.0, 2.0, 3.0});
    CHECK(ts.prefix_sum() == std::vector<double>{0.0, 1.0, 3.0, 6.0});
    CHECK(ts.center_offset() == 0.0);
}

TEST_CASE("centering subtracts the global mean and stores the offset") {
    const TimeSeries ts({5.0, 5.0}, true);
    CHECK(ts.values() == std::vector<double>{0.0, 0.0});
    CHECK(ts.center_offset() == 5.0);
}

TEST_CASE("load_series rejects bad input") {
    CHECK_THROWS_AS(TimeSeries({}), std::invalid_argument);
    CHECK_THROWS_WITH_AS(TimeSeries({1.0, std::nan(""), 2.0}),
                         doctest::Contains("index 2"), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries({std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}

TEST_CASE("segment mean and cost") {
    const TimeSeries ts({1.0, 3.0});
    CHECK(ts.mean(0, 2) == 2.0);
    CHECK(segment_cost(ts, 0, 2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(segment_cost(ts, 0, 1) == 0.0);  // single point
    CHECK(segment_cost(ts, 1, 2) == 0.0);
    CHECK_THROWS_AS(segment_cost(ts, 1, 1), std::invalid_argument);

    const TimeSeries ts2({0.0, 0.0, 3.0, 3.0});
    CHECK(segment_cost(ts2, 0, 4) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("segment_cost matches the naive two-pass RSS on large-scale data") {
    Rng rng(42);
    std::vector<double> x(400);
    for (double& v : x) v = 1e6 * rng.uniform();
    const TimeSeries ts(x);
    Rng pick(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = pick.next_u64() % 399;
        const std::size_t l = k + 1 + pick.next_u64() % (400 - k - 1);
        double mean = 0.0;
        for (std::size_t i = k; i < l; ++i) mean += x[i];
        mean /= static_cast<double>(l - k);
        double rss = 0.0;
        for (std::size_t i = k; i < l; ++i) rss += (x[i] - mean) * (x[i] - mean);
        CHECK(segment_cost(ts, k, l) ==
              doctest::Approx(rss).epsilon(1e-8));
    }
}

TEST_CASE("cusum hand values") {
    const TimeSeries constant({2.0, 2.0, 2.0, 2.0});
    CHECK(cusum(constant, 1, 2, 4).signed_value == doctest::Approx(0.0));

    const TimeSeries step({0.0, 0.0, 2.0, 2.0});
    CHECK(cusum(step, 1, 2, 4).signed_value == doctest::Approx(-2.0).epsilon(1e-12));

    const TimeSeries two({1.0, 0.0});
    CHECK(cusum(two, 1, 1, 2).signed_value ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(cusum(two, 1, 2, 2), std::invalid_argument);
}

TEST_CASE("cusum shift invariance and scale equivariance") {
    Rng rng(3);
    std::vector<double> x(60);
    for (double& v : x) v = rng.gaussian();
    std::vector<double> shifted = x, scaled = x;
    for (double& v : shifted) v += 17.5;
    for (double& v : scaled) v *= -2.5;
    const TimeSeries a(x), b(shifted), c(scaled);
    for (std::size_t s = 1; s <= 50; s += 7) {
        for (std::size_t e = s + 2; e <= 60; e += 5) {
            const std::size_t mid = (s + e) / 2;
            CHECK(cusum(a, s, mid, e).abs_value ==
                  doctest::Approx(cusum(b, s, mid, e).abs_value).epsilon(1e-7));
            CHECK(cusum(c, s, mid, e).signed_value ==
                  doctest::Approx(-2.5 * cusum(a, s, mid, e).signed_value)
                      .epsilon(1e-10));
        }
    }
}

TEST_CASE("mosum_stat hand values and boundary form") {
    std::vector<double> constant(12, 3.0);
    const TimeSeries c(constant);
    for (std::size_t tau = 1; tau < 12; ++tau) {
        CHECK(mosum_stat(c, tau, 3) == doctest::Approx(0.0));
    }

    const TimeSeries step({0.0, 0.0, 5.0, 5.0});
    CHECK(mosum_stat(step, 2, 2) == doctest::Approx(-5.0).epsilon(1e-12));

    const TimeSeries zeros(std::vector<double>(6, 0.0));
    CHECK(mosum_stat(zeros, 1, 2) == doctest::Approx(0.0));
    CHECK_THROWS_AS(mosum_stat(zeros, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(mosum_stat(zeros, 6, 2), std::invalid_argument);
}

TEST_CASE("interior mosum equals sqrt(b/2) times the mean difference") {
    Rng rng(11);
    std::vector<double> x(40);
    for (double& v : x) v = rng.gaussian();
    const TimeSeries ts(x);
    const std::size_t b = 5;
    for (std::size_t tau = b; tau <= 40 - b; ++tau) {
        const double mean_left = ts.mean(tau - b, tau);
        const double mean_right = ts.mean(tau, tau + b);
        const double expected =
            std::sqrt(static_cast<double>(b) / 2.0) * (mean_left - mean_right);
        CHECK(mosum_stat(ts, tau, b) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("basis vectors") {
    const auto e1 = basis_vector(2, 1);
    CHECK(e1[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(e1[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));

    const auto e0 = basis_vector(7, 0);
    for (const double v : e0) CHECK(v == doctest::Approx(1.0 / std::sqrt(7.0)));

    for (std::size_t j = 0; j < 9; ++j) {
        const auto e = basis_vector(9, j);
        double norm = 0.0, sum = 0.0;
        for (const double v : e) {
            norm += v * v;
            sum += v;
        }
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        if (j > 0) CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(basis_vector(5, 5), std::invalid_argument);
}

TEST_CASE("adjacent basis vectors are nearly collinear in the bulk") {
    for (const std::size_t n : {100UL, 400UL, 2000UL}) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            const std::size_t j =
                static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
            const auto a = basis_vector(n, j);
            const auto b = basis_vector(n, j + 1);
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
            CHECK(dot <= 1.0 + 1e-12);
            CHECK(dot >= 1.0 - 2.0 / static_cast<double>(n));
        }
    }
}

TEST_CASE("fit_segmentation computes per-segment means and total RSS") {
    const TimeSeries ts({0.0, 0.0, 0.0, 5.0, 5.0, 5.0});
    const PiecewiseFit fit = fit_segmentation(ts, Segmentation({3}, 6));
    CHECK(fit.levels == std::vector<double>{0.0, 5.0});
    CHECK(fit.rss == 0.0);
    CHECK(fit.fitted() == ts.values());
}

TEST_CASE("segmentation validates its change-points") {
    CHECK_THROWS_AS(Segmentation({0}, 6), std::invalid_argument);
    CHECK_THROWS_AS(Segmentation({6}, 6), std::invalid_argument);
    CHECK_THROWS_AS(Segmentation({3, 3}, 6), std::invalid_argument);
    const Segmentation ok({2, 4}, 6);
    CHECK(ok.rescaled() == std::vector<double>{2.0 / 6.0, 4.0 / 6.0});
}
