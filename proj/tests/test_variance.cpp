#include <cmath>
#include <vector>

#include "cpmean/rng.hpp"
#include "cpmean/simulate.hpp"
#include "cpmean/variance.hpp"
#include "doctest.h"

using namespace cpmean;

TEST_CASE("sigma_mad hand values") {
    CHECK(sigma_mad(TimeSeries(std::vector<double>(10, 4.0))).sigma == 0.0);

    const TimeSeries alternating({0.0, 1.0, 0.0, 1.0, 0.0});
    CHECK(sigma_mad(alternating).sigma ==
          doctest::Approx(1.483 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(sigma_mad(TimeSeries({1.0})), std::invalid_argument);
}

TEST_CASE("sigma_mad and sigma_iqr recover a unit Gaussian sd") {
    Rng rng(123);
    std::vector<double> x(100000);
    for (double& v : x) v = rng.gaussian();
    const TimeSeries ts(x);
    const double mad = sigma_mad(ts).sigma;
    const double iqr = sigma_iqr(ts).sigma;
    CHECK(mad > 0.98);
    CHECK(mad < 1.02);
    CHECK(iqr > 0.97);
    CHECK(iqr < 1.03);
}

TEST_CASE("scale equivariance and translation invariance of sigma estimates") {
    Rng rng(5);
    std::vector<double> x(600);
    for (double& v : x) v = rng.gaussian();
    std::vector<double> y = x;
    for (double& v : y) v = 3.0 * v + 100.0;
    const TimeSeries tx(x), ty(y);
    CHECK(sigma_mad(ty).sigma == doctest::Approx(3.0 * sigma_mad(tx).sigma).epsilon(1e-9));
    CHECK(sigma_iqr(ty).sigma == doctest::Approx(3.0 * sigma_iqr(tx).sigma).epsilon(1e-9));
    CHECK(sigma_from_residuals(ty, 25).sigma ==
          doctest::Approx(3.0 * sigma_from_residuals(tx, 25).sigma).epsilon(1e-9));
}

TEST_CASE("sigma_mad on Laplace noise underestimates (squared value near 0.72)") {
    double mean_sq = 0.0;
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
        const auto x = add_noise(std::vector<double>(300, 0.0),
                                 {NoiseKind::laplace, 1.0, 0.0}, 1000 + r);
        const double s = sigma_mad(TimeSeries(x)).sigma;
        mean_sq += s * s;
    }
    mean_sq /= reps;
    CHECK(mean_sq > 0.55);
    CHECK(mean_sq < 0.75);
}

TEST_CASE("moving_median") {
    const TimeSeries c(std::vector<double>(9, 2.5));
    CHECK(moving_median(c, 2) == std::vector<double>(9, 2.5));

    const TimeSeries spike({0.0, 0.0, 0.0, 100.0, 0.0, 0.0, 0.0});
    CHECK(moving_median(spike, 2) == std::vector<double>(7, 0.0));

    const TimeSeries single({4.0});
    CHECK(moving_median(single, 3) == std::vector<double>{4.0});
    CHECK_THROWS_AS(moving_median(single, 0), std::invalid_argument);
}

TEST_CASE("sigma_from_residuals tracks a unit Gaussian sd") {
    Rng rng(77);
    std::vector<double> x(10000);
    for (double& v : x) v = rng.gaussian();
    const TimeSeries ts(x);
    const double s50 = sigma_from_residuals(ts, 50).sigma;
    CHECK(s50 > 0.95);
    CHECK(s50 < 1.05);
    // Never more than 10% below the truth for either window.
    CHECK(sigma_from_residuals(ts, 25).sigma > 0.9);
    CHECK(s50 > 0.9);
    CHECK(sigma_from_residuals(TimeSeries(std::vector<double>(50, 1.0)), 5).sigma == 0.0);
}

TEST_CASE("sample_acf") {
    std::vector<double> alternating(1000);
    for (std::size_t i = 0; i < alternating.size(); ++i) {
        alternating[i] = i % 2 == 0 ? 1.0 : -1.0;
    }
    const auto rho = sample_acf(alternating, 1);
    CHECK(rho[0] == doctest::Approx(1.0));
    CHECK(rho[1] >= -1.0);
    CHECK(rho[1] <= -0.99);

    Rng rng(9);
    std::vector<double> noise(100000);
    for (double& v : noise) v = rng.gaussian();
    CHECK(std::abs(sample_acf(noise, 1)[1]) < 0.02);

    CHECK_THROWS_AS(sample_acf(std::vector<double>(10, 1.0), 2), std::invalid_argument);
}

TEST_CASE("long_run_factor") {
    Rng rng(13);
    std::vector<double> noise(100000);
    for (double& v : noise) v = rng.gaussian();
    const double c_iid = long_run_factor(noise, 8);
    CHECK(c_iid > 0.9);
    CHECK(c_iid < 1.1);

    const auto ar = add_noise(std::vector<double>(100000, 0.0),
                              {NoiseKind::ar1, 1.0, 0.5}, 2024);
    const double c_ar = long_run_factor(ar, 20);
    CHECK(c_ar > 2.7);
    CHECK(c_ar < 3.3);
}
