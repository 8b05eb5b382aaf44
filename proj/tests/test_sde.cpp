#include "srgbm/sde.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "srgbm/errors.hpp"
#include "test_util.hpp"

using namespace srgbm;

namespace {
const ModelParams kFig1{0.05, 0.02, 0.16, 1.0};
}

TEST_CASE("euler: driftless noiseless path is constant") {
    RngStream stream(1, 0);
    const auto traj = simulate_euler({0.0, 0.0, 0.0, 1.0}, {0.01, 500}, stream);
    for (const double x : traj.positions) CHECK(x == 1.0);
    CHECK(traj.reset_steps.empty());
}

TEST_CASE("euler: deterministic drift compounds to the closed-form product") {
    // mu=0.05, sigma2=0, r=0: final = (1 + mu dt)^n.
    RngStream stream(1, 0);
    const auto traj = simulate_euler({0.05, 0.0, 0.0, 1.0}, {0.001, 10000}, stream);
    CHECK(traj.final_position() == doctest::Approx(1.64870066249998306).epsilon(1e-12));
    CHECK(traj.final_position() == doctest::Approx(std::exp(0.5)).epsilon(1e-3));
}

TEST_CASE("euler: trajectory invariants on a resetting path") {
    RngStream stream(11, 5);
    const auto traj = simulate_euler(kFig1, {0.01, 10000}, stream);
    REQUIRE(traj.positions.size() == 10001);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.positions.front() == 1.0);
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        CHECK(traj.times[k] > traj.times[k - 1]);
    }
    for (const double x : traj.positions) CHECK(x > 0.0);
    CHECK(!traj.reset_steps.empty());  // ~16 resets expected over t=100
    for (const std::int64_t step : traj.reset_steps) {
        CHECK(traj.positions[static_cast<std::size_t>(step)] == kFig1.x0);
    }
}

TEST_CASE("euler: strided recording subsamples the same path") {
    RngStream full_stream(3, 9);
    RngStream strided_stream(3, 9);
    const SimGrid grid{0.01, 1003};
    const auto full = simulate_euler(kFig1, grid, full_stream);
    const auto strided = simulate_euler(kFig1, grid, strided_stream, 100);
    REQUIRE(strided.positions.size() == 12);  // steps 0,100,...,1000 and 1003
    for (std::size_t k = 0; k + 1 < strided.positions.size(); ++k) {
        CHECK(strided.positions[k] == full.positions[100 * k]);
    }
    CHECK(strided.positions.back() == full.positions.back());
    CHECK(strided.times.back() == full.times.back());
    CHECK(strided.reset_steps == full.reset_steps);
}

TEST_CASE("euler: invalid inputs are rejected") {
    RngStream stream(1, 0);
    CHECK_THROWS_AS(simulate_euler({0.0, 0.0, 200.0, 1.0}, {0.01, 10}, stream), ConfigError);
    CHECK_THROWS_AS(simulate_euler({std::nan(""), 0.0, 0.0, 1.0}, {0.01, 10}, stream),
                    ConfigError);
    CHECK_THROWS_AS(simulate_euler({0.0, 0.0, 0.0, -1.0}, {0.01, 10}, stream), ConfigError);
    // sigma*sqrt(dt) ~ 32: the multiplier goes negative within a few steps.
    CHECK_THROWS_AS(simulate_euler({0.0, 1e5, 0.0, 1.0}, {0.01, 1000}, stream),
                    NumericError);
}

TEST_CASE("last reset time: no resetting pins t_l to zero") {
    RngStream stream(5, 0);
    for (int i = 0; i < 100; ++i) CHECK(sample_last_reset_time(10.0, 0.0, stream) == 0.0);
}

TEST_CASE("last reset time: atom weight and mean match the mixed density") {
    // f(t_l | t) = delta(t_l) e^{-rt} + r e^{-r(t - t_l)}, t=10, r=0.5.
    const double t = 10.0, r = 0.5;
    RngStream stream(17, 1);
    const int n = 1000000;
    int at_zero = 0;
    std::vector<double> draws(n);
    for (auto& d : draws) {
        d = sample_last_reset_time(t, r, stream);
        CHECK(d >= 0.0);
        CHECK(d <= t);
        at_zero += d == 0.0 ? 1 : 0;
    }

    const double atom = std::exp(-r * t);  // = 0.006737946999085467
    const double freq = static_cast<double>(at_zero) / n;
    const double se = std::sqrt(atom * (1.0 - atom) / n);
    CHECK(std::abs(freq - atom) < 3.0 * se);

    // Quadrature oracle for the mean of the continuous part.
    const double mean_oracle =
        oracle::integrate([&](double tl) { return tl * r * std::exp(-r * (t - tl)); }, 0.0, t);
    CHECK(mean_oracle == doctest::Approx(8.013475893998171).epsilon(1e-10));
    const auto s = oracle::summarize(draws);
    CHECK(std::abs(s.mean - mean_oracle) < 3.0 * s.se_mean);
}

TEST_CASE("exact sampler: degenerate cases") {
    RngStream stream(23, 0);
    CHECK(sample_position_exact({0.02, 0.01, 0.1, 2.5}, 0.0, stream) == 2.5);
    for (int i = 0; i < 10; ++i) {
        const double x = sample_position_exact({0.03, 0.0, 0.0, 1.0}, 50.0, stream);
        CHECK(x == doctest::Approx(std::exp(0.03 * 50.0)).epsilon(1e-12));
    }
}

TEST_CASE("exact sampler: long-time mean matches the convergent first moment") {
    // mu=0.02, sigma2=0.01, r=0.1, t=200: <x> ~ r/(r - mu) = 1.25.
    const ModelParams params{0.02, 0.01, 0.1, 1.0};
    std::vector<double> draws(100000);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        RngStream stream(31, i);
        draws[i] = sample_position_exact(params, 200.0, stream);
    }
    const auto s = oracle::summarize(draws);
    CHECK(std::abs(s.mean - 1.25) < 3.0 * s.se_mean);
}

TEST_CASE("ensemble: singleton equals a direct stream-0 simulation") {
    const SimGrid grid{0.01, 200};
    const auto ensemble = generate_ensemble(kFig1, grid, 1, 77);
    RngStream stream(77, 0);
    const auto direct = simulate_euler(kFig1, grid, stream);
    CHECK(ensemble[0].positions == direct.positions);
    CHECK(ensemble[0].reset_steps == direct.reset_steps);
}

TEST_CASE("ensemble: bit-identical across runs and worker counts") {
    const SimGrid grid{0.01, 500};
    setenv("SRGBM_THREADS", "1", 1);
    const auto serial = generate_ensemble(kFig1, grid, 64, 123);
    setenv("SRGBM_THREADS", "4", 1);
    const auto threaded = generate_ensemble(kFig1, grid, 64, 123);
    unsetenv("SRGBM_THREADS");
    const auto again = generate_ensemble(kFig1, grid, 64, 123);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].positions == threaded[i].positions);
        CHECK(serial[i].positions == again[i].positions);
        CHECK(serial[i].reset_steps == threaded[i].reset_steps);
    }
}

TEST_CASE("ensemble: reset counts follow the Poisson rate") {
    // Mean reset count over horizon t is r*t (binomial n*p exactly).
    const SimGrid grid{0.05, 1000};  // t = 50
    const auto ensemble = generate_ensemble(kFig1, grid, 4000, 555);
    std::vector<double> counts(ensemble.size());
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        counts[i] = static_cast<double>(ensemble[i].reset_steps.size());
    }
    const auto s = oracle::summarize(counts);
    CHECK(std::abs(s.mean - kFig1.r * 50.0) < 3.0 * s.se_mean);
}

TEST_CASE("euler and exact sampler agree in distribution") {
    // KS distance between final-position samples shrinks with dt; modest
    // sizes here, the acceptance suite runs the full tolerance check.
    const double t = 10.0;
    const std::int64_t n = 4000;
    const auto euler = ensemble_finals_euler(kFig1, {0.001, 10000}, n, 2001);
    const auto exact = ensemble_finals_exact(kFig1, t, n, 2002);
    CHECK(oracle::ks_two_sample(euler, exact) < 0.05);
}

TEST_CASE("ensemble finals match full-trajectory endpoints") {
    const SimGrid grid{0.01, 300};
    const auto finals = ensemble_finals_euler(kFig1, grid, 32, 42);
    const auto full = generate_ensemble(kFig1, grid, 32, 42);
    for (std::size_t i = 0; i < finals.size(); ++i) {
        CHECK(finals[i] == full[i].final_position());
    }
}
