#include <cmath>
#include <numeric>
#include <sstream>

#include "biastol/errors.hpp"
#include "biastol/sim_harness.hpp"
#include "biastol/tolerance_fft.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace biastol;

namespace {

double censored_fraction(const std::vector<ObservedTime>& obs) {
    const auto censored = std::count_if(obs.begin(), obs.end(), [](const ObservedTime& o) { return !o.event; });
    return static_cast<double>(censored) / static_cast<double>(obs.size());
}

const char* kSmallConfig = R"(
seed = 42
replications = 100
q = 0.8
alpha = 0.05
r_grid = [1, 3]
m_grid = [2]
censor_rates = [0.0, 0.25]
methods = ["scheffe", "ineq", "fft"]
map_draws = 20000
knot_count = 201

[[targets]]
shape = 1.0
rate = 2.0
)";

}  // namespace

TEST_CASE("ObservedTime validation") {
    CHECK_NOTHROW(ObservedTime(1.0, true));
    CHECK_THROWS_AS(ObservedTime(0.0, true), DomainError);
    CHECK_THROWS_AS(ObservedTime(-1.0, false), DomainError);
}

TEST_CASE("length-biased draws") {
    const auto xs = draw_length_biased({1, 2}, 100000, 8);
    CHECK(oracle::ks_statistic(xs, [](double x) { return gengamma_cdf(x, {2, 2}); }) < oracle::ks_critical_1pct(1e5));
    CHECK(draw_length_biased({1, 2}, 10, 8) == draw_length_biased({1, 2}, 10, 8));

    // Gamma(2, 2) target: E[X^2] / E[X] = (alpha + 1) / beta = 1.5.
    const auto ys = draw_length_biased({2, 2}, 1000000, 21);
    const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    CHECK(std::fabs(mean - 1.5) <= 3 * std::sqrt(0.75 / 1e6));
}

TEST_CASE("uncensored observed times follow the length-biased law") {
    const auto sampler = observed_sampler({0.5, 2}, 0.0, false);
    const auto xs = sampler(100000, 4);
    CHECK(oracle::ks_statistic(xs, [](double x) { return gengamma_cdf(x, {1.5, 2}); }) < oracle::ks_critical_1pct(1e5));
}

TEST_CASE("forward censoring limits") {
    const auto ys = draw_length_biased({1, 2}, 20000, 3);
    const auto none = censor_forward(ys, 1e-12, 5);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        CHECK(none[i].event);
        CHECK(none[i].value == ys[i]);
    }
    const auto all = censor_forward(ys, 1e6, 5);
    CHECK(censored_fraction(all) > 0.999);
    for (std::size_t i = 0; i < ys.size(); ++i) CHECK(all[i].value <= ys[i]);
    // With immediate censoring the observed value is essentially the backward time U y.
    double mean_ratio = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) mean_ratio += all[i].value / ys[i];
    CHECK(mean_ratio / ys.size() == doctest::Approx(0.5).epsilon(0.02));
    CHECK_THROWS_AS(censor_forward(ys, 0.0, 1), DomainError);
}

TEST_CASE("calibrate_lambda") {
    const GenGammaSpec target(1, 2);
    const double lambda = calibrate_lambda(target, 0.25, 77);
    const auto ys = draw_length_biased(target, 100000, 1234);
    CHECK(std::fabs(censored_fraction(censor_forward(ys, lambda, 99)) - 0.25) <= 0.01);

    CHECK(calibrate_lambda(target, 0.001, 77) < 0.01);
    double prev = 0.0;
    for (double rate : {0.05, 0.1, 0.25, 0.4, 0.6}) {
        const double l = calibrate_lambda(target, rate, 77);
        CHECK(l > prev);
        prev = l;
    }
    CHECK(calibrate_lambda(target, 0.1, 3) == calibrate_lambda(target, 0.1, 3));
    CHECK_THROWS_AS(calibrate_lambda(target, 0.0, 1), DomainError);
    CHECK_THROWS_AS(calibrate_lambda(target, 1.0, 1), DomainError);
}

TEST_CASE("empirical coverage edge cases and determinism") {
    const GenGammaSpec target(2, 2);
    CHECK(empirical_coverage(target, 0.0, 30, 1, 1, 0.0, 200, 1).coverage == 1.0);
    CHECK(empirical_coverage(target, 0.0, 30, 1, 1, 1.0, 200, 1).coverage == 0.0);
    const auto a = empirical_coverage(target, 0.3, 60, 2, 3, 0.8, 300, 9);
    const auto b = empirical_coverage(target, 0.3, 60, 2, 3, 0.8, 300, 9);
    CHECK(a.coverage == b.coverage);
    CHECK(a.std_error == doctest::Approx(std::sqrt(a.coverage * (1 - a.coverage) / 300)));
    CHECK_THROWS_AS(empirical_coverage(target, 0.0, 3, 1, 2, 0.8, 100, 1), InfeasibleError);
    const auto events = empirical_coverage(target, 0.5, 60, 2, 3, 0.8, 100, 9, true);
    CHECK(events.coverage >= 0.0);
}

TEST_CASE("harness self-calibration with unbiased samples") {
    const GenGammaSpec target(1, 2);
    const SampleDrawer unbiased = [target](std::int64_t n, std::uint64_t seed) {
        return sample(target, static_cast<std::size_t>(n), seed);
    };
    const auto cdf = [target](double x) { return gengamma_cdf(x, target); };
    std::uint64_t stream = 0;
    for (int r : {1, 3, 5, 10}) {
        for (int m : {1, 2, 7, 12}) {
            const auto n = exact_sample_size({r, m, 0.8, 0.05}).n;
            const auto est = empirical_coverage(unbiased, cdf, n, r, m, 0.8, 1000, derive_seed(2025, stream++));
            INFO("r=" << r << " m=" << m << " n=" << n);
            CHECK(std::fabs(est.coverage - 0.95) <= 0.03);
        }
    }
}

TEST_CASE("FFT sample size is calibrated under length bias") {
    const GenGammaSpec target(1, 2);
    const auto n = sample_size_fft({1, 1, 0.8, 0.05}, analytic_map(target, 1.0)).n;
    const auto est = empirical_coverage(target, 0.0, n, 1, 1, 0.8, 1000, 606);
    CHECK(std::fabs(est.coverage - 0.95) <= 0.02);
}

TEST_CASE("SimConfig parsing") {
    const SimConfig c = SimConfig::parse_toml(kSmallConfig);
    CHECK(c.seed == 42);
    CHECK(c.replications == 100);
    CHECK(c.targets.size() == 1);
    CHECK(c.targets[0] == GenGammaSpec(1, 2));
    CHECK(c.censor_rates == std::vector<double>{0.0, 0.25});
    CHECK(c.r_grid == std::vector<int>{1, 3});
    CHECK(c.methods.size() == 3);
    CHECK(c.knot_count == 201);

    const SimConfig single = SimConfig::parse_toml("censor_rate = 0.1\n[target]\nshape = 2.0\nrate = 2.0\n");
    CHECK(single.censor_rates == std::vector<double>{0.1});
    CHECK(single.targets[0] == GenGammaSpec(2, 2));
    CHECK(single.replications == 500);

    CHECK_THROWS_AS(SimConfig::parse_toml("seed = "), FormatError);
    CHECK_THROWS_AS(SimConfig::parse_toml("seed = 1\n"), FormatError);
    CHECK_THROWS_AS(SimConfig::parse_toml("replications = 10\n[target]\nshape = 1.0\nrate = 2.0\n"), FormatError);
    CHECK_THROWS_AS(SimConfig::parse_toml("censor_rates = [0.95]\n[target]\nshape = 1.0\nrate = 2.0\n"), FormatError);
    CHECK_THROWS_AS(SimConfig::parse_toml("methods = [\"exact\"]\n[target]\nshape = 1.0\nrate = 2.0\n"), FormatError);
    CHECK_THROWS_AS(SimConfig::load("/nonexistent/config.toml"), FormatError);
}

TEST_CASE("run_grid output is complete and reproducible") {
    const SimConfig c = SimConfig::parse_toml(kSmallConfig);
    const auto rows = run_grid(c, {1, false});
    CHECK(rows.size() == 1 * 2 * 2 * 1 * 3);
    for (const auto& row : rows) {
        INFO(to_string(row.method) << " r=" << row.r << " censor=" << row.censor_rate);
        CHECK_FALSE(row.error.has_value());
        CHECK(row.n > row.r + row.m);
        CHECK(row.coverage >= 0.0);
        CHECK(row.coverage <= 1.0);
        CHECK(row.runtime_ms == 0.0);
    }
    std::ostringstream one, many;
    write_csv(one, rows);
    write_csv(many, run_grid(c, {4, false}));
    const std::string text = one.str();
    CHECK(text == many.str());
    CHECK(text.rfind(std::string(kSimCsvHeader) + "\n", 0) == 0);
    const auto lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == 1 + static_cast<long>(rows.size()));

    const auto timed = run_grid(c, {2, true});
    CHECK(std::any_of(timed.begin(), timed.end(), [](const SimRow& r) { return r.runtime_ms > 0.0; }));
}
