#include <cmath>
#include <sstream>

#include "biastol/errors.hpp"
#include "biastol/pilot.hpp"
#include "biastol/tolerance_classic.hpp"
#include "doctest.h"

using namespace biastol;

namespace {

std::vector<ObservedTime> events(std::initializer_list<double> values) {
    std::vector<ObservedTime> out;
    for (double v : values) out.emplace_back(v, true);
    return out;
}

double sup_distance(const EstimatedCDF& fhat, const GenGammaSpec& truth) {
    // The sup of |step - continuous| is attained at a jump, from one side or the other.
    double worst = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const double f = gengamma_cdf(fhat.support()[i], truth);
        worst = std::max({worst, std::fabs(f - prev), std::fabs(f - fhat.cum_probs()[i])});
        prev = fhat.cum_probs()[i];
    }
    return worst;
}

}  // namespace

TEST_CASE("PilotSample invariants") {
    CHECK_THROWS_AS(PilotSample(events({1.0})), DomainError);
    CHECK_THROWS_AS(PilotSample({{1.0, true}, {2.0, false}}), DomainError);
    CHECK_NOTHROW(PilotSample({{1.0, true}, {2.0, false}, {3.0, true}}));
    CHECK_THROWS_AS(DeclaredBias::size(-1.0), DomainError);
    CHECK(DeclaredBias::length().weight(3.0) == 3.0);
    CHECK(DeclaredBias::size(2.0).weight(3.0) == doctest::Approx(9.0));
    CHECK(to_string(DeclaredBias::size(0.5)) == "size(0.5)");
}

TEST_CASE("empirical G-hat") {
    const auto g = empirical_ghat(PilotSample(events({3, 1, 2})));
    CHECK(g.support() == std::vector<double>{1, 2, 3});
    CHECK(g.cum_probs()[0] == doctest::Approx(1.0 / 3));
    CHECK(g.cum_probs()[1] == doctest::Approx(2.0 / 3));
    CHECK(g.quantile(0.5) == 2.0);
    CHECK(g.kind() == CdfKind::Empirical);

    const auto merged = empirical_ghat(PilotSample({{1.0, true}, {2.0, false}, {2.0, true}, {4.0, true}}));
    CHECK(merged.support() == std::vector<double>{1, 2, 4});
    CHECK(merged.masses()[1] == doctest::Approx(0.5));
}

TEST_CASE("NPMLE without censoring is the inverse-weight estimator") {
    const auto two = npmle_fhat(PilotSample(events({1, 2})));
    CHECK(two.masses()[0] == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(two.masses()[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(two.kind() == CdfKind::NPMLE);

    const auto sample = synthetic_pilot({1, 2}, 0.0, 500, 17);
    const auto fit = fit_npmle(sample);
    CHECK(fit.iterations <= 3);
    std::vector<double> ys;
    for (const auto& o : sample.records) ys.push_back(o.value);
    std::sort(ys.begin(), ys.end());
    double total = 0.0;
    for (double y : ys) total += 1.0 / y;
    double acc = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        acc += 1.0 / ys[i];
        worst = std::max(worst, std::fabs(fit.fhat.cdf(ys[i]) - acc / total));
    }
    CHECK(worst < 1e-12);

    const auto flat = npmle_fhat(PilotSample(events({1, 2, 5, 7}), DeclaredBias::size(0.0)));
    for (double m : flat.masses()) CHECK(m == doctest::Approx(0.25));
}

TEST_CASE("NPMLE stochastically below G-hat under length bias") {
    const auto sample = synthetic_pilot({2, 2}, 0.0, 300, 5);
    const auto f = npmle_fhat(sample);
    const auto g = empirical_ghat(sample);
    for (double x : g.support()) CHECK(f.cdf(x) >= g.cdf(x) - 1e-12);
}

TEST_CASE("NPMLE with censoring: ascent, mass, consistency") {
    const GenGammaSpec truth(1, 2);
    const auto sample = synthetic_pilot(truth, 0.2, 20000, 8);
    const double censored = 1.0 - static_cast<double>(sample.events()) / sample.records.size();
    CHECK(censored == doctest::Approx(0.2).epsilon(0.15));
    const auto fit = fit_npmle(sample);
    CHECK(fit.iterations > 1);
    for (std::size_t i = 1; i < fit.loglik.size(); ++i) CHECK(fit.loglik[i] >= fit.loglik[i - 1] - 1e-9);
    CHECK(fit.max_mass_drift < 1e-10);
    for (double m : fit.fhat.masses()) CHECK(m >= 0.0);
    CHECK(sup_distance(fit.fhat, truth) < 0.05);
    // Ignoring the bias entirely is far off; the check above has teeth.
    CHECK(sup_distance(empirical_ghat(sample), truth) > 0.1);
}

TEST_CASE("censoring loses information but not consistency") {
    // Same lifetimes, with and without forward censoring.
    const GenGammaSpec truth(1, 2);
    const auto lifetimes = draw_length_biased(truth, 5000, 12);
    std::vector<ObservedTime> complete;
    for (double y : lifetimes) complete.emplace_back(y, true);
    const auto full = npmle_fhat(PilotSample(complete));
    const auto censored = npmle_fhat(PilotSample(censor_forward(lifetimes, calibrate_lambda(truth, 0.3, 4), 6)));
    for (double x : {0.1, 0.25, 0.5, 1.0, 2.0}) CHECK(std::fabs(full.cdf(x) - censored.cdf(x)) < 0.03);
}

TEST_CASE("NPMLE support and errors") {
    const PilotSample tail({{1.0, true}, {2.0, true}, {5.0, false}});
    const auto f = npmle_fhat(tail);
    CHECK(f.support() == std::vector<double>{1, 2, 5});
    CHECK(f.masses()[2] > 0.0);

    const PilotSample tied({{1.0, true}, {2.0, true}, {2.0, false}});
    CHECK(npmle_fhat(tied).support() == std::vector<double>{1, 2});

    CHECK_THROWS_AS(npmle_fhat(PilotSample(events({1, 2}), DeclaredBias::none())), DomainError);
    CHECK_THROWS_AS(fit_npmle(synthetic_pilot({1, 2}, 0.3, 400, 2), 1e-15, 2), NonConvergenceError);
}

TEST_CASE("design report") {
    const auto sample = synthetic_csha();
    CHECK(sample.records.size() == kCshaLikeSize);
    const auto map = pilot_quantile_map(sample);
    CHECK(map.kind() == MapKind::Pilot);
    const std::vector<int> r_grid{1, 3, 5, 10}, m_grid{1, 2, 7, 12};
    const auto rows = design_report(map, r_grid, m_grid, 0.8, 0.05, 4);
    REQUIRE(rows.size() == 16);
    for (const auto& row : rows) {
        INFO("r=" << row.r << " m=" << row.m);
        CHECK(row.n_scheffe == scheffe_tukey_sample_size({row.r, row.m, 0.8, 0.05}).n);
        CHECK(row.n_scheffe <= row.n_fft);
        CHECK(row.n_fft <= row.n_ineq);
    }
    CHECK(rows.front().n_scheffe == 22);
    CHECK(rows.back().n_scheffe == 147);

    const auto serial = design_report(map, r_grid, m_grid, 0.8, 0.05, 1);
    std::ostringstream a, b;
    write_design_csv(a, rows);
    write_design_csv(b, serial);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("r,m,n_scheffe,n_ineq,n_fft\n1,1,22,", 0) == 0);
}

TEST_CASE("identity pilot reduces to the unbiased answer") {
    const auto sample = synthetic_pilot({1, 2}, 0.0, 800, 31);
    const PilotSample unbiased(sample.records, DeclaredBias::none());
    const auto rows = design_report(unbiased, {1, 3, 5, 10}, {1, 2, 7, 12}, 0.8, 0.05);
    const auto identity = design_report(identity_map(), {1, 3, 5, 10}, {1, 2, 7, 12}, 0.8, 0.05);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        INFO("r=" << row.r << " m=" << row.m);
        CHECK(row.n_fft == identity[i].n_fft);
        CHECK(row.n_ineq == identity[i].n_ineq);
        // The convolution treats the two order statistics as independent, which
        // costs up to two extra draws at the largest r + m here.
        const auto exact = exact_sample_size({row.r, row.m, 0.8, 0.05}).n;
        CHECK(row.n_fft >= exact);
        CHECK(row.n_fft <= exact + (row.r + row.m >= 20 ? 2 : 1));
    }
}

TEST_CASE("design sweep") {
    const auto map = pilot_quantile_map(synthetic_csha());
    const std::vector<double> qs{0.8, 0.85, 0.9, 0.95};
    const std::vector<double> conf{0.9, 0.925, 0.95};
    const auto rows = design_sweep(map, qs, conf);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].q == 0.8);
    CHECK(rows[0].confidence == 0.9);
    CHECK(rows[4].confidence == 0.925);
    for (std::size_t c = 0; c < conf.size(); ++c) {
        const auto& lo = rows[c * qs.size()];
        const auto& hi = rows[c * qs.size() + qs.size() - 1];
        CHECK(hi.n_ineq - hi.n_scheffe > lo.n_ineq - lo.n_scheffe);
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const auto& row = rows[c * qs.size() + i];
            CHECK(row.n_scheffe <= row.n_fft);
            CHECK(row.n_fft <= row.n_ineq);
        }
    }
    std::ostringstream out;
    write_sweep_csv(out, rows);
    CHECK(out.str().rfind("q,confidence,n_scheffe,n_ineq,n_fft\n0.8,0.9,", 0) == 0);
}

TEST_CASE("pilot csv") {
    std::istringstream good("time,status\n1.5,1\n2.25,0\n 3 , 1 \n\n4,1\n");
    const auto s = read_pilot_csv(good);
    REQUIRE(s.records.size() == 4);
    CHECK(s.records[1] == ObservedTime(2.25, false));
    CHECK(s.records[2] == ObservedTime(3.0, true));

    std::istringstream extra("time,status,id\n1,1,a\n2,1,b\n");
    CHECK(read_pilot_csv(extra).records.size() == 2);

    const auto bad = [](const std::string& text) {
        std::istringstream in(text);
        return read_pilot_csv(in);
    };
    CHECK_THROWS_AS(bad(""), FormatError);
    CHECK_THROWS_AS(bad("t,s\n1,1\n2,1\n"), FormatError);
    CHECK_THROWS_AS(bad("time,status\n1,1\n-2,1\n"), FormatError);
    CHECK_THROWS_AS(bad("time,status\n1,1\n2,2\n"), FormatError);
    CHECK_THROWS_AS(bad("time,status\n1,1\nabc,1\n"), FormatError);
    CHECK_THROWS_AS(bad("time,status\n1,1\n"), FormatError);
    CHECK_THROWS_AS(load_pilot_csv("/nonexistent.csv"), FormatError);

    const auto original = synthetic_pilot({1, 2}, 0.2, 50, 3);
    std::stringstream round;
    write_pilot_csv(round, original.records);
    const auto back = read_pilot_csv(round);
    REQUIRE(back.records.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(back.records[i].event == original.records[i].event);
        CHECK(back.records[i].value == doctest::Approx(original.records[i].value).epsilon(1e-8));
    }
}

TEST_CASE("synthetic CSHA-like pilot") {
    const auto a = synthetic_csha();
    const auto b = synthetic_csha();
    CHECK(a.records == b.records);
    const double censored = 1.0 - static_cast<double>(a.events()) / a.records.size();
    CHECK(std::fabs(censored - kCshaLikeCensorRate) < 0.04);
}
