// Acceptance suite. Usage: acceptance [ac1 ... ac8]; no arguments runs all.
// Prints one PASS/FAIL line per criterion and exits nonzero if any failed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "biastol/fft_conv.hpp"
#include "biastol/pilot.hpp"
#include "biastol/sim_harness.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace biastol;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 1;
const std::vector<int> kRGrid{1, 3, 5, 10};
const std::vector<int> kMGrid{1, 2, 7, 12};

struct Verdict {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string data(const std::string& name) { return std::string(BIASTOL_DATA_DIR) + "/" + name; }

json cli_json(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) throw std::runtime_error("cli failed (" + std::to_string(code) + "): " + err.str());
    return json::parse(out.str());
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// Scheffe-Tukey column: exact integers, grid listed m-major.
Verdict ac1() {
    const std::vector<std::int64_t> expected{22, 37, 50, 82, 30, 44, 57, 88, 63, 76, 88, 118, 94, 106, 118, 147};
    const auto start = Clock::now();
    std::vector<std::int64_t> got;
    for (int m : kMGrid) {
        for (int r : kRGrid) {
            const auto j = cli_json({"classic", "sample-size", "--r", std::to_string(r), "--m", std::to_string(m),
                                     "--q", "0.80", "--alpha", "0.05", "--method", "scheffe"});
            got.push_back(j["n"].get<std::int64_t>());
        }
    }
    const double elapsed = seconds_since(start);
    const auto mismatches = std::inner_product(got.begin(), got.end(), expected.begin(), 0, std::plus<>(),
                                               [](auto a, auto b) { return a != b ? 1 : 0; });
    return {mismatches == 0 && elapsed < 1.0,
            std::to_string(16 - mismatches) + "/16 exact, " + fmt("%.3f s (limit 1 s)", elapsed)};
}

// FFT under the identity map against the exact Beta answer, +-1.
Verdict ac2() {
    const auto start = Clock::now();
    int cells = 0;
    std::vector<std::string> off;
    for (double q : {0.8, 0.9}) {
        for (double alpha : {0.05, 0.1}) {
            for (int r : kRGrid) {
                for (int m : kMGrid) {
                    const std::vector<std::string> common{"--r",     std::to_string(r), "--m",    std::to_string(m),
                                                          "--q",     num(q),            "--alpha", num(alpha)};
                    std::vector<std::string> fft{"biased", "sample-size", "--method", "fft", "--map",
                                                 data("identity.json")};
                    std::vector<std::string> exact{"classic", "sample-size", "--method", "exact"};
                    fft.insert(fft.end(), common.begin(), common.end());
                    exact.insert(exact.end(), common.begin(), common.end());
                    const auto n_fft = cli_json(fft)["n"].get<std::int64_t>();
                    const auto n_exact = cli_json(exact)["n"].get<std::int64_t>();
                    ++cells;
                    if (std::llabs(n_fft - n_exact) > 1) {
                        off.push_back("(r=" + std::to_string(r) + ",m=" + std::to_string(m) + ",q=" + num(q) +
                                      ",a=" + num(alpha) + "): fft " + std::to_string(n_fft) + " vs exact " +
                                      std::to_string(n_exact));
                    }
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    std::string detail = std::to_string(cells - static_cast<int>(off.size())) + "/" + std::to_string(cells) +
                         " cells within +-1, " + fmt("%.2f s (limit 30 s)", elapsed);
    for (const auto& o : off) detail += "; " + o;
    return {off.empty() && elapsed < 30.0, detail};
}

// Coverage bands on the bundled grid (3 targets x 4 censor rates x 16 cells).
Verdict ac3() {
    const auto start = Clock::now();
    SimConfig config = SimConfig::load(data("coverage_grid.toml"));
    config.seed = kSeed;
    config.replications = 500;
    const auto rows = run_grid(config, {0, false});
    int fft_cells = 0, fft_in = 0, st_cells = 0, st_low = 0, ineq_cells = 0, ineq_high = 0, errors = 0;
    double fft_min = 1, fft_max = 0, ineq_min = 1;
    for (const auto& row : rows) {
        if (row.error) {
            ++errors;
            continue;
        }
        switch (row.method) {
            case Method::FFT:
                ++fft_cells;
                fft_in += std::fabs(row.coverage - 0.95) <= 0.03;
                fft_min = std::min(fft_min, row.coverage);
                fft_max = std::max(fft_max, row.coverage);
                break;
            case Method::ScheffeTukey:
                ++st_cells;
                st_low += row.coverage < 0.90;
                break;
            case Method::Inequality:
                ++ineq_cells;
                ineq_high += row.coverage >= 0.98;
                ineq_min = std::min(ineq_min, row.coverage);
                break;
            default: break;
        }
    }
    const bool a = errors == 0 && fft_cells == 192 && fft_in == fft_cells;
    const bool b = errors == 0 && st_cells == 192 && st_low >= 0.9 * st_cells;
    const bool c = errors == 0 && ineq_cells == 192 && ineq_high == ineq_cells;
    std::string detail = std::to_string(rows.size()) + " rows, " + std::to_string(errors) + " errors; (a) " +
                         (a ? "PASS" : "FAIL") + " fft in 0.95+-0.03: " + std::to_string(fft_in) + "/" +
                         std::to_string(fft_cells) + fmt(" [%.3f, %.3f]", fft_min, fft_max) + "; (b) " +
                         (b ? "PASS" : "FAIL") + " scheffe < 0.90: " + std::to_string(st_low) + "/" +
                         std::to_string(st_cells) + " (need 90%); (c) " + (c ? "PASS" : "FAIL") +
                         " ineq >= 0.98: " + std::to_string(ineq_high) + "/" + std::to_string(ineq_cells) +
                         fmt(" [min %.3f]", ineq_min) + fmt("; %.1f s", seconds_since(start));
    return {a && b && c, detail};
}

// Ordering and widening gaps on the bundled synthetic pilot.
Verdict ac4() {
    const auto table = cli_json({"pilot", "report", "--data", data("synthetic_csha.csv")});
    int ordered = 0;
    for (const auto& row : table) {
        ordered += row["n_scheffe"] <= row["n_fft"] && row["n_fft"] <= row["n_ineq"];
    }
    const auto sweep = cli_json({"pilot", "report", "--data", data("synthetic_csha.csv"), "--sweep"});
    std::map<double, std::map<double, json>> by;
    int sweep_ordered = 0;
    for (const auto& row : sweep) {
        by[row["confidence"].get<double>()][row["q"].get<double>()] = row;
        sweep_ordered += row["n_scheffe"] <= row["n_fft"] && row["n_fft"] <= row["n_ineq"];
    }
    int widening = 0;
    std::string gaps;
    for (auto& [conf, rows] : by) {
        const auto gap = [](const json& r) {
            return std::pair{r["n_fft"].get<long>() - r["n_scheffe"].get<long>(),
                             r["n_ineq"].get<long>() - r["n_fft"].get<long>()};
        };
        const auto lo = gap(rows.at(0.80));
        const auto hi = gap(rows.at(0.95));
        const bool wider = hi.first > lo.first && hi.second > lo.second;
        widening += wider;
        gaps += fmt(" conf %.3f:", conf) + " fft-st " + std::to_string(lo.first) + "->" + std::to_string(hi.first) +
                ", ineq-fft " + std::to_string(lo.second) + "->" + std::to_string(hi.second) + ";";
    }
    const bool pass = table.size() == 16 && ordered == 16 && sweep.size() == 12 && sweep_ordered == 12 &&
                      widening == static_cast<int>(by.size()) && by.size() == 3;
    return {pass, "table ordered " + std::to_string(ordered) + "/16, sweep ordered " + std::to_string(sweep_ordered) +
                      "/12, gap widens at " + std::to_string(widening) + "/3 confidence levels;" + gaps};
}

// Convolution against the direct sum; identity-map difference law against Beta(n+1-k, k).
Verdict ac5() {
    const auto start = Clock::now();
    Rng rng(derive_seed(kSeed, 5));
    double conv_err = 0.0;
    for (int c = 0; c < 100; ++c) {
        const auto len_a = 1 + static_cast<std::size_t>(rng.uniform() * 512);
        const auto len_b = 1 + static_cast<std::size_t>(rng.uniform() * 512);
        GridDensity a{rng.uniform(), 0.01, std::vector<double>(len_a)};
        GridDensity b{-rng.uniform(), 0.01, std::vector<double>(len_b)};
        for (double& v : a.masses) v = rng.uniform();
        for (double& v : b.masses) v = rng.uniform();
        const auto fast = convolve(a, b, c % 2 ? Padding::ExactM : Padding::NextPow2);
        const auto slow = oracle::direct_convolution(a.masses, b.masses);
        for (std::size_t i = 0; i < slow.size(); ++i) conv_err = std::max(conv_err, std::fabs(fast.masses[i] - slow[i]));
    }
    const bool conv_ok = conv_err <= 1e-10;

    std::string detail = fmt("convolve max-abs %.2e (limit 1e-10)", conv_err) + "; beta sup-error:";
    bool law_ok = true;
    const QuantileMap id = identity_map();
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{50, 2}, {100, 2}, {100, 5}, {250, 5}, {250, 11},
                                                               {500, 11}, {500, 22}, {1000, 11}, {1000, 22}}) {
        const int r = k / 2;
        const int m = k - r;
        const auto law = difference_law(n, r, m, id).density;
        const double total = law.total();
        double worst = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double z = i / 4000.0;
            worst = std::max(worst, std::fabs(law.cdf(z) / total - pbeta(z, {static_cast<double>(n + 1 - k),
                                                                            static_cast<double>(k)})));
        }
        law_ok = law_ok && worst < 5e-4;
        detail += " (" + std::to_string(n) + "," + std::to_string(k) + ") " + fmt("%.1e", worst) +
                  (worst < 5e-4 ? "" : "!");
    }
    const double elapsed = seconds_since(start);
    detail += fmt("; %.2f s (limit 10 s)", elapsed);
    return {conv_ok && law_ok && elapsed < 10.0, detail};
}

// Median FFT solve time on the analytic Exp(2) length-bias map.
Verdict ac6() {
    std::vector<double> times;
    for (int r : kRGrid) {
        for (int m : kMGrid) {
            const auto start = Clock::now();
            cli_json({"biased", "sample-size", "--method", "fft", "--map", data("exp2_length_bias.json"), "--r",
                      std::to_string(r), "--m", std::to_string(m), "--q", "0.80", "--alpha", "0.05"});
            times.push_back(seconds_since(start));
        }
    }
    std::sort(times.begin(), times.end());
    const double median = 0.5 * (times[7] + times[8]);
    return {median < 0.1, fmt("median %.4f s, max %.4f s per solve (limit 0.1 s)", median, times.back())};
}

// Accept-reject size-biased draws against the closed-form family.
Verdict ac7() {
    bool pass = true;
    std::string detail;
    std::uint64_t stream = 0;
    for (double shape : {0.5, 1.0, 2.0}) {
        const GenGammaSpec spec(shape, 2.0);
        const double cap = gengamma_quantile(1 - 1e-12, spec);
        const auto draws = oracle::size_biased_accept_reject([&](Rng& g) { return draw(spec, g); }, 1.0, cap, 100000,
                                                             derive_seed(derive_seed(kSeed, 7), stream++));
        const GenGammaSpec biased = size_bias(spec, 1.0);
        const double d = oracle::ks_statistic(draws, [&](double x) { return gengamma_cdf(x, biased); });
        const double crit = oracle::ks_critical_1pct(draws.size());
        pass = pass && d < crit;
        detail += fmt("Gamma(%.1f,2): D=%.5f (crit %.5f); ", shape, d, crit);
    }
    return {pass, detail};
}

// NPMLE on 2000 length-biased, 20%-censored Exp(2) lifetimes.
Verdict ac8() {
    const GenGammaSpec truth(1, 2);
    const auto sample = synthetic_pilot(truth, 0.2, 2000, derive_seed(kSeed, 8));
    const auto fit = fit_npmle(sample);
    double sup = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < fit.fhat.size(); ++i) {
        const double f = gengamma_cdf(fit.fhat.support()[i], truth);
        sup = std::max({sup, std::fabs(f - prev), std::fabs(f - fit.fhat.cum_probs()[i])});
        prev = fit.fhat.cum_probs()[i];
    }
    bool ascent = true;
    for (std::size_t i = 1; i < fit.loglik.size(); ++i) ascent = ascent && fit.loglik[i] >= fit.loglik[i - 1];

    std::vector<ObservedTime> complete;
    std::vector<double> ys;
    for (double y : draw_length_biased(truth, 2000, derive_seed(kSeed, 88))) {
        complete.emplace_back(y, true);
        ys.push_back(y);
    }
    const auto closed = npmle_fhat(PilotSample(complete));
    std::sort(ys.begin(), ys.end());
    double total = 0.0;
    for (double y : ys) total += 1.0 / y;
    double acc = 0.0, closed_err = 0.0;
    for (double y : ys) {
        acc += 1.0 / y;
        closed_err = std::max(closed_err, std::fabs(closed.cdf(y) - acc / total));
    }
    const double censored = 1.0 - static_cast<double>(sample.events()) / sample.records.size();
    const bool sup_ok = sup < 0.05;
    const bool closed_ok = closed_err <= 1e-12;
    return {sup_ok && ascent && closed_ok,
            fmt("sup-distance %.4f (limit 0.05, censored %.3f)", sup, censored) + (sup_ok ? "" : " FAIL") +
                "; loglik nondecreasing over " + std::to_string(fit.iterations) + " iterations: " +
                (ascent ? "yes" : "no") + fmt("; closed-form max error %.2e (limit 1e-12)", closed_err)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"ac1", ac1}, {"ac2", ac2}, {"ac3", ac3}, {"ac4", ac4},
        {"ac5", ac5}, {"ac6", ac6}, {"ac7", ac7}, {"ac8", ac8}};
    std::vector<std::string> selected(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
        Verdict v{false, ""};
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::string label = name;
        std::transform(label.begin(), label.end(), label.begin(), ::toupper);
        std::printf("%s %s: %s\n", label.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
