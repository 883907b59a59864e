#include "biastol/sim_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>
#include <toml.hpp>

#include "biastol/detail/parallel.hpp"
#include "biastol/errors.hpp"
#include "biastol/tolerance_fft.hpp"
#include "biastol/tolerance_inequality.hpp"

namespace biastol {
namespace {

template <class T>
std::vector<T> read_array(const toml::table& t, std::string_view key) {
    std::vector<T> out;
    const auto* arr = t.get_as<toml::array>(key);
    if (!arr) throw FormatError("config: '" + std::string(key) + "' must be an array");
    for (const auto& node : *arr) {
        const auto v = node.value<T>();
        if (!v) throw FormatError("config: bad element in '" + std::string(key) + "'");
        out.push_back(*v);
    }
    return out;
}

GenGammaSpec read_target(const toml::table& t) {
    const auto shape = t["shape"].value<double>();
    const auto rate = t["rate"].value<double>();
    if (!shape || !rate) throw FormatError("config: target needs numeric 'shape' and 'rate'");
    return GenGammaSpec(*shape, *rate, t["delta"].value_or(1.0));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

ObservedTime::ObservedTime(double value_, bool event_) : value(value_), event(event_) {
    if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("observed time must be positive");
}

void SimConfig::validate() const {
    if (targets.empty()) throw DomainError("config: no targets");
    if (censor_rates.empty()) throw DomainError("config: no censor rates");
    for (double c : censor_rates) {
        if (!(c >= 0.0 && c <= 0.9)) throw DomainError("config: censor rates must lie in [0, 0.9]");
    }
    if (r_grid.empty() || m_grid.empty()) throw DomainError("config: empty r or m grid");
    for (int v : r_grid) {
        if (v < 1) throw DomainError("config: r values must be positive");
    }
    for (int v : m_grid) {
        if (v < 1) throw DomainError("config: m values must be positive");
    }
    if (!(q > 0.0 && q < 1.0) || !(alpha > 0.0 && alpha < 1.0)) throw DomainError("config: q and alpha in (0, 1)");
    if (replications < 100) throw DomainError("config: replications must be at least 100");
    if (methods.empty()) throw DomainError("config: no methods");
    for (Method mth : methods) {
        if (mth == Method::ExactBeta) throw DomainError("config: methods are scheffe, ineq and fft");
    }
    if (knot_count < 2 || map_draws < 10 * static_cast<std::size_t>(knot_count)) {
        throw DomainError("config: map_draws must be at least 10 * knot_count");
    }
}

SimConfig SimConfig::parse_toml(std::string_view text) {
    toml::table t;
    try {
        t = toml::parse(text);
    } catch (const toml::parse_error& e) {
        throw FormatError(std::string("config: ") + std::string(e.description()));
    }
    SimConfig c;
    try {
        if (const auto* arr = t.get_as<toml::array>("targets")) {
            for (const auto& node : *arr) {
                const auto* tbl = node.as_table();
                if (!tbl) throw FormatError("config: 'targets' must be an array of tables");
                c.targets.push_back(read_target(*tbl));
            }
        } else if (const auto* tbl = t.get_as<toml::table>("target")) {
            c.targets.push_back(read_target(*tbl));
        }
        if (t.contains("censor_rates")) {
            c.censor_rates = read_array<double>(t, "censor_rates");
        } else if (const auto v = t["censor_rate"].value<double>()) {
            c.censor_rates = {*v};
        }
        if (t.contains("r_grid")) c.r_grid = read_array<int>(t, "r_grid");
        if (t.contains("m_grid")) c.m_grid = read_array<int>(t, "m_grid");
        c.q = t["q"].value_or(c.q);
        c.alpha = t["alpha"].value_or(c.alpha);
        c.replications = t["replications"].value_or(c.replications);
        if (const auto s = t["seed"].value<std::int64_t>()) c.seed = static_cast<std::uint64_t>(*s);
        if (t.contains("methods")) {
            c.methods.clear();
            for (const auto& name : read_array<std::string>(t, "methods")) c.methods.push_back(method_from_string(name));
        }
        c.events_only = t["events_only"].value_or(c.events_only);
        if (const auto d = t["map_draws"].value<std::int64_t>()) c.map_draws = static_cast<std::size_t>(*d);
        c.knot_count = t["knot_count"].value_or(c.knot_count);
        c.validate();
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
    return c;
}

SimConfig SimConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_toml(ss.str());
}

std::vector<double> draw_length_biased(const GenGammaSpec& target, std::size_t count, std::uint64_t seed) {
    return sample(size_bias(target, 1.0), count, seed);
}

ObservedTime observe(double lifetime, double lambda, Rng& rng) {
    const double u = rng.uniform();
    const double backward = u * lifetime;
    const double forward = (1.0 - u) * lifetime;
    if (lambda <= 0.0) return {lifetime, true};
    const double censor = rng.exponential() / lambda;
    if (forward <= censor) return {lifetime, true};
    return {backward + censor, false};
}

std::vector<ObservedTime> censor_forward(const std::vector<double>& lifetimes, double lambda, std::uint64_t seed) {
    if (!(lambda > 0.0)) throw DomainError("censoring rate lambda must be positive");
    Rng rng(seed);
    std::vector<ObservedTime> out;
    out.reserve(lifetimes.size());
    for (double y : lifetimes) out.push_back(observe(y, lambda, rng));
    return out;
}

double calibrate_lambda(const GenGammaSpec& target, double censor_rate, std::uint64_t seed, std::size_t draws) {
    if (!(censor_rate > 0.0 && censor_rate < 1.0)) throw DomainError("censor_rate must lie in (0, 1)");
    if (draws == 0) throw DomainError("calibration needs draws");
    // A record is censored iff E / lambda < R, i.e. lambda > E / R, with E a
    // standard exponential; the thresholds are fixed across bisection steps.
    const GenGammaSpec biased = size_bias(target, 1.0);
    Rng rng(seed);
    std::vector<double> thresholds(draws);
    for (auto& t : thresholds) {
        const double y = draw(biased, rng);
        const double forward = (1.0 - rng.uniform()) * y;
        t = rng.exponential() / forward;
    }
    std::sort(thresholds.begin(), thresholds.end());
    auto fraction = [&](double lambda) {
        const auto below = std::lower_bound(thresholds.begin(), thresholds.end(), lambda) - thresholds.begin();
        return static_cast<double>(below) / static_cast<double>(draws);
    };

    double lo = std::log(1e-12);
    double hi = std::log(1e12);
    double best = std::exp(0.5 * (lo + hi));
    double best_gap = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 200; ++step) {
        const double mid = 0.5 * (lo + hi);
        const double lambda = std::exp(mid);
        const double f = fraction(lambda);
        const double gap = std::fabs(f - censor_rate);
        if (gap < best_gap) {
            best_gap = gap;
            best = lambda;
        }
        if (gap <= 0.5 / static_cast<double>(draws)) break;
        (f < censor_rate ? lo : hi) = mid;
        if (hi - lo < 1e-14) break;
    }
    if (best_gap > 0.005) throw NonConvergenceError("calibrate_lambda: censoring rate not reached");
    return best;
}

CoverageEstimate empirical_coverage(const SampleDrawer& draw_sample, const std::function<double(double)>& target_cdf,
                                    std::int64_t n, int r, int m, double q, int reps, std::uint64_t seed) {
    if (r < 1 || m < 1) throw DomainError("r and m must be positive");
    if (n <= r + m) throw InfeasibleError("empirical coverage needs n > r + m");
    if (reps < 1) throw DomainError("replications must be positive");
    int hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        auto ys = draw_sample(n, derive_seed(seed, static_cast<std::uint64_t>(rep)));
        if (static_cast<std::int64_t>(ys.size()) != n) throw DomainError("sampler returned the wrong sample size");
        const auto lower = ys.begin() + (r - 1);
        const auto upper = ys.begin() + (n - m);
        std::nth_element(ys.begin(), upper, ys.end());
        const double y_upper = *upper;
        std::nth_element(ys.begin(), lower, upper);
        if (target_cdf(y_upper) - target_cdf(*lower) >= q) ++hits;
    }
    const double p = static_cast<double>(hits) / reps;
    return {p, std::sqrt(p * (1.0 - p) / reps), reps};
}

SampleDrawer observed_sampler(const GenGammaSpec& target, double lambda, bool events_only) {
    const GenGammaSpec biased = size_bias(target, 1.0);
    return [biased, lambda, events_only](std::int64_t n, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n));
        while (static_cast<std::int64_t>(out.size()) < n) {
            const ObservedTime o = observe(draw(biased, rng), lambda, rng);
            if (o.event || !events_only) out.push_back(o.value);
        }
        return out;
    };
}

CoverageEstimate empirical_coverage(const GenGammaSpec& target, double lambda, std::int64_t n, int r, int m, double q,
                                    int reps, std::uint64_t seed, bool events_only) {
    return empirical_coverage(observed_sampler(target, lambda, events_only),
                              [target](double x) { return gengamma_cdf(x, target); }, n, r, m, q, reps, seed);
}

QuantileMap simulation_map(const SimConfig& config, const GenGammaSpec& target, double censor_rate, double lambda,
                           std::uint64_t seed) {
    if (censor_rate == 0.0 && !config.events_only) return analytic_map(target, 1.0, config.knot_count);
    const auto observed = observed_sampler(target, lambda, config.events_only);
    Sampler target_sampler = [target](std::size_t count, std::uint64_t s) { return sample(target, count, s); };
    Sampler biased_sampler = [observed](std::size_t count, std::uint64_t s) {
        return observed(static_cast<std::int64_t>(count), s);
    };
    nlohmann::json meta = {
        {"target", {{"shape", target.shape}, {"rate", target.rate}, {"delta", target.delta}}},
        {"censor_rate", censor_rate},
        {"lambda", lambda},
        {"events_only", config.events_only},
    };
    return monte_carlo_map(target_sampler, biased_sampler, config.map_draws, config.knot_count, seed, std::move(meta));
}

std::vector<SimRow> run_grid(const SimConfig& config, const RunOptions& options) {
    config.validate();
    struct Setting {
        GenGammaSpec target;
        double censor_rate;
        double lambda = 0.0;
        std::optional<QuantileMap> map;
        std::string error;
    };
    std::vector<Setting> settings;
    for (const auto& t : config.targets) {
        for (double c : config.censor_rates) settings.push_back({t, c, 0.0, std::nullopt, {}});
    }

    detail::parallel_for(settings.size(), options.jobs, [&](std::size_t i) {
        Setting& s = settings[i];
        try {
            const std::uint64_t base = derive_seed(config.seed, 1'000'000 + i);
            if (s.censor_rate > 0.0) s.lambda = calibrate_lambda(s.target, s.censor_rate, derive_seed(base, 0));
            s.map = simulation_map(config, s.target, s.censor_rate, s.lambda, derive_seed(base, 1));
        } catch (const std::exception& e) {
            s.error = e.what();
        }
    });

    std::vector<SimRow> rows;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < settings.size(); ++i) {
        for (int r : config.r_grid) {
            for (int m : config.m_grid) {
                for (Method mth : config.methods) {
                    rows.push_back({settings[i].target.shape, settings[i].target.rate, settings[i].censor_rate, r, m,
                                    mth, 0, std::nan(""), std::nan(""), 0.0, std::nullopt});
                    owner.push_back(i);
                }
            }
        }
    }

    detail::parallel_for(rows.size(), options.jobs, [&](std::size_t idx) {
        SimRow& row = rows[idx];
        const Setting& s = settings[owner[idx]];
        try {
            if (!s.map) throw InfeasibleError("map construction failed: " + s.error);
            const ToleranceSpec spec(row.r, row.m, config.q, config.alpha);
            const auto start = std::chrono::steady_clock::now();
            SampleSizeResult res = [&] {
                switch (row.method) {
                    case Method::ScheffeTukey: return scheffe_tukey_sample_size(spec);
                    case Method::Inequality: return sample_size_inequality(spec, *s.map);
                    case Method::FFT: return sample_size_fft(spec, *s.map);
                    case Method::ExactBeta: return exact_sample_size(spec);
                }
                throw DomainError("unknown method");
            }();
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            row.n = res.n;
            row.runtime_ms = options.timing ? ms : 0.0;
            const auto est = empirical_coverage(s.target, s.lambda, res.n, row.r, row.m, config.q,
                                                config.replications, derive_seed(config.seed, idx),
                                                config.events_only);
            row.coverage = est.coverage;
            row.std_error = est.std_error;
        } catch (const std::exception& e) {
            row.n = 0;
            row.coverage = row.std_error = std::nan("");
            row.error = e.what();
            spdlog::warn("simulation cell (shape={}, rate={}, censor={}, r={}, m={}, method={}) failed: {}",
                         row.target_shape, row.target_rate, row.censor_rate, row.r, row.m, to_string(row.method),
                         e.what());
        }
    });
    return rows;
}

void write_csv(std::ostream& out, const std::vector<SimRow>& rows) {
    out << kSimCsvHeader << '\n';
    for (const auto& row : rows) {
        char runtime[32];
        std::snprintf(runtime, sizeof runtime, "%.3f", row.runtime_ms);
        out << format_number(row.target_shape) << ',' << format_number(row.target_rate) << ','
            << format_number(row.censor_rate) << ',' << row.r << ',' << row.m << ',' << to_string(row.method) << ','
            << row.n << ',' << format_number(row.coverage) << ',' << format_number(row.std_error) << ',' << runtime
            << '\n';
    }
}

}  // namespace biastol
