#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biastol/distributions.hpp"
#include "biastol/quantile_map.hpp"
#include "biastol/tolerance_classic.hpp"

namespace biastol {

/// One subject from a prevalent cohort: the observed lifetime and whether the
/// failure was seen (true) or the forward time was right-censored (false).
struct ObservedTime {
    double value;
    bool event;

    ObservedTime(double value_, bool event_);
    friend bool operator==(const ObservedTime&, const ObservedTime&) = default;
};

/// Simulation grid. Every (target, censor rate, r, m, method) combination is
/// one cell.
struct SimConfig {
    std::vector<GenGammaSpec> targets;
    std::vector<double> censor_rates{0.0};
    std::vector<int> r_grid{1, 3, 5, 10};
    std::vector<int> m_grid{1, 2, 7, 12};
    double q = 0.80;
    double alpha = 0.05;
    int replications = 500;
    std::uint64_t seed = 0;
    std::vector<Method> methods{Method::ScheffeTukey, Method::Inequality, Method::FFT};
    /// Order statistics taken over uncensored failure times only.
    bool events_only = false;
    std::size_t map_draws = kDefaultMonteCarloDraws;
    int knot_count = kDefaultKnotCount;

    /// Throws DomainError on invalid values.
    void validate() const;

    /// TOML form: scalar keys with the field names above, `targets` as an
    /// array of tables {shape, rate, delta}; a single `target` table and a
    /// scalar `censor_rate` are accepted too. Throws FormatError.
    static SimConfig parse_toml(std::string_view text);
    static SimConfig load(const std::string& path);
};

/// Exact draws from the length-biased law size_bias(target, 1).
std::vector<double> draw_length_biased(const GenGammaSpec& target, std::size_t count, std::uint64_t seed);

/// Observation of a length-biased lifetime y at a cross-section: backward
/// time A = U y, forward time R = (1 - U) y with U uniform (stationary
/// onsets), forward time censored by C ~ Exp(lambda). lambda = 0 disables
/// censoring.
ObservedTime observe(double lifetime, double lambda, Rng& rng);

std::vector<ObservedTime> censor_forward(const std::vector<double>& lifetimes, double lambda, std::uint64_t seed);

/// lambda for which the censored fraction P(C < R) matches censor_rate,
/// estimated from `draws` common random numbers. NonConvergenceError if the
/// bisection does not reach +-0.005 within 200 steps.
double calibrate_lambda(const GenGammaSpec& target, double censor_rate, std::uint64_t seed,
                        std::size_t draws = 100000);

struct CoverageEstimate {
    double coverage;
    double std_error;
    int replications;
};

/// Draws one sample of n observed values from the stream `seed`.
using SampleDrawer = std::function<std::vector<double>(std::int64_t n, std::uint64_t seed)>;

/// Fraction of replications with F(Y_{n+1-m}) - F(Y_r) >= q, where Y are the
/// sorted values returned by `draw` and F is `target_cdf`.
CoverageEstimate empirical_coverage(const SampleDrawer& draw, const std::function<double(double)>& target_cdf,
                                    std::int64_t n, int r, int m, double q, int reps, std::uint64_t seed);

/// Length-biased, forward-censored samples from `target`.
CoverageEstimate empirical_coverage(const GenGammaSpec& target, double lambda, std::int64_t n, int r, int m, double q,
                                    int reps, std::uint64_t seed, bool events_only = false);

/// Sampler of observed values for a target under length bias and censoring,
/// usable for Monte Carlo maps and coverage runs.
SampleDrawer observed_sampler(const GenGammaSpec& target, double lambda, bool events_only);

/// Quantile map used for one (target, censor rate) pair: analytic without
/// censoring, Monte Carlo otherwise.
QuantileMap simulation_map(const SimConfig& config, const GenGammaSpec& target, double censor_rate, double lambda,
                           std::uint64_t seed);

struct SimRow {
    double target_shape;
    double target_rate;
    double censor_rate;
    int r;
    int m;
    Method method;
    std::int64_t n;
    double coverage;
    double std_error;
    double runtime_ms;
    std::optional<std::string> error;
};

struct RunOptions {
    unsigned jobs = 0;  // 0: hardware concurrency
    /// When false, runtime_ms is written as 0 so output is byte-reproducible.
    bool timing = true;
};

/// Runs every cell of the grid. Cells that fail carry n = 0, NaN coverage
/// and the error text; they do not stop the run. Row order is deterministic.
std::vector<SimRow> run_grid(const SimConfig& config, const RunOptions& options = {});

inline constexpr std::string_view kSimCsvHeader =
    "target_shape,target_rate,censor_rate,r,m,method,n,coverage,stderr,runtime_ms";

void write_csv(std::ostream& out, const std::vector<SimRow>& rows);

}  // namespace biastol
