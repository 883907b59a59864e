#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biastol/estimated_cdf.hpp"
#include "biastol/quantile_map.hpp"
#include "biastol/sim_harness.hpp"

namespace biastol {

/// Weight function w(y) under which the pilot was sampled.
struct DeclaredBias {
    enum class Kind { Length, Size, None };
    Kind kind = Kind::Length;
    double kappa = 1.0;

    static DeclaredBias length() { return {Kind::Length, 1.0}; }
    static DeclaredBias size(double kappa);
    static DeclaredBias none() { return {Kind::None, 0.0}; }

    double weight(double y) const;
};

std::string to_string(const DeclaredBias& bias);

struct PilotSample {
    std::vector<ObservedTime> records;
    DeclaredBias declared_bias;

    /// Throws DomainError unless there are at least two events.
    PilotSample(std::vector<ObservedTime> records, DeclaredBias bias = DeclaredBias::length());

    std::size_t events() const;
};

/// Empirical CDF of every observed value, censored ones included.
EstimatedCDF empirical_ghat(const PilotSample& sample);

struct NpmleFit {
    EstimatedCDF fhat;
    /// Observed-data log-likelihood after each EM step (entry 0 is the start).
    std::vector<double> loglik;
    int iterations;
    /// Largest |sum of masses - 1| seen over all iterates.
    double max_mass_drift;
};

inline constexpr double kDefaultNpmleTolerance = 1e-9;
inline constexpr int kDefaultNpmleMaxIter = 10000;

/// EM for the target CDF under weighted sampling with forward censoring.
/// Support: event times, plus the largest censored value when it exceeds the
/// last event. Throws DomainError for bias None or all-censored input and
/// NonConvergenceError after max_iter steps.
NpmleFit fit_npmle(const PilotSample& sample, double tolerance = kDefaultNpmleTolerance,
                   int max_iter = kDefaultNpmleMaxIter);

EstimatedCDF npmle_fhat(const PilotSample& sample, double tolerance = kDefaultNpmleTolerance,
                        int max_iter = kDefaultNpmleMaxIter);

/// pilot_map(F-hat, G-hat). With bias None, F-hat is G-hat.
QuantileMap pilot_quantile_map(const PilotSample& sample, int knot_count = kDefaultKnotCount);

struct DesignRow {
    int r;
    int m;
    std::int64_t n_scheffe;
    std::int64_t n_ineq;
    std::int64_t n_fft;
};

std::vector<DesignRow> design_report(const QuantileMap& map, const std::vector<int>& r_grid,
                                     const std::vector<int>& m_grid, double q, double alpha, unsigned jobs = 0);

std::vector<DesignRow> design_report(const PilotSample& sample, const std::vector<int>& r_grid,
                                     const std::vector<int>& m_grid, double q, double alpha, unsigned jobs = 0);

struct SweepRow {
    double q;
    double confidence;
    std::int64_t n_scheffe;
    std::int64_t n_ineq;
    std::int64_t n_fft;
};

/// Fixed r and m, every (q, confidence) pair; rows ordered by confidence then q.
std::vector<SweepRow> design_sweep(const QuantileMap& map, const std::vector<double>& q_grid,
                                   const std::vector<double>& confidence_grid, int r = 1, int m = 1,
                                   unsigned jobs = 0);

void write_design_csv(std::ostream& out, const std::vector<DesignRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// `time,status` CSV with a header; status 1 = event, 0 = censored. A third
/// column is ignored with a warning. Throws FormatError.
PilotSample read_pilot_csv(std::istream& in, DeclaredBias bias = DeclaredBias::length());
PilotSample load_pilot_csv(const std::string& path, DeclaredBias bias = DeclaredBias::length());
void write_pilot_csv(std::ostream& out, const std::vector<ObservedTime>& records);

/// Length-biased draws from `target` with forward censoring calibrated to
/// `censor_rate`.
PilotSample synthetic_pilot(const GenGammaSpec& target, double censor_rate, std::size_t n, std::uint64_t seed);

/// Stand-in for an unavailable prevalent-cohort pilot: exponential target with
/// mean 4.5, length bias, 21% censoring, 821 subjects.
inline const GenGammaSpec kCshaLikeTarget{1.0, 1.0 / 4.5};
inline constexpr double kCshaLikeCensorRate = 0.21;
inline constexpr std::size_t kCshaLikeSize = 821;
inline constexpr std::uint64_t kCshaLikeSeed = 20240501;

PilotSample synthetic_csha(std::uint64_t seed = kCshaLikeSeed);

}  // namespace biastol
