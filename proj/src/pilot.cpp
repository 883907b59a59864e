#include "biastol/pilot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "biastol/detail/parallel.hpp"
#include "biastol/errors.hpp"
#include "biastol/tolerance_fft.hpp"
#include "biastol/tolerance_inequality.hpp"

namespace biastol {
namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw FormatError("pilot csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
}

// Observed-data log-likelihood at target masses p.
double log_likelihood(const std::vector<double>& p, const std::vector<double>& w, const std::vector<int>& events,
                      const std::vector<std::size_t>& cens_start, std::size_t n) {
    const std::size_t size = p.size();
    std::vector<double> tail(size + 1, 0.0);
    for (std::size_t j = size; j-- > 0;) tail[j] = tail[j + 1] + p[j];
    double mu = 0.0;
    double ll = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
        mu += w[j] * p[j];
        if (events[j] > 0) ll += events[j] * std::log(w[j] * p[j]);
    }
    for (std::size_t k : cens_start) ll += std::log(tail[k]);
    return ll - static_cast<double>(n) * std::log(mu);
}

}  // namespace

DeclaredBias DeclaredBias::size(double kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("size bias requires kappa >= 0");
    return {Kind::Size, kappa};
}

double DeclaredBias::weight(double y) const {
    switch (kind) {
        case Kind::Length: return y;
        case Kind::Size: return std::pow(y, kappa);
        case Kind::None: return 1.0;
    }
    return 1.0;
}

std::string to_string(const DeclaredBias& bias) {
    switch (bias.kind) {
        case DeclaredBias::Kind::Length: return "length";
        case DeclaredBias::Kind::Size: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "size(%g)", bias.kappa);
            return buf;
        }
        case DeclaredBias::Kind::None: return "none";
    }
    return "unknown";
}

PilotSample::PilotSample(std::vector<ObservedTime> records_, DeclaredBias bias)
    : records(std::move(records_)), declared_bias(bias) {
    if (events() < 2) throw DomainError("pilot sample needs at least 2 event records");
}

std::size_t PilotSample::events() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const ObservedTime& o) { return o.event; }));
}

EstimatedCDF empirical_ghat(const PilotSample& sample) {
    if (sample.records.empty()) throw DomainError("empirical_ghat: empty sample");
    std::vector<double> values;
    values.reserve(sample.records.size());
    for (const auto& o : sample.records) values.push_back(o.value);
    return EstimatedCDF::from_sample(values);
}

NpmleFit fit_npmle(const PilotSample& sample, double tolerance, int max_iter) {
    if (sample.declared_bias.kind == DeclaredBias::Kind::None) {
        throw DomainError("npmle_fhat: declared bias must not be None");
    }
    if (!(tolerance > 0.0) || max_iter < 1) throw DomainError("npmle_fhat: bad tolerance or iteration limit");

    std::vector<double> event_times;
    std::vector<double> censored;
    for (const auto& o : sample.records) (o.event ? event_times : censored).push_back(o.value);
    if (event_times.empty()) throw DomainError("npmle_fhat: all records censored");
    std::sort(event_times.begin(), event_times.end());
    std::sort(censored.begin(), censored.end());

    std::vector<double> support;
    std::vector<int> events;
    for (double t : event_times) {
        if (!support.empty() && support.back() == t) {
            ++events.back();
        } else {
            support.push_back(t);
            events.push_back(1);
        }
    }
    if (!censored.empty() && censored.back() > support.back()) {
        support.push_back(censored.back());
        events.push_back(0);
    }
    const std::size_t size = support.size();
    const std::size_t n = sample.records.size();

    std::vector<double> w(size);
    for (std::size_t j = 0; j < size; ++j) w[j] = sample.declared_bias.weight(support[j]);

    // First support index strictly above each censored value; a censored value
    // at or beyond the last point falls back to the last point.
    std::vector<std::size_t> cens_start;
    cens_start.reserve(censored.size());
    for (double x : censored) {
        const auto k = static_cast<std::size_t>(std::upper_bound(support.begin(), support.end(), x) - support.begin());
        cens_start.push_back(std::min(k, size - 1));
    }

    // EM runs on the biased-scale masses q; target masses are p = (q / w) / sum.
    std::vector<double> q(size, 1.0 / static_cast<double>(size));
    std::vector<double> p(size);
    const auto to_target = [&](const std::vector<double>& qq, std::vector<double>& out) {
        double total = 0.0;
        for (std::size_t j = 0; j < size; ++j) total += out[j] = qq[j] / w[j];
        for (double& v : out) v /= total;
    };
    to_target(q, p);

    NpmleFit fit{EstimatedCDF({1.0}, {1.0}, CdfKind::NPMLE), {}, 0, 0.0};
    fit.loglik.push_back(log_likelihood(p, w, events, cens_start, n));

    std::vector<double> a(size), tail(size + 1), inv_s_prefix(size), q_next(size), p_next(size);
    for (int iter = 1; iter <= max_iter; ++iter) {
        for (std::size_t j = 0; j < size; ++j) a[j] = q[j] / w[j];
        tail[size] = 0.0;
        for (std::size_t j = size; j-- > 0;) tail[j] = tail[j + 1] + a[j];
        std::fill(inv_s_prefix.begin(), inv_s_prefix.end(), 0.0);
        for (std::size_t k : cens_start) inv_s_prefix[k] += 1.0 / tail[k];
        double running = 0.0;
        double q_total = 0.0;
        for (std::size_t j = 0; j < size; ++j) {
            running += inv_s_prefix[j];
            q_next[j] = (events[j] + a[j] * running) / static_cast<double>(n);
            q_total += q_next[j];
        }
        fit.max_mass_drift = std::max(fit.max_mass_drift, std::fabs(q_total - 1.0));
        to_target(q_next, p_next);
        double p_total = 0.0;
        double change = 0.0;
        for (std::size_t j = 0; j < size; ++j) {
            p_total += p_next[j];
            change = std::max(change, std::fabs(p_next[j] - p[j]));
        }
        fit.max_mass_drift = std::max(fit.max_mass_drift, std::fabs(p_total - 1.0));
        q.swap(q_next);
        p.swap(p_next);
        fit.loglik.push_back(log_likelihood(p, w, events, cens_start, n));
        fit.iterations = iter;
        if (change < tolerance) {
            fit.fhat = EstimatedCDF::from_weighted(support, p, CdfKind::NPMLE);
            spdlog::debug("npmle converged after {} iterations, loglik {}", iter, fit.loglik.back());
            return fit;
        }
    }
    throw NonConvergenceError("npmle_fhat: no convergence after " + std::to_string(max_iter) + " iterations");
}

EstimatedCDF npmle_fhat(const PilotSample& sample, double tolerance, int max_iter) {
    return fit_npmle(sample, tolerance, max_iter).fhat;
}

QuantileMap pilot_quantile_map(const PilotSample& sample, int knot_count) {
    const EstimatedCDF ghat = empirical_ghat(sample);
    if (sample.declared_bias.kind == DeclaredBias::Kind::None) return pilot_map(ghat, ghat, knot_count);
    return pilot_map(npmle_fhat(sample), ghat, knot_count);
}

std::vector<DesignRow> design_report(const QuantileMap& map, const std::vector<int>& r_grid,
                                     const std::vector<int>& m_grid, double q, double alpha, unsigned jobs) {
    std::vector<DesignRow> rows;
    for (int r : r_grid) {
        for (int m : m_grid) rows.push_back({r, m, 0, 0, 0});
    }
    detail::parallel_for(rows.size(), jobs, [&](std::size_t i) {
        DesignRow& row = rows[i];
        const ToleranceSpec spec(row.r, row.m, q, alpha);
        row.n_scheffe = scheffe_tukey_sample_size(spec).n;
        row.n_ineq = sample_size_inequality(spec, map).n;
        row.n_fft = sample_size_fft(spec, map).n;
    });
    return rows;
}

std::vector<DesignRow> design_report(const PilotSample& sample, const std::vector<int>& r_grid,
                                     const std::vector<int>& m_grid, double q, double alpha, unsigned jobs) {
    return design_report(pilot_quantile_map(sample), r_grid, m_grid, q, alpha, jobs);
}

std::vector<SweepRow> design_sweep(const QuantileMap& map, const std::vector<double>& q_grid,
                                   const std::vector<double>& confidence_grid, int r, int m, unsigned jobs) {
    std::vector<SweepRow> rows;
    for (double c : confidence_grid) {
        for (double q : q_grid) rows.push_back({q, c, 0, 0, 0});
    }
    detail::parallel_for(rows.size(), jobs, [&](std::size_t i) {
        SweepRow& row = rows[i];
        const ToleranceSpec spec(r, m, row.q, 1.0 - row.confidence);
        row.n_scheffe = scheffe_tukey_sample_size(spec).n;
        row.n_ineq = sample_size_inequality(spec, map).n;
        row.n_fft = sample_size_fft(spec, map).n;
    });
    return rows;
}

void write_design_csv(std::ostream& out, const std::vector<DesignRow>& rows) {
    out << "r,m,n_scheffe,n_ineq,n_fft\n";
    for (const auto& row : rows) {
        out << row.r << ',' << row.m << ',' << row.n_scheffe << ',' << row.n_ineq << ',' << row.n_fft << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "q,confidence,n_scheffe,n_ineq,n_fft\n";
    for (const auto& row : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g,%.10g", row.q, row.confidence);
        out << buf << ',' << row.n_scheffe << ',' << row.n_ineq << ',' << row.n_fft << '\n';
    }
}

PilotSample read_pilot_csv(std::istream& in, DeclaredBias bias) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw FormatError("pilot csv: empty input");
    ++line_no;
    const auto header = split_fields(line);
    if (header.size() < 2 || header[0] != "time" || header[1] != "status") {
        throw FormatError("pilot csv: header must start with 'time,status'");
    }
    if (header.size() > 2) spdlog::warn("pilot csv: ignoring extra column(s) after 'status'");

    std::vector<ObservedTime> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() < 2) throw FormatError("pilot csv line " + std::to_string(line_no) + ": expected 2 fields");
        const double t = parse_double(fields[0], line_no);
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw FormatError("pilot csv line " + std::to_string(line_no) + ": time must be positive");
        }
        if (fields[1] != "0" && fields[1] != "1") {
            throw FormatError("pilot csv line " + std::to_string(line_no) + ": status must be 0 or 1");
        }
        records.emplace_back(t, fields[1] == "1");
    }
    try {
        return PilotSample(std::move(records), bias);
    } catch (const DomainError& e) {
        throw FormatError(std::string("pilot csv: ") + e.what());
    }
}

PilotSample load_pilot_csv(const std::string& path, DeclaredBias bias) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open pilot file: " + path);
    return read_pilot_csv(in, bias);
}

void write_pilot_csv(std::ostream& out, const std::vector<ObservedTime>& records) {
    out << "time,status\n";
    for (const auto& o : records) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", o.value);
        out << buf << ',' << (o.event ? 1 : 0) << '\n';
    }
}

PilotSample synthetic_pilot(const GenGammaSpec& target, double censor_rate, std::size_t n, std::uint64_t seed) {
    const auto lifetimes = draw_length_biased(target, n, derive_seed(seed, 0));
    if (censor_rate == 0.0) {
        std::vector<ObservedTime> records;
        records.reserve(n);
        for (double y : lifetimes) records.emplace_back(y, true);
        return PilotSample(std::move(records));
    }
    const double lambda = calibrate_lambda(target, censor_rate, derive_seed(seed, 1));
    return PilotSample(censor_forward(lifetimes, lambda, derive_seed(seed, 2)));
}

PilotSample synthetic_csha(std::uint64_t seed) {
    return synthetic_pilot(kCshaLikeTarget, kCshaLikeCensorRate, kCshaLikeSize, seed);
}

}  // namespace biastol
