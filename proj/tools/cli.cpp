#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "biastol/errors.hpp"
#include "biastol/pilot.hpp"
#include "biastol/sim_harness.hpp"
#include "biastol/tolerance_classic.hpp"
#include "biastol/tolerance_fft.hpp"
#include "biastol/tolerance_inequality.hpp"
#include "json.hpp"

namespace biastol::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Design {
    int r = 0;
    int m = 0;
    double q = 0.0;
    double alpha = 0.0;
    std::int64_t n = 0;
};

struct FftFlags {
    double epsilon = FFTConfig{}.epsilon;
    int cells = FFTConfig{}.target_cells;
    std::string padding = "pow2";

    FFTConfig config() const {
        FFTConfig c;
        c.epsilon = epsilon;
        c.target_cells = cells;
        c.padding = padding == "exact" ? Padding::ExactM : Padding::NextPow2;
        return c;
    }
};

struct Flags {
    Design design;
    std::string method;
    std::string map_source;
    FftFlags fft;
    bool pretty = false;
    std::string output;

    // map make
    std::string map_kind = "analytic";
    double shape = 1.0;
    double rate = 1.0;
    double delta = 1.0;
    double kappa = 1.0;
    int knots = kDefaultKnotCount;
    std::size_t draws = kDefaultMonteCarloDraws;
    double censor_rate = 0.0;
    CLI::Option* censor_opt = nullptr;
    CLI::Option* draws_opt = nullptr;

    std::optional<std::uint64_t> seed;

    // simulate
    std::string config_path;
    unsigned jobs = 0;
    bool no_timing = false;
    std::optional<int> replications;
    bool events_only = false;

    // pilot
    std::string data_path;
    std::string bias = "length";
    double tolerance = kDefaultNpmleTolerance;
    int max_iter = kDefaultNpmleMaxIter;
    std::string map_out;
    std::vector<int> r_grid{1, 3, 5, 10};
    std::vector<int> m_grid{1, 2, 7, 12};
    bool sweep = false;
    std::vector<double> q_grid{0.80, 0.85, 0.90, 0.95};
    std::vector<double> confidence_grid{0.90, 0.925, 0.95};
};

const char* error_type(const std::exception& e) {
    if (dynamic_cast<const InfeasibleError*>(&e)) return "infeasible";
    if (dynamic_cast<const NonConvergenceError*>(&e)) return "nonconvergence";
    if (dynamic_cast<const NoSolutionError*>(&e)) return "no_solution";
    if (dynamic_cast<const FormatError*>(&e)) return "format";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    return "internal";
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) throw FormatError("cannot write " + path);
}

void warn_if_small(std::int64_t n, int r, int m) {
    if (n < 3 * static_cast<std::int64_t>(r + m)) {
        spdlog::warn("n = {} is below 3(r + m) = {}; the two order statistics are far from independent", n,
                     3 * (r + m));
    }
}

DeclaredBias parse_bias(const std::string& text) {
    if (text == "length") return DeclaredBias::length();
    if (text == "none") return DeclaredBias::none();
    if (text.rfind("size:", 0) == 0) {
        try {
            return DeclaredBias::size(std::stod(text.substr(5)));
        } catch (const std::invalid_argument&) {
        }
    }
    throw UsageError("--bias must be length, none or size:<kappa>");
}

QuantileMap load_map(const std::string& source) {
    if (source == "identity") return identity_map();
    return QuantileMap::load(source);
}

void add_design(CLI::App* cmd, Flags& f, bool with_n, bool with_q) {
    cmd->add_option("--r", f.design.r, "Lower order-statistic index")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--m", f.design.m, "Upper order-statistic index from the top")
        ->required()
        ->check(CLI::PositiveNumber);
    if (with_q) cmd->add_option("--q", f.design.q, "Coverage proportion")->required()->check(CLI::Range(0.0, 1.0));
    if (with_n) cmd->add_option("--n", f.design.n, "Sample size")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", f.design.alpha, "One minus the confidence level")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--pretty", f.pretty, "Human-readable output");
}

void add_biased(CLI::App* cmd, Flags& f) {
    cmd->add_option("--method", f.method, "ineq or fft")->required()->check(CLI::IsMember({"ineq", "fft"}));
    cmd->add_option("--map", f.map_source, "Quantile map JSON file, or 'identity'")->required();
    cmd->add_option("--epsilon", f.fft.epsilon, "FFT truncation budget");
    cmd->add_option("--cells", f.fft.cells, "FFT target cells per component");
    cmd->add_option("--padding", f.fft.padding, "FFT padding")->check(CLI::IsMember({"exact", "pow2"}));
}

json design_json(const Design& d, bool with_n, bool with_q) {
    json j{{"r", d.r}, {"m", d.m}, {"alpha", d.alpha}};
    if (with_n) j["n"] = d.n;
    if (with_q) j["q"] = d.q;
    return j;
}

json sample_size_json(const SampleSizeResult& res, const Design& d) {
    json j = design_json(d, false, true);
    j["method"] = to_string(res.method);
    j["n"] = res.n;
    j["achieved"] = res.achieved;
    j["diagnostics"] = res.diagnostics;
    return j;
}

void print_sample_size(std::ostream& out, const json& j) {
    out << "n = " << j["n"].get<std::int64_t>() << "  (" << j["method"].get<std::string>() << ", r=" << j["r"]
        << ", m=" << j["m"] << ", q=" << j["q"] << ", alpha=" << j["alpha"] << ")\n";
}

void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << cells[c];
        }
        out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

int classic_sample_size(const Flags& f, std::ostream& out) {
    const ToleranceSpec spec(f.design.r, f.design.m, f.design.q, f.design.alpha);
    const auto res = f.method == "exact" ? exact_sample_size(spec) : scheffe_tukey_sample_size(spec);
    const json j = sample_size_json(res, f.design);
    f.pretty ? print_sample_size(out, j) : emit(out, j);
    return 0;
}

int classic_coverage(const Flags& f, std::ostream& out) {
    const auto& d = f.design;
    const double q = f.method == "exact" ? exact_coverage(d.n, d.r, d.m, d.alpha)
                                         : scheffe_tukey_coverage(d.n, d.r, d.m, d.alpha);
    json j = design_json(d, true, false);
    j["method"] = to_string(method_from_string(f.method));
    j["q"] = q;
    if (f.pretty) {
        out << "q = " << fmt(q, 10) << "  (" << f.method << ", n=" << d.n << ", r=" << d.r << ", m=" << d.m
            << ", alpha=" << d.alpha << ")\n";
    } else {
        emit(out, j);
    }
    return 0;
}

void check_fft_flags(const Flags& f, const CLI::App& cmd) {
    const auto given = cmd.count("--epsilon") + cmd.count("--cells") + cmd.count("--padding");
    if (f.method != "fft" && given > 0) throw UsageError("--epsilon, --cells and --padding need --method fft");
}

int biased_sample_size(const Flags& f, const CLI::App& cmd, std::ostream& out) {
    check_fft_flags(f, cmd);
    const QuantileMap map = load_map(f.map_source);
    const ToleranceSpec spec(f.design.r, f.design.m, f.design.q, f.design.alpha);
    const auto res =
        f.method == "fft" ? sample_size_fft(spec, map, f.fft.config()) : sample_size_inequality(spec, map);
    warn_if_small(res.n, f.design.r, f.design.m);
    json j = sample_size_json(res, f.design);
    j["map"] = {{"source", f.map_source}, {"kind", to_string(map.kind())}};
    f.pretty ? print_sample_size(out, j) : emit(out, j);
    return 0;
}

int biased_coverage(const Flags& f, const CLI::App& cmd, std::ostream& out) {
    check_fft_flags(f, cmd);
    const QuantileMap map = load_map(f.map_source);
    const auto& d = f.design;
    warn_if_small(d.n, d.r, d.m);
    const auto res = f.method == "fft" ? coverage_fft(d.n, d.r, d.m, d.alpha, map, f.fft.config())
                                       : coverage_inequality(d.n, d.r, d.m, d.alpha, map);
    json j = design_json(d, true, false);
    j["method"] = to_string(method_from_string(f.method));
    j["q"] = res.q;
    j["feasible"] = res.feasible;
    j["map"] = {{"source", f.map_source}, {"kind", to_string(map.kind())}};
    if (f.pretty) {
        out << "q = " << fmt(res.q, 10) << (res.feasible ? "" : "  [infeasible]") << "  (" << f.method
            << ", n=" << d.n << ", r=" << d.r << ", m=" << d.m << ", alpha=" << d.alpha << ")\n";
    } else {
        emit(out, j);
    }
    return 0;
}

int map_make(const Flags& f, std::ostream& out) {
    const bool mc = f.map_kind == "monte_carlo";
    if (!mc && (f.censor_opt->count() || f.draws_opt->count())) {
        throw UsageError("--censor-rate and --draws need --kind monte_carlo");
    }
    if (mc && !f.seed) throw UsageError("--seed is required for --kind monte_carlo");
    const GenGammaSpec target(f.shape, f.rate, f.delta);
    QuantileMap map = identity_map();
    if (f.map_kind == "analytic") {
        map = analytic_map(target, f.kappa, f.knots);
    } else if (mc) {
        Sampler biased;
        json meta{{"target", {{"shape", f.shape}, {"rate", f.rate}, {"delta", f.delta}}}, {"seed", *f.seed}};
        if (f.censor_rate > 0.0) {
            if (f.kappa != 1.0) throw UsageError("--censor-rate applies to length bias (--kappa 1) only");
            const double lambda = calibrate_lambda(target, f.censor_rate, derive_seed(*f.seed, 2));
            const auto drawer = observed_sampler(target, lambda, false);
            biased = [drawer](std::size_t count, std::uint64_t s) {
                return drawer(static_cast<std::int64_t>(count), s);
            };
            meta["censor_rate"] = f.censor_rate;
            meta["lambda"] = lambda;
        } else {
            const GenGammaSpec g = size_bias(target, f.kappa);
            biased = [g](std::size_t count, std::uint64_t s) { return sample(g, count, s); };
            meta["kappa"] = f.kappa;
        }
        const Sampler unbiased = [target](std::size_t count, std::uint64_t s) { return sample(target, count, s); };
        map = monte_carlo_map(unbiased, biased, f.draws, f.knots, *f.seed, meta);
    }
    if (f.output.empty()) {
        out << map.to_json() << '\n';
    } else {
        map.save(f.output);
        emit(out, {{"written", f.output},
                   {"kind", to_string(map.kind())},
                   {"knots", map.knots_p().size()},
                   {"forward_mesh", map.forward_mesh()},
                   {"inverse_mesh", map.inverse_mesh()}});
    }
    return 0;
}

json row_json(const SimRow& row) {
    json j{{"target_shape", row.target_shape},
           {"target_rate", row.target_rate},
           {"censor_rate", row.censor_rate},
           {"r", row.r},
           {"m", row.m},
           {"method", to_string(row.method)},
           {"n", row.n},
           {"coverage", std::isnan(row.coverage) ? json(nullptr) : json(row.coverage)},
           {"stderr", std::isnan(row.std_error) ? json(nullptr) : json(row.std_error)},
           {"runtime_ms", row.runtime_ms}};
    if (row.error) j["error"] = *row.error;
    return j;
}

int simulate(const Flags& f, std::ostream& out) {
    if (!f.seed) throw UsageError("--seed is required");
    SimConfig config = SimConfig::load(f.config_path);
    config.seed = *f.seed;
    if (f.replications) config.replications = *f.replications;
    if (f.events_only) config.events_only = true;
    config.validate();
    const auto rows = run_grid(config, {f.jobs, !f.no_timing});
    if (!f.output.empty()) {
        std::ostringstream csv;
        write_csv(csv, rows);
        write_text(f.output, csv.str());
        const auto failed = std::count_if(rows.begin(), rows.end(), [](const SimRow& r) { return r.error.has_value(); });
        emit(out, {{"written", f.output}, {"rows", rows.size()}, {"failed_cells", failed}});
    } else if (f.pretty) {
        std::vector<std::vector<std::string>> cells;
        for (const auto& row : rows) {
            cells.push_back({fmt(row.target_shape), fmt(row.target_rate), fmt(row.censor_rate), std::to_string(row.r),
                             std::to_string(row.m), to_string(row.method), std::to_string(row.n),
                             fmt(row.coverage), fmt(row.std_error, 2)});
        }
        print_table(out, {"shape", "rate", "censor", "r", "m", "method", "n", "coverage", "stderr"}, cells);
    } else {
        json j = json::array();
        for (const auto& row : rows) j.push_back(row_json(row));
        emit(out, j);
    }
    return 0;
}

int pilot_fit(const Flags& f, std::ostream& out) {
    const PilotSample sample = load_pilot_csv(f.data_path, parse_bias(f.bias));
    const EstimatedCDF ghat = empirical_ghat(sample);
    json j{{"records", sample.records.size()},
           {"events", sample.events()},
           {"bias", to_string(sample.declared_bias)},
           {"ghat", ghat.to_json()}};
    std::optional<EstimatedCDF> fhat;
    if (sample.declared_bias.kind == DeclaredBias::Kind::None) {
        fhat = ghat;
        j["iterations"] = 0;
    } else {
        const NpmleFit fit = fit_npmle(sample, f.tolerance, f.max_iter);
        fhat = fit.fhat;
        j["iterations"] = fit.iterations;
        j["loglik"] = fit.loglik.back();
    }
    j["fhat"] = fhat->to_json();
    if (!f.map_out.empty()) {
        pilot_map(*fhat, ghat, f.knots).save(f.map_out);
        j["map"] = f.map_out;
    }
    if (!f.output.empty()) {
        write_text(f.output, fhat->to_json().dump() + "\n");
        j["written"] = f.output;
    }
    if (f.pretty) {
        out << "records " << sample.records.size() << ", events " << sample.events() << ", bias "
            << to_string(sample.declared_bias) << ", iterations " << j["iterations"] << '\n';
        std::vector<std::vector<std::string>> cells;
        for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            cells.push_back({fmt(p, 3), fmt(ghat.quantile(p)), fmt(fhat->quantile(p))});
        }
        print_table(out, {"p", "G-hat quantile", "F-hat quantile"}, cells);
    } else {
        emit(out, j);
    }
    return 0;
}

int pilot_report(const Flags& f, std::ostream& out) {
    const PilotSample sample = load_pilot_csv(f.data_path, parse_bias(f.bias));
    const QuantileMap map = pilot_quantile_map(sample, f.knots);
    std::ostringstream csv;
    json j = json::array();
    std::vector<std::vector<std::string>> cells;
    if (f.sweep) {
        const auto rows = design_sweep(map, f.q_grid, f.confidence_grid, 1, 1, f.jobs);
        write_sweep_csv(csv, rows);
        for (const auto& row : rows) {
            j.push_back({{"q", row.q},
                         {"confidence", row.confidence},
                         {"n_scheffe", row.n_scheffe},
                         {"n_ineq", row.n_ineq},
                         {"n_fft", row.n_fft}});
            cells.push_back({fmt(row.q), fmt(row.confidence), std::to_string(row.n_scheffe),
                             std::to_string(row.n_ineq), std::to_string(row.n_fft)});
        }
    } else {
        const auto rows = design_report(map, f.r_grid, f.m_grid, f.design.q, f.design.alpha, f.jobs);
        write_design_csv(csv, rows);
        for (const auto& row : rows) {
            j.push_back({{"r", row.r},
                         {"m", row.m},
                         {"n_scheffe", row.n_scheffe},
                         {"n_ineq", row.n_ineq},
                         {"n_fft", row.n_fft}});
            cells.push_back({std::to_string(row.r), std::to_string(row.m), std::to_string(row.n_scheffe),
                             std::to_string(row.n_ineq), std::to_string(row.n_fft)});
        }
    }
    if (!f.output.empty()) {
        write_text(f.output, csv.str());
        emit(out, {{"written", f.output}, {"rows", j.size()}});
    } else if (f.pretty) {
        print_table(out,
                    f.sweep ? std::vector<std::string>{"q", "confidence", "scheffe", "ineq", "fft"}
                              : std::vector<std::string>{"r", "m", "scheffe", "ineq", "fft"},
                    cells);
    } else {
        emit(out, j);
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tolerance-interval sample sizes under biased sampling", "biastol"};
    app.require_subcommand(1);
    Flags f;

    auto* classic = app.add_subcommand("classic", "Unbiased sampling")->require_subcommand(1);
    auto* classic_ss = classic->add_subcommand("sample-size", "Smallest n for (r, m, q, alpha)");
    add_design(classic_ss, f, false, true);
    auto* classic_cov = classic->add_subcommand("coverage", "Coverage q at fixed n");
    add_design(classic_cov, f, true, false);
    for (auto* cmd : {classic_ss, classic_cov}) {
        cmd->add_option("--method", f.method, "exact or scheffe")
            ->required()
            ->check(CLI::IsMember({"exact", "scheffe"}));
    }

    auto* biased = app.add_subcommand("biased", "Biased sampling through a quantile map")->require_subcommand(1);
    auto* biased_ss = biased->add_subcommand("sample-size", "Smallest n for (r, m, q, alpha)");
    add_design(biased_ss, f, false, true);
    add_biased(biased_ss, f);
    auto* biased_cov = biased->add_subcommand("coverage", "Coverage q at fixed n");
    add_design(biased_cov, f, true, false);
    add_biased(biased_cov, f);

    auto* map_cmd = app.add_subcommand("map", "Quantile maps")->require_subcommand(1);
    auto* map_make_cmd = map_cmd->add_subcommand("make", "Build a quantile map for a Generalized Gamma target");
    map_make_cmd->add_option("--kind", f.map_kind, "analytic, monte_carlo or identity")
        ->check(CLI::IsMember({"analytic", "monte_carlo", "identity"}));
    map_make_cmd->add_option("--shape", f.shape, "Target shape")->check(CLI::PositiveNumber);
    map_make_cmd->add_option("--rate", f.rate, "Target rate")->check(CLI::PositiveNumber);
    map_make_cmd->add_option("--delta", f.delta, "Target power")->check(CLI::PositiveNumber);
    map_make_cmd->add_option("--kappa", f.kappa, "Size-bias degree")->check(CLI::NonNegativeNumber);
    map_make_cmd->add_option("--knots", f.knots, "Uniform knot count")->check(CLI::Range(2, 1000000));
    f.draws_opt = map_make_cmd->add_option("--draws", f.draws, "Monte Carlo draws per sample");
    f.censor_opt = map_make_cmd->add_option("--censor-rate", f.censor_rate, "Forward-censoring rate (monte_carlo)")
                       ->check(CLI::Range(0.0, 0.9));
    map_make_cmd->add_option("--seed", f.seed, "Master seed (monte_carlo)");
    map_make_cmd->add_option("-o,--output", f.output, "Write the map here instead of stdout");

    auto* sim_cmd = app.add_subcommand("simulate", "Empirical coverage grid");
    sim_cmd->add_option("--config", f.config_path, "TOML config")->required();
    sim_cmd->add_option("--seed", f.seed, "Master seed (overrides the config)");
    sim_cmd->add_option("-o,--output", f.output, "CSV output path");
    sim_cmd->add_option("--jobs", f.jobs, "Worker threads (0: all cores)");
    sim_cmd->add_flag("--no-timing", f.no_timing, "Write runtime_ms as 0 for byte-reproducible output");
    sim_cmd->add_option("--replications", f.replications, "Override replications")->check(CLI::Range(100, 1000000));
    sim_cmd->add_flag("--events-only", f.events_only, "Order statistics over uncensored times only");
    sim_cmd->add_flag("--pretty", f.pretty, "Human-readable output");

    auto* pilot = app.add_subcommand("pilot", "Pilot-study route")->require_subcommand(1);
    auto* pilot_fit_cmd = pilot->add_subcommand("fit", "Estimate G-hat and F-hat from a pilot CSV");
    auto* pilot_report_cmd = pilot->add_subcommand("report", "Sample sizes from a pilot CSV");
    for (auto* cmd : {pilot_fit_cmd, pilot_report_cmd}) {
        cmd->add_option("--data", f.data_path, "time,status CSV")->required();
        cmd->add_option("--bias", f.bias, "length, none or size:<kappa>");
        cmd->add_option("--knots", f.knots, "Pilot map knot count")->check(CLI::Range(2, 1000000));
        cmd->add_option("-o,--output", f.output, "Output path");
        cmd->add_flag("--pretty", f.pretty, "Human-readable output");
    }
    pilot_fit_cmd->add_option("--tolerance", f.tolerance, "EM tolerance")->check(CLI::PositiveNumber);
    pilot_fit_cmd->add_option("--max-iter", f.max_iter, "EM iteration limit")->check(CLI::PositiveNumber);
    pilot_fit_cmd->add_option("--map-out", f.map_out, "Also write the pilot quantile map");
    pilot_report_cmd->add_option("--r-grid", f.r_grid, "Lower indices")->delimiter(',')->check(CLI::PositiveNumber);
    pilot_report_cmd->add_option("--m-grid", f.m_grid, "Upper indices")->delimiter(',')->check(CLI::PositiveNumber);
    auto* q_opt = pilot_report_cmd->add_option("--q", f.design.q, "Coverage proportion")->check(CLI::Range(0.0, 1.0));
    auto* alpha_opt =
        pilot_report_cmd->add_option("--alpha", f.design.alpha, "One minus confidence")->check(CLI::Range(0.0, 1.0));
    auto* sweep_flag = pilot_report_cmd->add_flag("--sweep", f.sweep, "Sweep q and confidence at r = m = 1");
    pilot_report_cmd->add_option("--q-grid", f.q_grid, "Sweep q values")->delimiter(',')->needs(sweep_flag);
    pilot_report_cmd->add_option("--confidence-grid", f.confidence_grid, "Sweep confidence values")
        ->delimiter(',')
        ->needs(sweep_flag);
    pilot_report_cmd->add_option("--jobs", f.jobs, "Worker threads (0: all cores)");
    sweep_flag->excludes(q_opt)->excludes(alpha_opt);
    f.design.q = 0.80;
    f.design.alpha = 0.05;

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (classic_ss->parsed()) return classic_sample_size(f, out);
        if (classic_cov->parsed()) return classic_coverage(f, out);
        if (biased_ss->parsed()) return biased_sample_size(f, *biased_ss, out);
        if (biased_cov->parsed()) return biased_coverage(f, *biased_cov, out);
        if (map_make_cmd->parsed()) return map_make(f, out);
        if (sim_cmd->parsed()) return simulate(f, out);
        if (pilot_fit_cmd->parsed()) return pilot_fit(f, out);
        if (pilot_report_cmd->parsed()) return pilot_report(f, out);
        err << "no subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        emit(out, {{"error", {{"type", error_type(e)}, {"message", e.what()}}}});
        return 1;
    }
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("biastol");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("BIASTOL_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off.
        if (level == spdlog::level::off && std::string(env) != "off") {
            spdlog::warn("BIASTOL_LOG: unknown level '{}'", env);
        } else {
            spdlog::set_level(level);
        }
    }
}

}  // namespace biastol::cli
