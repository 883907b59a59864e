#include "biastol/quantile_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "biastol/errors.hpp"

namespace biastol {
namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("quantile map evaluated outside [0, 1]");
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    if (t == 0.0) return ys[i];
    return std::min(ys[i + 1], ys[i] + (ys[i + 1] - ys[i]) * t);
}

double max_increment(const std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) m = std::max(m, v[i] - v[i - 1]);
    return m;
}

// Continuous, piecewise-linear version of a step CDF: passes through (0, 0)
// and (x_k, F(x_k)) at every jump point.
class LinearizedCdf {
public:
    explicit LinearizedCdf(const EstimatedCDF& step) {
        xs_.reserve(step.size() + 1);
        ps_.reserve(step.size() + 1);
        xs_.push_back(0.0);
        ps_.push_back(0.0);
        for (std::size_t i = 0; i < step.size(); ++i) {
            xs_.push_back(step.support()[i]);
            ps_.push_back(step.cum_probs()[i]);
        }
    }

    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        if (x >= xs_.back()) return 1.0;
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const auto i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        return ps_[i] + (ps_[i + 1] - ps_[i]) * (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    }

    // Leftmost x with cdf(x) = p.
    double quantile(double p) const {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) {
            const auto it = std::lower_bound(ps_.begin(), ps_.end(), 1.0);
            return xs_[static_cast<std::size_t>(it - ps_.begin())];
        }
        const auto it = std::lower_bound(ps_.begin(), ps_.end(), p);
        const auto i = static_cast<std::size_t>(it - ps_.begin());
        if (ps_[i] == p) return xs_[i];
        return xs_[i - 1] + (xs_[i] - xs_[i - 1]) * (p - ps_[i - 1]) / (ps_[i] - ps_[i - 1]);
    }

private:
    std::vector<double> xs_;
    std::vector<double> ps_;
};

QuantileMap compose_estimates(MapKind kind, const EstimatedCDF& fhat, const EstimatedCDF& ghat, int knot_count,
                              nlohmann::json meta) {
    const LinearizedCdf f(fhat);
    const LinearizedCdf g(ghat);
    auto p = knot_grid(knot_count);
    std::vector<double> fwd(p.size());
    std::vector<double> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        fwd[i] = g.cdf(f.quantile(p[i]));
        inv[i] = f.cdf(g.quantile(p[i]));
    }
    fwd.front() = inv.front() = 0.0;
    fwd.back() = inv.back() = 1.0;
    return QuantileMap::from_knots(kind, std::move(p), std::move(fwd), std::move(inv), std::move(meta));
}

// Upper-tail values come from the survival function to keep full relative
// accuracy of 1 - F near 1.
double accurate_cdf(double x, const GenGammaSpec& spec) {
    const double c = gengamma_cdf(x, spec);
    return c > 0.5 ? 1.0 - gengamma_sf(x, spec) : c;
}

void append_number(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_array(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        append_number(out, v[i]);
    }
    out += ']';
}

}  // namespace

std::string to_string(MapKind kind) {
    switch (kind) {
        case MapKind::Identity: return "identity";
        case MapKind::Analytic: return "analytic";
        case MapKind::MonteCarlo: return "monte_carlo";
        case MapKind::Pilot: return "pilot";
    }
    return "unknown";
}

MapKind map_kind_from_string(std::string_view name) {
    if (name == "identity") return MapKind::Identity;
    if (name == "analytic") return MapKind::Analytic;
    if (name == "monte_carlo") return MapKind::MonteCarlo;
    if (name == "pilot") return MapKind::Pilot;
    throw FormatError("unknown quantile map kind: " + std::string(name));
}

QuantileMap QuantileMap::from_knots(MapKind kind, std::vector<double> knots_p, std::vector<double> forward,
                                    std::vector<double> inverse, nlohmann::json meta) {
    const std::size_t n = knots_p.size();
    if (n < 2 || forward.size() != n || inverse.size() != n) {
        throw DomainError("quantile map needs at least two knots and equal-length knot lists");
    }
    if (knots_p.front() != 0.0 || knots_p.back() != 1.0) throw DomainError("quantile map knots must span [0, 1]");
    if (forward.front() != 0.0 || forward.back() != 1.0 || inverse.front() != 0.0 || inverse.back() != 1.0) {
        throw DomainError("quantile map values must be pinned to 0 and 1 at the endpoints");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(knots_p[i] > knots_p[i - 1])) throw DomainError("quantile map knots must be strictly increasing");
        if (!(forward[i] >= forward[i - 1]) || !(inverse[i] >= inverse[i - 1])) {
            throw DomainError("quantile map values must be nondecreasing");
        }
    }
    auto data = std::make_shared<Data>(Data{kind, std::move(knots_p), std::move(forward), std::move(inverse),
                                            std::move(meta), 0.0, 0.0});
    data->forward_mesh = max_increment(data->forward);
    data->inverse_mesh = max_increment(data->inverse);
    QuantileMap map(data);

    constexpr double slack = 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = data->knots_p[i];
        if (std::fabs(map.eval(data->inverse[i]) - p) > data->forward_mesh + slack ||
            std::fabs(map.inverse_eval(data->forward[i]) - p) > data->inverse_mesh + slack) {
            throw DomainError("quantile map forward and inverse knots are inconsistent");
        }
    }
    return map;
}

double QuantileMap::eval(double z) const { return interpolate(data_->knots_p, data_->forward, z); }

double QuantileMap::inverse_eval(double p) const { return interpolate(data_->knots_p, data_->inverse, p); }

std::string QuantileMap::to_json() const {
    std::string out = "{\"kind\": \"" + to_string(kind()) + "\", \"knots_p\": ";
    append_array(out, data_->knots_p);
    out += ", \"knots_v_forward\": ";
    append_array(out, data_->forward);
    out += ", \"knots_v_inverse\": ";
    append_array(out, data_->inverse);
    out += ", \"meta\": " + data_->meta.dump() + "}\n";
    return out;
}

QuantileMap QuantileMap::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        const MapKind kind = map_kind_from_string(j.at("kind").get<std::string>());
        nlohmann::json meta = j.contains("meta") ? j.at("meta") : nlohmann::json::object();
        return from_knots(kind, j.at("knots_p").get<std::vector<double>>(),
                          j.at("knots_v_forward").get<std::vector<double>>(),
                          j.at("knots_v_inverse").get<std::vector<double>>(), std::move(meta));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("quantile map JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw FormatError(std::string("quantile map JSON: ") + e.what());
    }
}

QuantileMap QuantileMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open quantile map file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void QuantileMap::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write quantile map file: " + path);
    out << to_json();
}

std::vector<double> knot_grid(int knot_count) {
    if (knot_count < 2) throw DomainError("knot_count must be at least 2");
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(knot_count) + 80);
    for (int i = 0; i < knot_count; ++i) p.push_back(static_cast<double>(i) / (knot_count - 1));
    p.back() = 1.0;
    // Four points per decade from 1e-10 to 1e-2, mirrored.
    for (int e = -40; e <= -8; ++e) {
        const double t = std::pow(10.0, e / 4.0);
        p.push_back(t);
        p.push_back(1.0 - t);
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

QuantileMap identity_map() {
    return QuantileMap::from_knots(MapKind::Identity, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0});
}

QuantileMap analytic_map(const GenGammaSpec& target, double kappa, int knot_count) {
    const GenGammaSpec biased = size_bias(target, kappa);
    auto p = knot_grid(knot_count);
    std::vector<double> fwd(p.size());
    std::vector<double> inv(p.size());
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        fwd[i] = accurate_cdf(gengamma_quantile(p[i], target), biased);
        inv[i] = accurate_cdf(gengamma_quantile(p[i], biased), target);
    }
    fwd.front() = inv.front() = 0.0;
    fwd.back() = inv.back() = 1.0;
    nlohmann::json meta = {
        {"target", {{"shape", target.shape}, {"rate", target.rate}, {"delta", target.delta}}},
        {"kappa", kappa},
        {"knot_count", knot_count},
    };
    return QuantileMap::from_knots(MapKind::Analytic, std::move(p), std::move(fwd), std::move(inv), std::move(meta));
}

QuantileMap monte_carlo_map(const Sampler& target_sampler, const Sampler& biased_sampler, std::size_t draws,
                            int knot_count, std::uint64_t seed, nlohmann::json meta) {
    if (knot_count < 2) throw DomainError("knot_count must be at least 2");
    if (draws < 10 * static_cast<std::size_t>(knot_count)) {
        throw DomainError("monte_carlo_map: insufficient draws (need at least 10 * knot_count)");
    }
    const auto fx = target_sampler(draws, derive_seed(seed, 0));
    const auto gx = biased_sampler(draws, derive_seed(seed, 1));
    if (fx.size() != draws || gx.size() != draws) throw DomainError("monte_carlo_map: sampler returned wrong count");
    if (!meta.is_object()) meta = nlohmann::json::object();
    meta["draws"] = draws;
    meta["seed"] = seed;
    meta["knot_count"] = knot_count;
    return compose_estimates(MapKind::MonteCarlo, EstimatedCDF::from_sample(fx), EstimatedCDF::from_sample(gx),
                             knot_count, std::move(meta));
}

QuantileMap pilot_map(const EstimatedCDF& fhat, const EstimatedCDF& ghat, int knot_count) {
    if (fhat.size() < 2 || ghat.size() < 2) {
        throw DomainError("pilot_map: estimates need at least two support points");
    }
    nlohmann::json meta = {
        {"fhat_kind", to_string(fhat.kind())},
        {"fhat_support_points", fhat.size()},
        {"ghat_support_points", ghat.size()},
        {"knot_count", knot_count},
    };
    return compose_estimates(MapKind::Pilot, fhat, ghat, knot_count, std::move(meta));
}

QuantileMap compose(const QuantileMap& outer, const QuantileMap& inner) {
    std::vector<double> p = inner.knots_p();
    p.insert(p.end(), outer.knots_p().begin(), outer.knots_p().end());
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    std::vector<double> fwd(p.size());
    std::vector<double> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        fwd[i] = outer.eval(inner.eval(p[i]));
        inv[i] = inner.inverse_eval(outer.inverse_eval(p[i]));
    }
    const MapKind kind = outer.kind() == MapKind::Identity ? inner.kind() : outer.kind();
    nlohmann::json meta = {{"composed", {outer.meta(), inner.meta()}}};
    return QuantileMap::from_knots(kind, std::move(p), std::move(fwd), std::move(inv), std::move(meta));
}

}  // namespace biastol
