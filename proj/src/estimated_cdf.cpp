#include "biastol/estimated_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biastol/errors.hpp"

namespace biastol {

std::string to_string(CdfKind kind) { return kind == CdfKind::Empirical ? "Empirical" : "NPMLE"; }

EstimatedCDF::EstimatedCDF(std::vector<double> support, std::vector<double> cum_probs, CdfKind kind)
    : support_(std::move(support)), cum_probs_(std::move(cum_probs)), kind_(kind) {
    if (support_.empty() || support_.size() != cum_probs_.size()) {
        throw DomainError("EstimatedCDF: support and cum_probs must be nonempty and of equal length");
    }
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (!(support_[i] > 0.0) || !std::isfinite(support_[i])) throw DomainError("EstimatedCDF: support must be positive");
        if (i > 0 && !(support_[i] > support_[i - 1])) throw DomainError("EstimatedCDF: support must be strictly increasing");
        const double c = cum_probs_[i];
        if (!(c >= 0.0 && c <= 1.0 + 1e-12)) throw DomainError("EstimatedCDF: cum_probs must lie in [0, 1]");
        if (i > 0 && c < cum_probs_[i - 1]) throw DomainError("EstimatedCDF: cum_probs must be nondecreasing");
    }
    if (std::fabs(cum_probs_.back() - 1.0) > 1e-9) throw DomainError("EstimatedCDF: cum_probs must end at 1");
    cum_probs_.back() = 1.0;
    for (auto& c : cum_probs_) c = std::min(c, 1.0);
}

EstimatedCDF EstimatedCDF::from_weighted(std::span<const double> values, std::span<const double> weights,
                                         CdfKind kind) {
    if (values.empty() || values.size() != weights.size()) {
        throw DomainError("EstimatedCDF: values and weights must be nonempty and of equal length");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> support;
    std::vector<double> mass;
    for (std::size_t idx : order) {
        if (weights[idx] < 0.0) throw DomainError("EstimatedCDF: negative weight");
        if (!support.empty() && values[idx] == support.back()) {
            mass.back() += weights[idx];
        } else {
            support.push_back(values[idx]);
            mass.push_back(weights[idx]);
        }
    }
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (!(total > 0.0)) throw DomainError("EstimatedCDF: total weight must be positive");
    std::vector<double> cum(mass.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        acc += mass[i];
        cum[i] = acc / total;
    }
    cum.back() = 1.0;
    return EstimatedCDF(std::move(support), std::move(cum), kind);
}

EstimatedCDF EstimatedCDF::from_sample(std::span<const double> values) {
    const std::vector<double> w(values.size(), 1.0);
    return from_weighted(values, w, CdfKind::Empirical);
}

double EstimatedCDF::cdf(double x) const {
    const auto it = std::upper_bound(support_.begin(), support_.end(), x);
    if (it == support_.begin()) return 0.0;
    return cum_probs_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double EstimatedCDF::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("EstimatedCDF::quantile requires 0 <= p <= 1");
    const auto it = std::lower_bound(cum_probs_.begin(), cum_probs_.end(), p);
    if (it == cum_probs_.end()) return support_.back();
    return support_[static_cast<std::size_t>(it - cum_probs_.begin())];
}

std::vector<double> EstimatedCDF::masses() const {
    std::vector<double> m(cum_probs_.size());
    std::adjacent_difference(cum_probs_.begin(), cum_probs_.end(), m.begin());
    return m;
}

nlohmann::json EstimatedCDF::to_json() const {
    return {{"support", support_}, {"cum_probs", cum_probs_}, {"kind", to_string(kind_)}};
}

EstimatedCDF EstimatedCDF::from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind != "Empirical" && kind != "NPMLE") throw FormatError("EstimatedCDF: unknown kind " + kind);
        return EstimatedCDF(j.at("support").get<std::vector<double>>(), j.at("cum_probs").get<std::vector<double>>(),
                            kind == "Empirical" ? CdfKind::Empirical : CdfKind::NPMLE);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("EstimatedCDF: ") + e.what());
    }
}

}  // namespace biastol
