#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace biastol {

enum class CdfKind { Empirical, NPMLE };

std::string to_string(CdfKind kind);

/// Right-continuous step CDF on a strictly increasing positive support.
/// Quantiles use the left-continuous generalized inverse inf{x : F(x) >= p}.
class EstimatedCDF {
public:
    EstimatedCDF(std::vector<double> support, std::vector<double> cum_probs, CdfKind kind);

    /// Builds a CDF from (value, weight) pairs: sorts, merges tied values by
    /// summing their weights, and normalizes.
    static EstimatedCDF from_weighted(std::span<const double> values, std::span<const double> weights,
                                      CdfKind kind);
    /// Equal-weight empirical CDF of a sample.
    static EstimatedCDF from_sample(std::span<const double> values);

    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& cum_probs() const noexcept { return cum_probs_; }
    CdfKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return support_.size(); }

    double cdf(double x) const;
    double quantile(double p) const;
    /// Point masses (successive differences of cum_probs).
    std::vector<double> masses() const;

    nlohmann::json to_json() const;
    static EstimatedCDF from_json(const nlohmann::json& j);

private:
    std::vector<double> support_;
    std::vector<double> cum_probs_;
    CdfKind kind_;
};

}  // namespace biastol
