#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "biastol/distributions.hpp"
#include "biastol/estimated_cdf.hpp"
#include "json.hpp"

namespace biastol {

enum class MapKind { Identity, Analytic, MonteCarlo, Pilot };

std::string to_string(MapKind kind);
MapKind map_kind_from_string(std::string_view name);

inline constexpr int kDefaultKnotCount = 1001;
inline constexpr std::size_t kDefaultMonteCarloDraws = 1'000'000;

/// The pair of quantile mappings
///   forward  Phi     = G o F^-1  (target probability -> sampling probability)
///   inverse  Phi^-1  = F o G^-1  (sampling probability -> target probability)
/// stored as piecewise-linear interpolants on a shared probability grid.
///
/// Both directions are tabulated, so evaluation either way is a binary search
/// plus one interpolation. All sampling bias enters the tolerance solvers
/// through this object. Immutable; copies share the knot storage.
class QuantileMap {
public:
    /// Validates the knot invariants (endpoints pinned at 0 and 1, strictly
    /// increasing abscissae, monotone values) and the mutual consistency of the
    /// two directions; throws DomainError on violation.
    static QuantileMap from_knots(MapKind kind, std::vector<double> knots_p, std::vector<double> forward,
                                  std::vector<double> inverse, nlohmann::json meta = nlohmann::json::object());

    /// Phi(z).
    double eval(double z) const;
    /// Phi^-1(p).
    double inverse_eval(double p) const;

    MapKind kind() const noexcept { return data_->kind; }
    const std::vector<double>& knots_p() const noexcept { return data_->knots_p; }
    const std::vector<double>& knots_forward() const noexcept { return data_->forward; }
    const std::vector<double>& knots_inverse() const noexcept { return data_->inverse; }
    const nlohmann::json& meta() const noexcept { return data_->meta; }

    /// Largest increment between consecutive forward (resp. inverse) knot
    /// values; bounds the round-trip error of inverse_eval then eval (resp.
    /// eval then inverse_eval) at the knots.
    double forward_mesh() const noexcept { return data_->forward_mesh; }
    double inverse_mesh() const noexcept { return data_->inverse_mesh; }

    /// Serialized form: {"kind", "knots_p", "knots_v_forward", "knots_v_inverse", "meta"}
    /// with numbers written to 17 significant digits.
    std::string to_json() const;
    static QuantileMap from_json(std::string_view text);
    static QuantileMap load(const std::string& path);
    void save(const std::string& path) const;

private:
    struct Data {
        MapKind kind;
        std::vector<double> knots_p;
        std::vector<double> forward;
        std::vector<double> inverse;
        nlohmann::json meta;
        double forward_mesh;
        double inverse_mesh;
    };
    explicit QuantileMap(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
};

/// Uniform grid of `knot_count` points on [0, 1] augmented with geometrically
/// spaced points in the tails (1e-10 ... 1e-2 and mirrored near 1).
std::vector<double> knot_grid(int knot_count);

/// Phi = identity (unbiased sampling, G = F).
QuantileMap identity_map();

/// Exact map for a generalized gamma target under size bias of degree kappa,
/// G = size_bias(target, kappa).
QuantileMap analytic_map(const GenGammaSpec& target, double kappa, int knot_count = kDefaultKnotCount);

/// Draws `count` values from a reproducible stream identified by `seed`.
using Sampler = std::function<std::vector<double>(std::size_t count, std::uint64_t seed)>;

/// Map estimated from `draws` samples of each law. Samplers must produce
/// positive values. Requires draws >= 10 * knot_count.
QuantileMap monte_carlo_map(const Sampler& target_sampler, const Sampler& biased_sampler, std::size_t draws,
                            int knot_count, std::uint64_t seed, nlohmann::json meta = nlohmann::json::object());

/// Map from pilot-study estimates: Phi^-1 = Fhat o Ghat^-1 with both step
/// CDFs linearized between jump points (starting from (0, 0)).
QuantileMap pilot_map(const EstimatedCDF& fhat, const EstimatedCDF& ghat, int knot_count = kDefaultKnotCount);

/// Phi = outer.Phi o inner.Phi on the union of both knot grids.
QuantileMap compose(const QuantileMap& outer, const QuantileMap& inner);

}  // namespace biastol
