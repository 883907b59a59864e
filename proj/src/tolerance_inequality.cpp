#include "biastol/tolerance_inequality.hpp"

#include <cmath>

#include "biastol/detail/integer_search.hpp"
#include "biastol/errors.hpp"
#include "biastol/order_stats.hpp"

namespace biastol {

CoverageResult coverage_inequality(std::int64_t n, int r, int m, double alpha, const QuantileMap& map) {
    if (r < 1 || m < 1) throw DomainError("r and m must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (n <= r + m) throw InfeasibleError("inequality coverage needs n > r + m");
    const double split = 1.0 - std::sqrt(1.0 - alpha);
    const double q = one_sided_upper(n, m, split, map) - (1.0 - one_sided_lower(n, r, split, map));
    return {q, q > 0.0};
}

SampleSizeResult sample_size_inequality(const ToleranceSpec& spec, const QuantileMap& map, std::int64_t cap) {
    auto accept = [&](std::int64_t n) {
        try {
            return coverage_inequality(n, spec.r, spec.m, spec.alpha, map).q >= spec.q;
        } catch (const InfeasibleError&) {
            return false;
        }
    };
    const auto found = detail::smallest_accepted(spec.k() + 1, cap, accept);
    const double achieved = coverage_inequality(found.n, spec.r, spec.m, spec.alpha, map).q;
    return {found.n, Method::Inequality, achieved, {{"evaluations", found.evaluations}}};
}

}  // namespace biastol
