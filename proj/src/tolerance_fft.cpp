#include "biastol/tolerance_fft.hpp"

#include <chrono>

#include "biastol/detail/integer_search.hpp"
#include "biastol/errors.hpp"

namespace biastol {

CoverageResult coverage_fft(std::int64_t n, int r, int m, double alpha, const QuantileMap& map,
                            const FFTConfig& config) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const double q = difference_law(n, r, m, map, config).density.quantile(alpha);
    return {q, q > 0.0};
}

SampleSizeResult sample_size_fft(const ToleranceSpec& spec, const QuantileMap& map, const FFTConfig& config,
                                 std::int64_t cap) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    auto accept = [&](std::int64_t n) { return coverage_fft(n, spec.r, spec.m, spec.alpha, map, config).q >= spec.q; };
    const auto found = detail::smallest_accepted(spec.k() + 1, cap, accept);
    const auto law = difference_law(found.n, spec.r, spec.m, map, config);
    const double achieved = law.density.quantile(spec.alpha);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json diag = law.diagnostics;
    diag["evaluations"] = found.evaluations + 1;
    diag["wall_ms"] = wall_ms;
    return {found.n, Method::FFT, achieved, std::move(diag)};
}

}  // namespace biastol
