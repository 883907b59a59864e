#pragma once

#include <cstdint>

#include "biastol/quantile_map.hpp"
#include "biastol/tolerance_classic.hpp"

namespace biastol {

/// Two-sided coverage value. `q` is reported as computed and may be negative
/// for small n; `feasible` is q > 0.
struct CoverageResult {
    double q;
    bool feasible;
};

inline constexpr std::int64_t kDefaultSampleSizeCap = 10'000'000;

/// Conservative two-sided coverage from two one-sided problems, each at
/// confidence sqrt(1 - alpha):  q = q_m - (1 - q_r).
/// InfeasibleError if n <= r + m or a one-sided ratio is negative.
CoverageResult coverage_inequality(std::int64_t n, int r, int m, double alpha, const QuantileMap& map);

/// Smallest n > r + m with coverage_inequality(n) >= spec.q.
SampleSizeResult sample_size_inequality(const ToleranceSpec& spec, const QuantileMap& map,
                                        std::int64_t cap = kDefaultSampleSizeCap);

}  // namespace biastol
