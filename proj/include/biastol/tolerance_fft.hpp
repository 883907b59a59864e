#pragma once

#include <cstdint>

#include "biastol/fft_conv.hpp"
#include "biastol/tolerance_inequality.hpp"

namespace biastol {

/// alpha-quantile of the discretized law of F(Y_{n+1-m}) - F(Y_r).
CoverageResult coverage_fft(std::int64_t n, int r, int m, double alpha, const QuantileMap& map,
                            const FFTConfig& config = {});

/// Smallest n > r + m with coverage_fft(n) >= spec.q. Diagnostics carry the
/// number of coverage evaluations, wall time, and the final grid.
SampleSizeResult sample_size_fft(const ToleranceSpec& spec, const QuantileMap& map, const FFTConfig& config = {},
                                 std::int64_t cap = kDefaultSampleSizeCap);

}  // namespace biastol
