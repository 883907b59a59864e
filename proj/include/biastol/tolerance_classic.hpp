#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace biastol {

/// Two-sided tolerance design: the interval (Y_r, Y_{n+1-m}) should cover at
/// least a proportion q of the target population with confidence 1 - alpha.
struct ToleranceSpec {
    int r;
    int m;
    double q;
    double alpha;

    ToleranceSpec(int r_, int m_, double q_, double alpha_);

    int k() const noexcept { return r + m; }
};

enum class Method { ExactBeta, ScheffeTukey, Inequality, FFT };

std::string to_string(Method method);
Method method_from_string(std::string_view name);

struct SampleSizeResult {
    std::int64_t n;
    Method method;
    /// Confidence reached at n for ExactBeta; coverage proportion reached at n
    /// for the other methods.
    double achieved;
    nlohmann::json diagnostics = nlohmann::json::object();
};

/// Smallest n >= r + m with pbeta(1 - q; k, n + 1 - k) >= 1 - alpha.
SampleSizeResult exact_sample_size(const ToleranceSpec& spec);

/// Closed-form approximation n = ceil(x (1 + q) / (4 (1 - q)) + (k - 1) / 2)
/// with x the (1 - alpha)-quantile of Chi-square(2k). Values below k are
/// raised to k and flagged in diagnostics["clamped"].
SampleSizeResult scheffe_tukey_sample_size(const ToleranceSpec& spec);

/// q = 1 - qbeta(1 - alpha; k, n + 1 - k). InfeasibleError if n < k.
double exact_coverage(std::int64_t n, int r, int m, double alpha);

/// Closed-form coverage. InfeasibleError if n < k or the result is <= 0.
double scheffe_tukey_coverage(std::int64_t n, int r, int m, double alpha);

/// (n - (j-1)/2 - x/4) / (n - (j-1)/2 + x/4); may be negative for small n.
double scheffe_tukey_ratio(double n, int j, double x);

}  // namespace biastol
