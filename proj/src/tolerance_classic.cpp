#include "biastol/tolerance_classic.hpp"

#include <algorithm>
#include <cmath>

#include "biastol/detail/integer_search.hpp"
#include "biastol/distributions.hpp"
#include "biastol/errors.hpp"

namespace biastol {
namespace {

constexpr std::int64_t kSearchCap = 10'000'000;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void check_order(std::int64_t n, int r, int m) {
    if (r < 1 || m < 1) throw DomainError("r and m must be positive");
    if (n < r + m) throw InfeasibleError("sample size n must be at least r + m");
}

}  // namespace

ToleranceSpec::ToleranceSpec(int r_, int m_, double q_, double alpha_) : r(r_), m(m_), q(q_), alpha(alpha_) {
    if (r < 1 || m < 1) throw DomainError("r and m must be positive integers");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0, 1)");
    check_alpha(alpha);
}

std::string to_string(Method method) {
    switch (method) {
        case Method::ExactBeta: return "exact";
        case Method::ScheffeTukey: return "scheffe";
        case Method::Inequality: return "ineq";
        case Method::FFT: return "fft";
    }
    return "unknown";
}

Method method_from_string(std::string_view name) {
    if (name == "exact") return Method::ExactBeta;
    if (name == "scheffe") return Method::ScheffeTukey;
    if (name == "ineq") return Method::Inequality;
    if (name == "fft") return Method::FFT;
    throw DomainError("unknown method: " + std::string(name));
}

SampleSizeResult exact_sample_size(const ToleranceSpec& spec) {
    const int k = spec.k();
    const double target = 1.0 - spec.alpha;
    auto confidence = [&](std::int64_t n) { return pbeta(1.0 - spec.q, {double(k), double(n + 1 - k)}); };
    const auto found = detail::smallest_accepted(k, kSearchCap, [&](std::int64_t n) { return confidence(n) >= target; });
    return {found.n, Method::ExactBeta, confidence(found.n), {{"evaluations", found.evaluations}}};
}

SampleSizeResult scheffe_tukey_sample_size(const ToleranceSpec& spec) {
    const int k = spec.k();
    const double x = chisq_quantile(1.0 - spec.alpha, 2 * k);
    const double raw = 0.25 * x * (1.0 + spec.q) / (1.0 - spec.q) + 0.5 * (k - 1);
    auto n = static_cast<std::int64_t>(std::ceil(raw));
    const bool clamped = n < k;
    if (clamped) n = k;
    const double ratio = scheffe_tukey_ratio(double(n), k, x);
    return {n, Method::ScheffeTukey, std::max(ratio, 0.0), {{"chisq", x}, {"raw", raw}, {"clamped", clamped}}};
}

double exact_coverage(std::int64_t n, int r, int m, double alpha) {
    check_order(n, r, m);
    check_alpha(alpha);
    const int k = r + m;
    return 1.0 - qbeta(1.0 - alpha, {double(k), double(n + 1 - k)});
}

double scheffe_tukey_coverage(std::int64_t n, int r, int m, double alpha) {
    check_order(n, r, m);
    check_alpha(alpha);
    const int k = r + m;
    const double q = scheffe_tukey_ratio(double(n), k, chisq_quantile(1.0 - alpha, 2 * k));
    if (!(q > 0.0)) throw InfeasibleError("Scheffe-Tukey coverage is not positive at this sample size");
    return q;
}

double scheffe_tukey_ratio(double n, int j, double x) {
    const double base = n - 0.5 * (j - 1);
    return (base - 0.25 * x) / (base + 0.25 * x);
}

}  // namespace biastol
