#pragma once

#include <cstdint>
#include <vector>

#include "biastol/random.hpp"

namespace biastol {

/// Shape parameters of a Beta(a, b) law. Construction validates a, b > 0.
struct BetaParams {
    double a;
    double b;

    BetaParams(double a_, double b_);
};

/// Generalized Gamma with density
///   f(x) = delta * rate^shape / Gamma(shape/delta) * x^(shape-1) * exp(-(rate*x)^delta)
/// for x > 0. delta = 1 is the ordinary Gamma(shape, rate) law.
struct GenGammaSpec {
    double shape;  // alpha
    double rate;   // beta, inverse time units
    double delta;

    GenGammaSpec(double shape_, double rate_, double delta_ = 1.0);

    /// Gamma shape of (rate * X)^delta.
    double transformed_shape() const noexcept { return shape / delta; }
    double mean() const noexcept;
    double variance() const noexcept;

    friend bool operator==(const GenGammaSpec&, const GenGammaSpec&) = default;
};

/// log Gamma(x) for x > 0 (reentrant).
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), without cancellation.
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double pbeta(double x, const BetaParams& p);
/// Beta density.
double dbeta(double x, const BetaParams& p);
/// Inverse of pbeta in x.
double qbeta(double prob, const BetaParams& p);

/// prob-quantile of the Chi-square law with `df` degrees of freedom.
double chisq_quantile(double prob, int df);

double gengamma_pdf(double x, const GenGammaSpec& spec);
double gengamma_cdf(double x, const GenGammaSpec& spec);
/// Survival 1 - cdf, computed directly in the upper tail.
double gengamma_sf(double x, const GenGammaSpec& spec);
/// Inverse CDF; prob = 1 is rejected (unbounded support).
double gengamma_quantile(double prob, const GenGammaSpec& spec);

/// Law of the size-biased density x^kappa f(x) / E[X^kappa]: the family is
/// closed, with shape advanced by kappa.
GenGammaSpec size_bias(const GenGammaSpec& spec, double kappa);

/// One draw using an existing generator.
double draw(const GenGammaSpec& spec, Rng& rng);
/// `count` reproducible draws from a generator seeded with `seed`.
std::vector<double> sample(const GenGammaSpec& spec, std::size_t count, std::uint64_t seed);

}  // namespace biastol
