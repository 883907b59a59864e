#include "biastol/distributions.hpp"

#include <math.h>

#include <cmath>
#include <limits>
#include <string>

#include "biastol/errors.hpp"

namespace biastol {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxSeriesIter = 200000;

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxSeriesIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) return h;
    }
    throw NonConvergenceError("incomplete beta continued fraction did not converge");
}

// Series for P(a, x), valid for x < a + 1.
double gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < kMaxSeriesIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
        }
    }
    throw NonConvergenceError("incomplete gamma series did not converge");
}

// Continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxSeriesIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) {
            return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
        }
    }
    throw NonConvergenceError("incomplete gamma continued fraction did not converge");
}

double gamma_density(double u, double shape) {
    if (u <= 0.0) return shape < 1.0 ? std::numeric_limits<double>::infinity() : (shape == 1.0 ? 1.0 : 0.0);
    return std::exp((shape - 1.0) * std::log(u) - u - log_gamma(shape));
}

// Solves P(shape, u) = prob for u by safeguarded Newton iteration.
double gamma_quantile(double prob, double shape) {
    if (prob == 0.0) return 0.0;
    const bool upper = prob > 0.5;
    const double target = upper ? 1.0 - prob : prob;
    // Both branches of the residual increase with u.
    auto residual = [&](double u) {
        return upper ? target - gamma_q(shape, u) : gamma_p(shape, u) - target;
    };

    double lo = 0.0;
    double hi = shape + 40.0 * std::sqrt(shape);
    while (residual(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NonConvergenceError("gamma quantile bracket overflow");
    }

    // Small-u expansion P(s, u) ~ u^s / Gamma(s + 1) for the lower tail, else the mean.
    double u = prob < 0.1 ? std::exp((std::log(prob) + log_gamma(shape + 1.0)) / shape) : shape;
    if (!(u > lo && u < hi)) u = 0.5 * (lo + hi);

    for (int iter = 0; iter < 500; ++iter) {
        const double f = residual(u);
        if (f == 0.0) return u;
        if (f < 0.0) lo = u; else hi = u;
        const double dens = gamma_density(u, shape);
        double next = (dens > 0.0 && std::isfinite(dens)) ? u - f / dens : lo - 1.0;
        if (!(next > lo && next < hi)) {
            next = (lo > 0.0 && hi / lo > 1e3) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        }
        if (std::fabs(next - u) <= 4.0 * kEps * next || hi - lo <= 4.0 * kEps * hi) return next;
        u = next;
    }
    throw NonConvergenceError("gamma quantile did not converge");
}

}  // namespace

BetaParams::BetaParams(double a_, double b_) : a(a_), b(b_) {
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "Beta parameters must be positive and finite");
}

GenGammaSpec::GenGammaSpec(double shape_, double rate_, double delta_)
    : shape(shape_), rate(rate_), delta(delta_) {
    require(shape > 0.0 && rate > 0.0 && delta > 0.0 && std::isfinite(shape) &&
                std::isfinite(rate) && std::isfinite(delta),
            "generalized gamma parameters must be positive and finite");
}

double GenGammaSpec::mean() const noexcept {
    return std::exp(log_gamma((shape + 1.0) / delta) - log_gamma(shape / delta)) / rate;
}

double GenGammaSpec::variance() const noexcept {
    const double m2 = std::exp(log_gamma((shape + 2.0) / delta) - log_gamma(shape / delta)) / (rate * rate);
    const double m = mean();
    return m2 - m * m;
}

double log_gamma(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double gamma_p(double a, double x) {
    require(a > 0.0, "incomplete gamma requires a > 0");
    require(x >= 0.0, "incomplete gamma requires x >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
    require(a > 0.0, "incomplete gamma requires a > 0");
    require(x >= 0.0, "incomplete gamma requires x >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_continued_fraction(a, x);
}

double pbeta(double x, const BetaParams& p) {
    require(x >= 0.0 && x <= 1.0, "pbeta requires 0 <= x <= 1");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = p.a * std::log(x) + p.b * std::log1p(-x) - log_beta(p.a, p.b);
    const double front = std::exp(log_front);
    if (x < (p.a + 1.0) / (p.a + p.b + 2.0)) {
        return front * beta_continued_fraction(x, p.a, p.b) / p.a;
    }
    return 1.0 - front * beta_continued_fraction(1.0 - x, p.b, p.a) / p.b;
}

double dbeta(double x, const BetaParams& p) {
    require(x >= 0.0 && x <= 1.0, "dbeta requires 0 <= x <= 1");
    const double inf = std::numeric_limits<double>::infinity();
    if (x == 0.0) return p.a < 1.0 ? inf : (p.a == 1.0 ? std::exp(-log_beta(p.a, p.b)) : 0.0);
    if (x == 1.0) return p.b < 1.0 ? inf : (p.b == 1.0 ? std::exp(-log_beta(p.a, p.b)) : 0.0);
    return std::exp((p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x) - log_beta(p.a, p.b));
}

double qbeta(double prob, const BetaParams& p) {
    require(prob >= 0.0 && prob <= 1.0, "qbeta requires 0 <= prob <= 1");
    if (prob == 0.0) return 0.0;
    if (prob == 1.0) return 1.0;

    const double lb = log_beta(p.a, p.b);
    const double mean = p.a / (p.a + p.b);
    double lo = 0.0;
    double hi = 1.0;
    // Leading tail terms: I_x ~ x^a / (a B) near 0 and 1 - I_x ~ (1-x)^b / (b B) near 1.
    double x;
    if (prob < pbeta(mean, p)) {
        x = std::exp((std::log(prob) + std::log(p.a) + lb) / p.a);
        if (!(x > 0.0 && x < mean)) x = 0.5 * mean;
    } else {
        x = 1.0 - std::exp((std::log1p(-prob) + std::log(p.b) + lb) / p.b);
        if (!(x > mean && x < 1.0)) x = 0.5 * (1.0 + mean);
    }

    // Near the endpoints the answer may be pinned by double spacing; keep the
    // iterate with the smallest residual.
    double best = x;
    double best_resid = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 1000; ++iter) {
        const double f = pbeta(x, p) - prob;
        if (std::fabs(f) < best_resid) {
            best_resid = std::fabs(f);
            best = x;
        }
        if (f == 0.0) return x;
        if (f < 0.0) lo = x; else hi = x;
        const double dens = dbeta(x, p);
        double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : -1.0;
        if (!(next > lo && next < hi)) {
            if (lo > 0.0 && hi / lo > 1e3) {
                next = std::sqrt(lo * hi);
            } else if (hi < 1.0 && lo < 1.0 && (1.0 - lo) / (1.0 - hi) > 1e3) {
                next = 1.0 - std::sqrt((1.0 - lo) * (1.0 - hi));
            } else {
                next = 0.5 * (lo + hi);
            }
        }
        const double scale = std::max(std::min(next, 1.0 - next), kTiny);
        if (next == x || std::nextafter(lo, 1.0) >= hi || std::fabs(next - x) <= 2.0 * kEps * scale) {
            const double fn = std::fabs(pbeta(next, p) - prob);
            return fn < best_resid ? next : best;
        }
        x = next;
    }
    if (best_resid <= 1e-12) return best;
    throw NonConvergenceError("qbeta did not converge");
}

double chisq_quantile(double prob, int df) {
    require(prob > 0.0 && prob < 1.0, "chisq_quantile requires 0 < prob < 1");
    require(df >= 1, "chisq_quantile requires df >= 1");
    return 2.0 * gamma_quantile(prob, 0.5 * df);
}

double gengamma_pdf(double x, const GenGammaSpec& spec) {
    require(x >= 0.0, "gengamma_pdf requires x >= 0");
    if (x == 0.0) {
        if (spec.shape < 1.0) return std::numeric_limits<double>::infinity();
        if (spec.shape > 1.0) return 0.0;
        return std::exp(std::log(spec.delta) + std::log(spec.rate) - log_gamma(spec.transformed_shape()));
    }
    const double log_f = std::log(spec.delta) + spec.shape * std::log(spec.rate) -
                         log_gamma(spec.transformed_shape()) + (spec.shape - 1.0) * std::log(x) -
                         std::pow(spec.rate * x, spec.delta);
    return std::exp(log_f);
}

double gengamma_cdf(double x, const GenGammaSpec& spec) {
    require(x >= 0.0, "gengamma_cdf requires x >= 0");
    if (x == 0.0) return 0.0;
    const double u = spec.delta == 1.0 ? spec.rate * x : std::pow(spec.rate * x, spec.delta);
    return gamma_p(spec.transformed_shape(), u);
}

double gengamma_sf(double x, const GenGammaSpec& spec) {
    require(x >= 0.0, "gengamma_sf requires x >= 0");
    if (x == 0.0) return 1.0;
    const double u = spec.delta == 1.0 ? spec.rate * x : std::pow(spec.rate * x, spec.delta);
    return gamma_q(spec.transformed_shape(), u);
}

double gengamma_quantile(double prob, const GenGammaSpec& spec) {
    require(prob >= 0.0 && prob <= 1.0, "gengamma_quantile requires 0 <= prob < 1");
    if (prob == 1.0) throw DomainError("gengamma_quantile: quantile at probability 1 is unbounded");
    if (prob == 0.0) return 0.0;
    const double u = gamma_quantile(prob, spec.transformed_shape());
    return (spec.delta == 1.0 ? u : std::pow(u, 1.0 / spec.delta)) / spec.rate;
}

GenGammaSpec size_bias(const GenGammaSpec& spec, double kappa) {
    require(kappa > 0.0 && std::isfinite(kappa), "size_bias requires kappa > 0");
    return GenGammaSpec(spec.shape + kappa, spec.rate, spec.delta);
}

double draw(const GenGammaSpec& spec, Rng& rng) {
    const double g = rng.gamma(spec.transformed_shape());
    return (spec.delta == 1.0 ? g : std::pow(g, 1.0 / spec.delta)) / spec.rate;
}

std::vector<double> sample(const GenGammaSpec& spec, std::size_t count, std::uint64_t seed) {
    require(count >= 1, "sample requires count >= 1");
    Rng rng(seed);
    std::vector<double> out(count);
    for (auto& v : out) v = draw(spec, rng);
    return out;
}

}  // namespace biastol
