#include "biastol/fft_conv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numeric>

#include "biastol/errors.hpp"

namespace biastol {
namespace {

// FFTW's planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {}
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

double GridDensity::total() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

double GridDensity::cdf(double x) const {
    if (x <= origin) return 0.0;
    if (x >= upper()) return total();
    const double pos = (x - origin) / step;
    const auto i = std::min(static_cast<std::size_t>(pos), masses.size() - 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < i; ++k) acc += masses[k];
    return acc + masses[i] * (pos - static_cast<double>(i));
}

double GridDensity::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("GridDensity::quantile requires 0 <= p <= 1");
    const double target = p * total();
    if (target <= 0.0) return origin;
    double acc = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double m = masses[i];
        if (m > 0.0 && acc + m >= target) {
            const double frac = std::clamp((target - acc) / m, 0.0, 1.0);
            return origin + (static_cast<double>(i) + frac) * step;
        }
        acc += m;
    }
    // Rounding left the running sum just short of the target: last occupied cell edge.
    for (std::size_t i = masses.size(); i-- > 0;) {
        if (masses[i] > 0.0) return origin + static_cast<double>(i + 1) * step;
    }
    return origin;
}

GridDensity GridDensity::reflect() const {
    GridDensity out{-upper(), step, std::vector<double>(masses.rbegin(), masses.rend())};
    return out;
}

GridDensity GridDensity::normalized() const {
    const double t = total();
    if (!(t > 0.0)) throw DomainError("cannot normalize a grid density with zero mass");
    GridDensity out = *this;
    for (auto& m : out.masses) m /= t;
    return out;
}

void FFTConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1e-4)) throw DomainError("FFT epsilon must lie in (0, 1e-4]");
    if (target_cells < 64) throw DomainError("FFT target_cells must be at least 64");
}

std::pair<double, double> support_bounds(const OrderStatLaw& law, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("support_bounds requires 0 < epsilon < 1");
    return {hquantile(law, 0.5 * epsilon), hquantile(law, 1.0 - 0.5 * epsilon)};
}

GridSpan GridSpan::covering(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw DomainError("GridSpan needs step > 0 and lo <= hi");
    auto begin = static_cast<std::int64_t>(std::floor(lo / step));
    auto end = static_cast<std::int64_t>(std::ceil(hi / step));
    if (end == begin) ++end;
    return {step, begin, end};
}

GridDensity discretize(const OrderStatLaw& law, bool negate, const GridSpan& span) {
    if (!(span.step > 0.0)) throw DomainError("grid step must be positive");
    if (span.end <= span.begin) throw DomainError("grid span is empty");
    const auto cells = static_cast<std::size_t>(span.end - span.begin);
    std::vector<double> h(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        const double edge = static_cast<double>(span.begin + static_cast<std::int64_t>(i)) * span.step;
        h[i] = hcdf(law, std::clamp(negate ? -edge : edge, 0.0, 1.0));
    }
    GridDensity out{static_cast<double>(span.begin) * span.step, span.step, std::vector<double>(cells)};
    for (std::size_t i = 0; i < cells; ++i) {
        out.masses[i] = std::max(0.0, negate ? h[i] - h[i + 1] : h[i + 1] - h[i]);
    }
    return out;
}

GridDensity convolve(const GridDensity& a, const GridDensity& b, Padding padding) {
    if (a.masses.empty() || b.masses.empty()) throw DomainError("convolve: empty input");
    if (a.step != b.step) throw DomainError("convolve: grid steps differ");
    const std::size_t len = a.masses.size() + b.masses.size();
    const std::size_t size = padding == Padding::ExactM ? len : next_pow2(len);
    const std::size_t bins = size / 2 + 1;

    RealBuffer ra(fftw_alloc_real(size));
    RealBuffer rb(fftw_alloc_real(size));
    ComplexBuffer ca(fftw_alloc_complex(bins));
    ComplexBuffer cb(fftw_alloc_complex(bins));
    if (!ra || !rb || !ca || !cb) throw std::bad_alloc();

    std::unique_ptr<Plan> fa, fb, back;
    {
        std::lock_guard lock(planner_mutex());
        const int n = static_cast<int>(size);
        fa = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(n, ra.get(), ca.get(), FFTW_ESTIMATE));
        fb = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(n, rb.get(), cb.get(), FFTW_ESTIMATE));
        back = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(n, ca.get(), ra.get(), FFTW_ESTIMATE));
    }

    std::fill(ra.get(), ra.get() + size, 0.0);
    std::fill(rb.get(), rb.get() + size, 0.0);
    std::copy(a.masses.begin(), a.masses.end(), ra.get());
    std::copy(b.masses.begin(), b.masses.end(), rb.get());
    fa->execute();
    fb->execute();
    for (std::size_t i = 0; i < bins; ++i) {
        const std::complex<double> x(ca[i][0], ca[i][1]);
        const std::complex<double> y(cb[i][0], cb[i][1]);
        const auto z = x * y;
        ca[i][0] = z.real();
        ca[i][1] = z.imag();
    }
    back->execute();

    GridDensity out{a.origin + b.origin, a.step, std::vector<double>(len, 0.0)};
    const double scale = 1.0 / static_cast<double>(size);
    for (std::size_t i = 0; i + 1 < len; ++i) out.masses[i] = std::max(0.0, ra[i] * scale);
    return out;
}

DifferenceLaw difference_law(std::int64_t n, int r, int m, const QuantileMap& map, const FFTConfig& config) {
    config.validate();
    if (r < 1 || m < 1) throw DomainError("r and m must be positive");
    if (n <= r + m) throw InfeasibleError("difference law needs n > r + m");
    const OrderStatLaw upper(n + 1 - m, n, map);
    const OrderStatLaw lower(r, n, map);
    const auto [lm, um] = support_bounds(upper, config.epsilon);
    const auto [lr, ur] = support_bounds(lower, config.epsilon);
    const double step = ((um - lm) + (ur - lr)) / config.target_cells;
    if (!(step > 0.0)) throw DomainError("difference law: degenerate order-statistic support");

    const GridSpan span_m = GridSpan::covering(lm, um, step);
    const GridSpan span_r = GridSpan::covering(-ur, -lr, step);
    const GridDensity a = discretize(upper, false, span_m);
    const GridDensity b = discretize(lower, true, span_r);
    GridDensity d = convolve(a, b, config.padding);
    // Sum of two cell-uniform variables is centred half a cell to the right.
    d.origin += 0.5 * step;
    const double kept = d.total();

    const std::size_t len = a.masses.size() + b.masses.size();
    nlohmann::json diag = {
        {"step", step},
        {"cells_upper", a.masses.size()},
        {"cells_lower", b.masses.size()},
        {"transform_size", config.padding == Padding::ExactM ? len : next_pow2(len)},
        {"upper_bounds", {lm, um}},
        {"lower_bounds", {lr, ur}},
        {"truncated_mass", 1.0 - kept},
        {"truncation_budget", 2.0 * config.epsilon},
    };
    return {d.normalized(), std::move(diag)};
}

}  // namespace biastol
