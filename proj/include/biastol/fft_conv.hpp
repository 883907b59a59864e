#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "biastol/order_stats.hpp"
#include "json.hpp"

namespace biastol {

/// Discretized law on a uniform grid: cell i covers
/// [origin + i*step, origin + (i+1)*step) and carries probability masses[i].
/// Within a cell the mass is treated as uniformly spread, so the CDF is
/// piecewise linear through the cell edges.
struct GridDensity {
    double origin = 0.0;
    double step = 1.0;
    std::vector<double> masses;

    double total() const;
    double upper() const { return origin + step * static_cast<double>(masses.size()); }
    double cdf(double x) const;
    /// Leftmost x with cdf(x) = p * total().
    double quantile(double p) const;
    /// Law of -X on the mirrored grid.
    GridDensity reflect() const;
    /// Copy scaled to total mass 1.
    GridDensity normalized() const;
};

enum class Padding { ExactM, NextPow2 };

struct FFTConfig {
    double epsilon = 1e-6;
    int target_cells = 4096;
    Padding padding = Padding::NextPow2;

    /// Throws DomainError unless 0 < epsilon <= 1e-4 and target_cells >= 64.
    void validate() const;
};

/// (H^-1(eps/2), H^-1(1 - eps/2)).
std::pair<double, double> support_bounds(const OrderStatLaw& law, double epsilon);

/// Integer cell range [begin, end) on the lattice step * Z.
struct GridSpan {
    double step;
    std::int64_t begin;
    std::int64_t end;

    /// Smallest span of the lattice containing [lo, hi].
    static GridSpan covering(double lo, double hi, double step);
};

/// Cell masses as exact increments of H over the span. With `negate`, the
/// span is read on the reflected axis and the result is the law of -F(Y_j).
GridDensity discretize(const OrderStatLaw& law, bool negate, const GridSpan& span);

/// Linear convolution of two densities on the same step by real-input DFT.
/// The result has len_a + len_b cells starting at a.origin + b.origin (the
/// last cell is empty); transform size is len_a + len_b or the next power of
/// two. Safe to call concurrently.
GridDensity convolve(const GridDensity& a, const GridDensity& b, Padding padding = Padding::NextPow2);

/// Approximate law of D = F(Y_{n+1-m}) - F(Y_r), treating the two order
/// statistics as independent.
struct DifferenceLaw {
    GridDensity density;  // renormalized to total mass 1
    nlohmann::json diagnostics;
};

DifferenceLaw difference_law(std::int64_t n, int r, int m, const QuantileMap& map, const FFTConfig& config = {});

}  // namespace biastol
