#pragma once

#include <cstdint>

#include "biastol/quantile_map.hpp"

namespace biastol {

/// Law of F(Y_j), the target CDF evaluated at the j-th smallest of n draws
/// from the biased sampling law G:
///   H_j(z)    = pbeta(Phi(z); j, n + 1 - j)
///   H_j^-1(p) = Phi^-1(qbeta(p; j, n + 1 - j))
struct OrderStatLaw {
    std::int64_t j;
    std::int64_t n;
    QuantileMap map;

    OrderStatLaw(std::int64_t j_, std::int64_t n_, QuantileMap map_);
};

double hcdf(const OrderStatLaw& law, double z);
double hquantile(const OrderStatLaw& law, double p);

/// One-sided solutions under bias with x_j the (1 - alpha_j)-quantile of
/// Chi-square(2j) and rho_j(n) the Scheffe-Tukey ratio:
///   q_r = 1 - Phi^-1(1 - rho_r(n))   (proportion above Y_r)
///   q_m = Phi^-1(rho_m(n))           (proportion below Y_{n+1-m})
/// InfeasibleError if n <= j or rho < 0.
double one_sided_lower(std::int64_t n, int r, double alpha_r, const QuantileMap& map);
double one_sided_upper(std::int64_t n, int m, double alpha_m, const QuantileMap& map);

}  // namespace biastol
