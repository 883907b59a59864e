#include "biastol/order_stats.hpp"

#include <algorithm>

#include "biastol/distributions.hpp"
#include "biastol/errors.hpp"
#include "biastol/tolerance_classic.hpp"

namespace biastol {
namespace {

BetaParams beta_of(const OrderStatLaw& law) { return {double(law.j), double(law.n + 1 - law.j)}; }

double one_sided_ratio(std::int64_t n, int j, double alpha_j) {
    if (j < 1) throw DomainError("order-statistic index must be positive");
    if (!(alpha_j > 0.0 && alpha_j < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (n <= j) throw InfeasibleError("one-sided problem needs n > j");
    const double rho = scheffe_tukey_ratio(double(n), j, chisq_quantile(1.0 - alpha_j, 2 * j));
    if (rho < 0.0) throw InfeasibleError("one-sided Scheffe-Tukey ratio is negative at this sample size");
    return std::min(rho, 1.0);
}

}  // namespace

OrderStatLaw::OrderStatLaw(std::int64_t j_, std::int64_t n_, QuantileMap map_) : j(j_), n(n_), map(std::move(map_)) {
    if (j < 1 || j > n) throw DomainError("order-statistic index must satisfy 1 <= j <= n");
}

double hcdf(const OrderStatLaw& law, double z) {
    if (!(z >= 0.0 && z <= 1.0)) throw DomainError("hcdf argument outside [0, 1]");
    return pbeta(law.map.eval(z), beta_of(law));
}

double hquantile(const OrderStatLaw& law, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("hquantile argument outside [0, 1]");
    return law.map.inverse_eval(qbeta(p, beta_of(law)));
}

double one_sided_lower(std::int64_t n, int r, double alpha_r, const QuantileMap& map) {
    const double rho = one_sided_ratio(n, r, alpha_r);
    return 1.0 - map.inverse_eval(1.0 - rho);
}

double one_sided_upper(std::int64_t n, int m, double alpha_m, const QuantileMap& map) {
    return map.inverse_eval(one_sided_ratio(n, m, alpha_m));
}

}  // namespace biastol
