#include "virasoro/virasoro_group.hpp"

#include "virasoro/errors.hpp"

#include <cmath>

namespace vir {

double bott_cocycle(const CircleDiffeo& f, const CircleDiffeo& g) {
    if (f.size() != g.size()) throw std::invalid_argument("bott_cocycle: grid size mismatch");
    const PeriodicField ug = g.centered_displacement();
    const PeriodicField g_slope_minus_one = spectral_derivative(ug, 1);
    const TrigInterpolant f_slope_minus_one(spectral_derivative(f.centered_displacement(), 1));

    PeriodicField log_g_slope = g_slope_minus_one;
    PeriodicField log_composite = g_slope_minus_one;
    for (std::size_t j = 0; j < ug.size(); ++j) {
        const double fs = f_slope_minus_one(ug.node(j) + ug[j]);
        if (!(fs > -1.0) || !(g_slope_minus_one[j] > -1.0)) {
            throw MonotonicityLoss("bott_cocycle: nonpositive derivative in log((f' o g) g')");
        }
        log_g_slope[j] = std::log1p(g_slope_minus_one[j]);
        log_composite[j] = std::log1p(fs) + log_g_slope[j];
    }
    return integrate(log_composite * spectral_derivative(log_g_slope, 1));
}

VirasoroElement vir_product(const VirasoroElement& x, const VirasoroElement& y) {
    return {compose(x.f, y.f), x.F + y.F + bott_cocycle(x.f, y.f)};
}

VirasoroElement vir_inverse(const VirasoroElement& x) { return {invert(x.f), -x.F}; }

}  // namespace vir
