#include "virasoro/circle_diffeo.hpp"

#include "virasoro/diagnostics.hpp"
#include "virasoro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vir {
namespace {

double min_slope_of(const PeriodicField& u) {
    return 1.0 + spectral_derivative(u, 1).min();
}

void check_slope(double slope, const char* where) {
    if (!(slope > 0.0)) {
        std::ostringstream msg;
        msg << where << ": f' = " << slope << " <= 0 at a grid node (under-resolved; raise n)";
        throw MonotonicityLoss(msg.str());
    }
    if (slope < CircleDiffeo::warn_margin) {
        std::ostringstream msg;
        msg << where << ": min f' = " << slope << " is close to the boundary of Diff+(S1)";
        warn(msg.str());
    }
}

}  // namespace

PeriodicField normalize_displacement(PeriodicField u) {
    const double shift = two_pi * std::floor(u[0] / two_pi);
    if (shift != 0.0) u += -shift;
    // Rounding can leave u(0) a hair outside the half-open interval.
    if (u[0] >= two_pi) u += -two_pi;
    if (u[0] < 0.0) u += two_pi;
    return u;
}

PeriodicField center_displacement(PeriodicField u) {
    const double shift = two_pi * std::floor((u[0] + std::numbers::pi) / two_pi);
    if (shift != 0.0) u += -shift;
    return u;
}

CircleDiffeo::CircleDiffeo(PeriodicField displacement) {
    for (double v : displacement.values()) {
        if (!std::isfinite(v)) throw std::invalid_argument("CircleDiffeo: non-finite displacement");
    }
    check_slope(min_slope_of(center_displacement(displacement)), "CircleDiffeo");
    u_ = normalize_displacement(std::move(displacement));
}

CircleDiffeo CircleDiffeo::identity(std::size_t n) { return CircleDiffeo(PeriodicField::zeros(n)); }

CircleDiffeo CircleDiffeo::rotation(std::size_t n, double a) { return CircleDiffeo(PeriodicField::constant(n, a)); }

PeriodicField CircleDiffeo::centered_displacement() const { return center_displacement(u_); }

PeriodicField CircleDiffeo::lift() const {
    PeriodicField u = centered_displacement();
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += u.node(j);
    return u;
}

double CircleDiffeo::min_slope() const { return min_slope_of(centered_displacement()); }

CircleDiffeo compose(const CircleDiffeo& f, const CircleDiffeo& g) {
    if (f.size() != g.size()) throw std::invalid_argument("compose: grid size mismatch");
    const PeriodicField uf = f.centered_displacement();
    const PeriodicField ug = g.centered_displacement();
    const TrigInterpolant interp(uf);
    PeriodicField uh = ug;
    for (std::size_t j = 0; j < uh.size(); ++j) uh[j] += interp(uh.node(j) + ug[j]);
    return CircleDiffeo(std::move(uh));
}

CircleDiffeo invert(const CircleDiffeo& f) {
    const std::size_t n = f.size();
    const PeriodicField u = f.centered_displacement();
    const TrigInterpolant value(u);
    const TrigInterpolant slope(spectral_derivative(u, 1));
    const double umin = u.min();
    const double umax = u.max();
    const double span = umax - umin;
    constexpr int max_iter = 200;

    PeriodicField ug = PeriodicField::zeros(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double target = grid_node(n, j);
        auto phi = [&](double y) { return y + value(y) - target; };

        // The interpolant can overshoot its nodal extrema slightly; widen.
        double lo = target - umax - 0.05 * span - 1e-12;
        double hi = target - umin + 0.05 * span + 1e-12;
        for (int k = 0; k < 60 && phi(lo) > 0.0; ++k) lo -= 0.1 + span;
        for (int k = 0; k < 60 && phi(hi) < 0.0; ++k) hi += 0.1 + span;

        double y = std::clamp(target - u[j], lo, hi);
        double r = phi(y);
        bool converged = r == 0.0;
        for (int it = 0; it < max_iter && !converged; ++it) {
            if (r < 0.0) lo = y; else hi = y;
            const double d = 1.0 + slope(y);
            double next = d > 0.0 ? y - r / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            const double step = next - y;
            y = next;
            r = phi(y);
            if (r == 0.0 || std::abs(step) <= 2e-16 * std::max(1.0, std::abs(y)) || hi - lo <= 4e-16 * std::max(1.0, std::abs(y))) {
                converged = true;
            }
        }
        if (!(std::abs(r) <= 1e-12)) {
            std::ostringstream msg;
            msg << "invert: node " << j << " residual " << r << " after " << max_iter
                << " iterations (under-resolved; raise n)";
            throw NoConvergence(msg.str());
        }
        ug[j] = y - target;
    }
    return CircleDiffeo(std::move(ug));
}

PeriodicField derivative(const CircleDiffeo& f, int order) {
    if (order != 1 && order != 2) throw std::invalid_argument("derivative: order must be 1 or 2");
    const PeriodicField u = f.centered_displacement();
    if (order == 1) return spectral_derivative(u, 1) + 1.0;
    return spectral_derivative(u, 2);
}

}  // namespace vir
