#pragma once

#include "virasoro/grid.hpp"

#include <cstddef>

namespace vir {

/// Sampled orientation-preserving diffeomorphism of the circle, stored as the
/// periodic displacement u = f - id.
///
/// f(x + 2pi) = f(x) + 2pi holds by construction. The representative of
/// {f, f + 2pi k} is fixed by u(0) in [0, 2pi); every operation renormalizes.
/// Construction checks f' = 1 + u' > 0 at every node.
class CircleDiffeo {
public:
    /// Derivative margin below which operations log a warning.
    static constexpr double warn_margin = 0.05;

    explicit CircleDiffeo(PeriodicField displacement);

    static CircleDiffeo identity(std::size_t n);
    /// x -> x + a.
    static CircleDiffeo rotation(std::size_t n, double a);

    std::size_t size() const { return u_.size(); }

    /// Normalized displacement, u(0) in [0, 2pi).
    const PeriodicField& displacement() const { return u_; }

    /// The same displacement shifted by a multiple of 2pi so that u(0) lies in
    /// [-pi, pi). Use this for any arithmetic on the displacement values.
    PeriodicField centered_displacement() const;

    /// Lifted values f(x_j) = x_j + u_c(x_j) with the centered representative.
    PeriodicField lift() const;

    /// min_j f'(x_j).
    double min_slope() const;

private:
    PeriodicField u_;
};

/// Maps any displacement into the u(0) in [0, 2pi) section.
PeriodicField normalize_displacement(PeriodicField u);

/// Shifts a displacement by 2pi k so that u(0) lies in [-pi, pi).
PeriodicField center_displacement(PeriodicField u);

/// h = f o g, via trigonometric interpolation of u_f at g(x_j).
/// Throws MonotonicityLoss if h' <= 0 at some node.
CircleDiffeo compose(const CircleDiffeo& f, const CircleDiffeo& g);

/// g = f^{-1}: solves x + u_f(x) = x_j per node on the lift by Newton with a
/// bisection safeguard. Throws NoConvergence if a node misses 1e-12.
CircleDiffeo invert(const CircleDiffeo& f);

/// f' = 1 + u' (order 1) or f'' = u'' (order 2).
PeriodicField derivative(const CircleDiffeo& f, int order);

}  // namespace vir
