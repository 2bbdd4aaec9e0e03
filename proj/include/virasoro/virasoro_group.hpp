#pragma once

#include "virasoro/circle_diffeo.hpp"

namespace vir {

/// Element (f, F) of the Virasoro group: a circle diffeomorphism and a real
/// central coordinate.
struct VirasoroElement {
    CircleDiffeo f;
    double F = 0.0;

    static VirasoroElement identity(std::size_t n) { return {CircleDiffeo::identity(n), 0.0}; }
    std::size_t size() const { return f.size(); }
};

/// Bott cocycle B(f, g) = int_0^{2pi} log((f' o g) g') (log g')' dx.
/// Uses the chain-rule form so that only f' o g needs interpolation.
/// Throws MonotonicityLoss if f' o g or g' is nonpositive at a node.
double bott_cocycle(const CircleDiffeo& f, const CircleDiffeo& g);

/// (f, F)(g, G) = (f o g, F + G + B(f, g)).
VirasoroElement vir_product(const VirasoroElement& x, const VirasoroElement& y);

/// (f, F)^{-1} = (f^{-1}, -F).
VirasoroElement vir_inverse(const VirasoroElement& x);

}  // namespace vir
