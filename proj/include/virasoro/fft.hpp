#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vir::fft {

using Spectrum = std::vector<std::complex<double>>;

/// Real-to-complex forward transform, unnormalized: returns n/2+1 coefficients
/// c_k = sum_j u_j exp(-2 pi i j k / n).
Spectrum forward(std::span<const double> values);

/// Inverse of forward(), including the 1/n normalization.
std::vector<double> inverse(const Spectrum& coeffs, std::size_t n);

}  // namespace vir::fft
