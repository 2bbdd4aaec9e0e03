#pragma once

// Uniform periodic grid on [0, 2pi) and the spectral calculus built on it.

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace vir {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// n >= 16 and a power of two.
bool is_valid_grid_size(std::size_t n);

/// Node x_j = 2 pi j / n.
inline double grid_node(std::size_t n, std::size_t j) {
    return two_pi * static_cast<double>(j) / static_cast<double>(n);
}

/// Samples of a smooth 2pi-periodic real function at the nodes of a uniform
/// grid. Arithmetic is nodewise; all fields in an expression must share n.
class PeriodicField {
public:
    PeriodicField() = default;
    explicit PeriodicField(std::vector<double> values);

    static PeriodicField zeros(std::size_t n);
    static PeriodicField constant(std::size_t n, double c);
    static PeriodicField sample(std::size_t n, const std::function<double(double)>& fn);

    std::size_t size() const { return values_.size(); }
    double node(std::size_t j) const { return grid_node(values_.size(), j); }

    double operator[](std::size_t j) const { return values_[j]; }
    double& operator[](std::size_t j) { return values_[j]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double max_abs() const;
    double min() const;
    double max() const;

    /// Applies fn to every sample.
    PeriodicField map(const std::function<double(double)>& fn) const;

    PeriodicField& operator+=(const PeriodicField& other);
    PeriodicField& operator-=(const PeriodicField& other);
    PeriodicField& operator*=(const PeriodicField& other);
    PeriodicField& operator*=(double s);
    PeriodicField& operator+=(double s);

    friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
    friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
    friend PeriodicField operator*(PeriodicField a, const PeriodicField& b) { return a *= b; }
    friend PeriodicField operator*(PeriodicField a, double s) { return a *= s; }
    friend PeriodicField operator*(double s, PeriodicField a) { return a *= s; }
    friend PeriodicField operator+(PeriodicField a, double s) { return a += s; }
    friend PeriodicField operator-(PeriodicField a) { return a *= -1.0; }

    bool operator==(const PeriodicField&) const = default;

private:
    std::vector<double> values_;
};

/// Fourier derivative of order 1, 2 or 3. The Nyquist mode is dropped for odd
/// orders and kept for even ones.
PeriodicField spectral_derivative(const PeriodicField& u, int order);

/// Trigonometric interpolant of a field, built once and evaluated anywhere.
/// Evaluation at a point that coincides with a grid node (after reduction
/// mod 2pi) returns the stored sample exactly.
class TrigInterpolant {
public:
    explicit TrigInterpolant(const PeriodicField& u);

    double operator()(double x) const;

    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<double> samples_;
    std::vector<std::complex<double>> coeffs_;  // scaled: value = Re sum_k coeffs_[k] e^{ikx}
};

/// Trigonometric interpolation of u at arbitrary real points.
std::vector<double> interpolate(const PeriodicField& u, std::span<const double> points);

/// Periodic trapezoid rule, compensated summation in node order.
double integrate(const PeriodicField& u);

/// Spectral shift: returns samples of u(x - a).
PeriodicField translate(const PeriodicField& u, double a);

/// Reflection x -> -x, exact on the grid.
PeriodicField reflect(const PeriodicField& u);

/// Resamples a field onto a grid of a different size by zero-padding or
/// truncating its spectrum.
PeriodicField resample(const PeriodicField& u, std::size_t n);

struct PowerLawFit {
    double exponent = 0.0;
    double coefficient = 0.0;
    double r_squared = 0.0;
};

/// Least-squares line through (log eps, log residual).
/// Requires >= 4 samples, eps strictly decreasing and positive, residuals
/// positive (a zero residual means the range has hit the floating-point floor).
PowerLawFit fit_power_law(std::span<const double> eps, std::span<const double> residuals);

}  // namespace vir
