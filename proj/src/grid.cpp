#include "virasoro/grid.hpp"

#include "virasoro/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vir {
namespace {

void require_grid_size(std::size_t n) {
    if (!is_valid_grid_size(n)) {
        throw std::invalid_argument("grid size must be a power of two >= 16, got " + std::to_string(n));
    }
}

void require_same_size(const PeriodicField& a, const PeriodicField& b) {
    if (a.size() != b.size()) throw std::invalid_argument("PeriodicField size mismatch");
}

// Neumaier summation in index order.
double compensated_sum(std::span<const double> v) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : v) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

}  // namespace

bool is_valid_grid_size(std::size_t n) { return n >= 16 && (n & (n - 1)) == 0; }

PeriodicField::PeriodicField(std::vector<double> values) : values_(std::move(values)) {
    require_grid_size(values_.size());
}

PeriodicField PeriodicField::zeros(std::size_t n) { return PeriodicField(std::vector<double>(n, 0.0)); }

PeriodicField PeriodicField::constant(std::size_t n, double c) { return PeriodicField(std::vector<double>(n, c)); }

PeriodicField PeriodicField::sample(std::size_t n, const std::function<double(double)>& fn) {
    require_grid_size(n);
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = fn(grid_node(n, j));
    return PeriodicField(std::move(v));
}

double PeriodicField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double PeriodicField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double PeriodicField::max() const { return *std::max_element(values_.begin(), values_.end()); }

PeriodicField PeriodicField::map(const std::function<double(double)>& fn) const {
    PeriodicField out = *this;
    for (double& v : out.values_) v = fn(v);
    return out;
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& other) {
    require_same_size(*this, other);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& other) {
    require_same_size(*this, other);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

PeriodicField& PeriodicField::operator*=(const PeriodicField& other) {
    require_same_size(*this, other);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= other.values_[j];
    return *this;
}

PeriodicField& PeriodicField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

PeriodicField& PeriodicField::operator+=(double s) {
    for (double& v : values_) v += s;
    return *this;
}

PeriodicField spectral_derivative(const PeriodicField& u, int order) {
    if (order < 1 || order > 3) throw std::invalid_argument("spectral_derivative: order must be 1, 2 or 3");
    const std::size_t n = u.size();
    require_grid_size(n);
    fft::Spectrum c = fft::forward(u.values());
    const std::complex<double> i(0.0, 1.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const std::complex<double> ik = i * static_cast<double>(k);
        std::complex<double> factor = ik;
        for (int p = 1; p < order; ++p) factor *= ik;
        c[k] *= factor;
    }
    if (order % 2 == 1) c[n / 2] = 0.0;
    return PeriodicField(fft::inverse(c, n));
}

TrigInterpolant::TrigInterpolant(const PeriodicField& u) : n_(u.size()) {
    require_grid_size(n_);
    samples_.assign(u.values().begin(), u.values().end());
    const fft::Spectrum c = fft::forward(u.values());
    const double inv_n = 1.0 / static_cast<double>(n_);
    coeffs_.resize(n_ / 2 + 1);
    coeffs_[0] = c[0] * inv_n;
    for (std::size_t k = 1; k < n_ / 2; ++k) coeffs_[k] = 2.0 * inv_n * c[k];
    coeffs_[n_ / 2] = c[n_ / 2].real() * inv_n;
}

double TrigInterpolant::operator()(double x) const {
    double reduced = std::fmod(x, two_pi);
    if (reduced < 0.0) reduced += two_pi;
    const double t = reduced / two_pi * static_cast<double>(n_);
    const double r = std::nearbyint(t);
    if (std::abs(t - r) <= 1e-14 * std::max(1.0, t)) {
        return samples_[static_cast<std::size_t>(r) % n_];
    }
    // Horner in z = e^{ix}; |z| = 1 keeps the recurrence stable.
    const std::complex<double> z = std::polar(1.0, reduced);
    std::complex<double> acc = coeffs_.back();
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc.real();
}

std::vector<double> interpolate(const PeriodicField& u, std::span<const double> points) {
    const TrigInterpolant interp(u);
    std::vector<double> out(points.size());
    std::transform(points.begin(), points.end(), out.begin(), [&](double x) { return interp(x); });
    return out;
}

double integrate(const PeriodicField& u) {
    return compensated_sum(u.values()) * two_pi / static_cast<double>(u.size());
}

PeriodicField translate(const PeriodicField& u, double a) {
    const std::size_t n = u.size();
    fft::Spectrum c = fft::forward(u.values());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -static_cast<double>(k) * a);
    c[n / 2] = c[n / 2].real();
    return PeriodicField(fft::inverse(c, n));
}

PeriodicField reflect(const PeriodicField& u) {
    const std::size_t n = u.size();
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = u[(n - j) % n];
    return PeriodicField(std::move(v));
}

PeriodicField resample(const PeriodicField& u, std::size_t n) {
    require_grid_size(n);
    const std::size_t m = u.size();
    if (m == n) return u;
    const fft::Spectrum c = fft::forward(u.values());
    fft::Spectrum out(n / 2 + 1, 0.0);
    const double scale = static_cast<double>(n) / static_cast<double>(m);
    const std::size_t kmax = std::min(m, n) / 2;
    for (std::size_t k = 0; k < kmax; ++k) out[k] = c[k] * scale;
    if (n > m) {
        // The coarse Nyquist term cos(m x / 2) splits evenly over +-m/2.
        out[kmax] = 0.5 * c[kmax].real() * scale;
    } else {
        out[kmax] = 2.0 * c[kmax].real() * scale;
    }
    return PeriodicField(fft::inverse(out, n));
}

PowerLawFit fit_power_law(std::span<const double> eps, std::span<const double> residuals) {
    if (eps.size() != residuals.size()) throw std::invalid_argument("fit_power_law: length mismatch");
    if (eps.size() < 4) throw std::invalid_argument("fit_power_law: need at least 4 samples");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw std::invalid_argument("fit_power_law: eps must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw std::invalid_argument("fit_power_law: eps must be strictly decreasing");
        if (!(residuals[i] > 0.0)) {
            throw std::invalid_argument(
                "fit_power_law: nonpositive residual (floating-point floor reached; shrink the eps range)");
        }
    }
    const std::size_t m = eps.size();
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        lx[i] = std::log(eps[i]);
        ly[i] = std::log(residuals[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.coefficient = std::exp(my - fit.exponent * mx);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (my + fit.exponent * (lx[i] - mx));
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace vir
