#include "virasoro/ch_family.hpp"

#include "virasoro/errors.hpp"
#include "virasoro/fft.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace vir {
namespace {

using cplx = std::complex<double>;
constexpr double vanishing = 1e-12;
constexpr double blow_up_level = 1e6;
constexpr double zero_mode_tol = 1e-10;
// Hopf runs: stop once the steepest gradient changes v by half a unit per cell.
constexpr double gradient_limit = 0.5;

bool vanishes(double x) { return std::abs(x) <= vanishing; }

void require_evolvable(const CHParams& p) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.b)) {
        throw std::invalid_argument("CH parameters must be finite");
    }
    if (vanishes(p.alpha) && vanishes(p.beta)) {
        throw std::invalid_argument("alpha = beta = 0 is the constraint v_xxx = 0, not an evolution equation");
    }
}

// Fourier-side operators for one (n, params) pair.
struct Operators {
    std::size_t n;
    std::size_t modes;
    std::vector<double> helmholtz;  // alpha + beta k^2
    std::vector<bool> kept;         // 2/3 rule
    std::vector<cplx> linear;       // symbol of m -> b v_xxx

    Operators(std::size_t n_, const CHParams& p) : n(n_), modes(n_ / 2 + 1), helmholtz(modes), kept(modes), linear(modes) {
        for (std::size_t k = 0; k < modes; ++k) {
            const double kk = static_cast<double>(k);
            helmholtz[k] = p.alpha + p.beta * kk * kk;
            kept[k] = 3 * k < n;
            const cplx ik3(0.0, -kk * kk * kk);
            linear[k] = (helmholtz[k] == 0.0 || !kept[k]) ? cplx(0.0) : p.b * ik3 / helmholtz[k];
        }
    }

    fft::Spectrum velocity(const fft::Spectrum& m) const {
        fft::Spectrum v(modes);
        for (std::size_t k = 0; k < modes; ++k) v[k] = (kept[k] && helmholtz[k] != 0.0) ? m[k] / helmholtz[k] : cplx(0.0);
        return v;
    }

    fft::Spectrum momentum(const fft::Spectrum& v) const {
        fft::Spectrum m(modes);
        for (std::size_t k = 0; k < modes; ++k) m[k] = kept[k] ? v[k] * helmholtz[k] : cplx(0.0);
        return m;
    }

    fft::Spectrum dx(const fft::Spectrum& u) const {
        fft::Spectrum out(modes);
        for (std::size_t k = 0; k < modes; ++k) out[k] = cplx(0.0, static_cast<double>(k)) * u[k];
        return out;
    }

    // -(v m_x + 2 m v_x), dealiased.
    fft::Spectrum nonlinear(const fft::Spectrum& m_hat) const {
        const fft::Spectrum v_hat = velocity(m_hat);
        const auto v = fft::inverse(v_hat, n);
        const auto vx = fft::inverse(dx(v_hat), n);
        const auto m = fft::inverse(m_hat, n);
        const auto mx = fft::inverse(dx(m_hat), n);
        std::vector<double> prod(n);
        for (std::size_t j = 0; j < n; ++j) prod[j] = -(v[j] * mx[j] + 2.0 * m[j] * vx[j]);
        fft::Spectrum out = fft::forward(prod);
        for (std::size_t k = 0; k < modes; ++k) {
            if (!kept[k]) out[k] = 0.0;
        }
        return out;
    }
};

fft::Spectrum axpy(const fft::Spectrum& x, double a, const fft::Spectrum& y) {
    fft::Spectrum out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + a * y[k];
    return out;
}

fft::Spectrum scaled(const std::vector<cplx>& factor, const fft::Spectrum& x) {
    fft::Spectrum out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = factor[k] * x[k];
    return out;
}

void require_state(const PDEState& s) {
    if (!is_valid_grid_size(s.v.size())) throw std::invalid_argument("PDEState: invalid grid size");
    require_evolvable(s.params);
    for (double x : s.v.values()) {
        if (!std::isfinite(x)) throw std::invalid_argument("PDEState: non-finite sample");
    }
}

double sech2(double z) {
    const double c = std::cosh(z);
    return 1.0 / (c * c);
}

}  // namespace

std::string_view to_string(OrbitTag tag) {
    switch (tag) {
        case OrbitTag::CamassaHolm: return "CamassaHolm";
        case OrbitTag::KdV: return "KdV";
        case OrbitTag::DispersionlessKdV: return "DispersionlessKdV";
        case OrbitTag::HunterSaxton: return "HunterSaxton";
        case OrbitTag::ThirdDerivativeConstraint: return "ThirdDerivativeConstraint";
    }
    return "unknown";
}

CHParams transform_params(const CHParams& p, const SymmetryTransform& t) {
    if (t.lambda == 0.0 || t.mu == 0.0 || t.scale == 0.0) {
        throw std::invalid_argument("symmetry transform: lambda, mu and scale must be nonzero");
    }
    if (!vanishes(p.alpha) && std::abs(t.d - 3 * t.c) > vanishing * std::max(1.0, std::abs(t.c))) {
        throw std::invalid_argument("symmetry transform: with alpha != 0 the boost must satisfy d = 3c");
    }
    const double b_boost = p.b + p.beta * (t.d - t.c);
    const double l = t.lambda, m = t.mu;
    return {t.scale * p.alpha * m / l, t.scale * p.beta * l * m * m * m, t.scale * b_boost * l * l * m * m * m};
}

OrbitClass classify_orbit(const CHParams& p) {
    if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.b)) {
        throw std::invalid_argument("classify_orbit: parameters must be finite");
    }
    const bool a0 = vanishes(p.alpha), b0 = vanishes(p.beta), c0 = vanishes(p.b);
    CHParams q = p;
    if (a0) q.alpha = 0;
    if (b0) q.beta = 0;
    if (c0) q.b = 0;

    OrbitClass out;
    SymmetryTransform& t = out.normalization;
    if (!a0 && !b0) {
        out.tag = OrbitTag::CamassaHolm;
        t.c = -q.b / (2 * q.beta);
        t.d = 3 * t.c;
        t.lambda = std::sqrt(std::abs(q.alpha / q.beta));
        t.scale = t.lambda / q.alpha;
    } else if (!a0 && !c0) {
        out.tag = OrbitTag::KdV;
        t.lambda = std::cbrt(-q.alpha / q.b);
        t.scale = t.lambda / q.alpha;
    } else if (!a0) {
        out.tag = OrbitTag::DispersionlessKdV;
        t.scale = 1 / q.alpha;
    } else if (!b0) {
        out.tag = OrbitTag::HunterSaxton;
        t.d = -q.b / q.beta;
        t.scale = 1 / q.beta;
    } else if (!c0) {
        out.tag = OrbitTag::ThirdDerivativeConstraint;
        t.scale = 1 / q.b;
    } else {
        throw std::invalid_argument("classify_orbit: (0, 0, 0) is not an equation");
    }
    out.canonical = transform_params(q, t);
    for (double* x : {&out.canonical.alpha, &out.canonical.beta, &out.canonical.b}) {
        if (vanishes(*x)) *x = 0.0;
    }
    return out;
}

TimeSampledField apply_symmetry(const TimeSampledField& field, const SymmetryTransform& t) {
    if (!field.v || !field.v_t) throw std::invalid_argument("apply_symmetry: field evaluators must be set");
    if (t.lambda == 0.0 || t.mu == 0.0 || !std::isfinite(t.lambda) || !std::isfinite(t.mu)) {
        throw std::invalid_argument("apply_symmetry: lambda and mu must be finite and nonzero");
    }
    const double p = 1.0 / (t.lambda * t.mu);
    const double pr = std::round(p);
    if (pr == 0.0 || std::abs(p - pr) > 1e-9 * std::max(1.0, std::abs(p))) {
        std::ostringstream msg;
        msg << "apply_symmetry: 1/(lambda mu) = " << p << " is not an integer, so the image is not 2pi-periodic";
        throw std::invalid_argument(msg.str());
    }
    auto points = [t, pr](std::size_t n, double tt) {
        std::vector<double> y(n);
        for (std::size_t j = 0; j < n; ++j) y[j] = pr * grid_node(n, j) - t.d * tt / t.mu;
        return y;
    };
    TimeSampledField out;
    out.v = [field, t, points](double tt) {
        const PeriodicField v = field.v(tt / t.mu);
        const auto vals = interpolate(v, points(v.size(), tt));
        PeriodicField z(vals);
        for (std::size_t j = 0; j < z.size(); ++j) z[j] = t.lambda * (z[j] + t.c);
        return z;
    };
    out.v_t = [field, t, points](double tt) {
        const double s = tt / t.mu;
        const PeriodicField v = field.v(s);
        const PeriodicField rate = field.v_t(s) - t.d * spectral_derivative(v, 1);
        PeriodicField z(interpolate(rate, points(v.size(), tt)));
        z *= t.lambda / t.mu;
        return z;
    };
    return out;
}

PeriodicField time_derivative(const PDEState& state) {
    require_state(state);
    const std::size_t n = state.v.size();
    const Operators ops(n, state.params);
    const fft::Spectrum m_hat = ops.momentum(fft::forward(state.v.values()));
    fft::Spectrum rate = ops.nonlinear(m_hat);
    for (std::size_t k = 0; k < ops.modes; ++k) rate[k] += ops.linear[k] * m_hat[k];
    return PeriodicField(fft::inverse(ops.velocity(rate), n));
}

PDEState evolve(const PDEState& state, double T, double dt, const StepObserver& observer) {
    require_state(state);
    if (!(T >= 0) || !std::isfinite(T)) throw std::invalid_argument("evolve: T must be >= 0");
    if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be positive");
    const std::size_t n = state.v.size();
    const CHParams& params = state.params;
    const bool hunter_saxton = vanishes(params.alpha);
    const bool hopf = vanishes(params.beta) && vanishes(params.b);
    if (hunter_saxton) {
        const double mean = mean_momentum(state);
        if (std::abs(mean) > zero_mode_tol) {
            std::ostringstream msg;
            msg << "evolve: alpha = 0 requires mean(v) = 0 (gauge), got " << mean;
            throw std::invalid_argument(msg.str());
        }
    }

    const Operators ops(n, params);
    fft::Spectrum m_hat = ops.momentum(fft::forward(state.v.values()));
    const long steps = T == 0.0 ? 0 : std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
    const double h = steps == 0 ? 0.0 : T / static_cast<double>(steps);

    std::vector<cplx> half(ops.modes), full(ops.modes);
    for (std::size_t k = 0; k < ops.modes; ++k) {
        half[k] = std::exp(ops.linear[k] * (0.5 * h));
        full[k] = std::exp(ops.linear[k] * h);
    }

    const double cell = two_pi / static_cast<double>(n);
    PDEState cur{PeriodicField(fft::inverse(ops.velocity(m_hat), n)), state.t, params};
    for (long s = 0; s < steps; ++s) {
        const fft::Spectrum k1 = ops.nonlinear(m_hat);
        const fft::Spectrum k2 = ops.nonlinear(scaled(half, axpy(m_hat, 0.5 * h, k1)));
        const fft::Spectrum e_m = scaled(half, m_hat);
        const fft::Spectrum k3 = ops.nonlinear(axpy(e_m, 0.5 * h, k2));
        const fft::Spectrum k4 = ops.nonlinear(axpy(scaled(full, m_hat), h, scaled(half, k3)));
        for (std::size_t k = 0; k < ops.modes; ++k) {
            m_hat[k] = full[k] * m_hat[k] +
                       (h / 6.0) * (full[k] * k1[k] + 2.0 * half[k] * (k2[k] + k3[k]) + k4[k]);
        }

        const double t_now = state.t + h * static_cast<double>(s + 1);
        if (hunter_saxton) {
            const double mean_m = std::abs(m_hat[0].real()) / static_cast<double>(n);
            if (mean_m > zero_mode_tol) {
                std::ostringstream msg;
                msg << "evolve: mean(m) drifted to " << mean_m << " at t = " << t_now;
                throw ZeroModeViolation(msg.str());
            }
        }
        const fft::Spectrum v_hat = ops.velocity(m_hat);
        cur.v = PeriodicField(fft::inverse(v_hat, n));
        cur.t = t_now;
        for (double x : cur.v.values()) {
            if (!std::isfinite(x) || std::abs(x) > blow_up_level) {
                std::ostringstream msg;
                msg << "evolve: solution blew up at t = " << t_now;
                throw BlowUp(msg.str());
            }
        }
        if (hopf) {
            const double slope = PeriodicField(fft::inverse(ops.dx(v_hat), n)).max_abs();
            if (slope * cell > gradient_limit) {
                std::ostringstream msg;
                msg << "evolve: gradient catastrophe near t = " << t_now << " (max|v_x| = " << slope << ")";
                throw BlowUp(msg.str());
            }
        }
        if (observer) observer(cur);
    }
    cur.t = state.t + T;
    return cur;
}

double energy(const PDEState& state) {
    const PeriodicField vx = spectral_derivative(state.v, 1);
    PeriodicField density = state.v;
    for (std::size_t j = 0; j < density.size(); ++j) {
        density[j] = state.params.alpha * state.v[j] * state.v[j] + state.params.beta * vx[j] * vx[j];
    }
    return integrate(density);
}

double mean_momentum(const PDEState& state) { return integrate(state.v) / two_pi; }

PeriodicField momentum_form_residual(const PeriodicField& v, const PeriodicField& v_t, const CHParams& p) {
    if (v.size() != v_t.size()) throw std::invalid_argument("momentum_form_residual: fields must share a grid");
    const PeriodicField m = p.alpha * v - p.beta * spectral_derivative(v, 2);
    const PeriodicField m_t = p.alpha * v_t - p.beta * spectral_derivative(v_t, 2);
    return m_t + v * spectral_derivative(m, 1) + 2.0 * m * spectral_derivative(v, 1) - p.b * spectral_derivative(v, 3);
}

PeriodicField kdv_soliton(std::size_t n, double kappa, double x0, double t) {
    if (!(kappa > 0)) throw std::invalid_argument("kdv_soliton: kappa must be positive");
    const double speed = 4 * kappa * kappa;
    const double centre = std::fmod(x0 + speed * t, two_pi);
    const int images = static_cast<int>(std::ceil(40.0 / (two_pi * kappa))) + 1;
    return PeriodicField::sample(n, [=](double x) {
        double sum = 0;
        for (int m = -images; m <= images; ++m) sum += sech2(kappa * (x - centre + two_pi * m));
        return speed * sum;
    });
}

PeriodicField kdv_soliton_rate(std::size_t n, double kappa, double x0, double t) {
    if (!(kappa > 0)) throw std::invalid_argument("kdv_soliton_rate: kappa must be positive");
    const double speed = 4 * kappa * kappa;
    const double centre = std::fmod(x0 + speed * t, two_pi);
    const int images = static_cast<int>(std::ceil(40.0 / (two_pi * kappa))) + 1;
    return PeriodicField::sample(n, [=](double x) {
        double sum = 0;
        for (int m = -images; m <= images; ++m) {
            const double z = kappa * (x - centre + two_pi * m);
            sum += sech2(z) * std::tanh(z);
        }
        return 2 * speed * speed * kappa * sum;
    });
}

TimeSampledField solution_field(const PDEState& initial, double dt) {
    require_state(initial);
    auto at = [initial, dt](double t) {
        if (t < initial.t) throw std::invalid_argument("solution_field: time precedes the initial state");
        return evolve(initial, t - initial.t, dt);
    };
    return {[at](double t) { return at(t).v; }, [at](double t) { return time_derivative(at(t)); }};
}

TimeSampledField time_reversed_field(const PeriodicField& v0, const CHParams& params, double dt) {
    const TimeSampledField w = solution_field(PDEState{reflect(v0), 0.0, params}, dt);
    return {[w](double s) { return reflect(w.v(s)); }, [w](double s) { return reflect(w.v_t(s)); }};
}

}  // namespace vir
