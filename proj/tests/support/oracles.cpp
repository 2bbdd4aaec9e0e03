#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace oracle {

using vir::CircleDiffeo;
using vir::PeriodicField;
using vir::two_pi;

double TrigPoly::value(double x) const {
    double s = 0;
    for (int k = 1; k <= 3; ++k) s += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
    return s;
}

double TrigPoly::deriv(double x, int order) const {
    double s = 0;
    for (int k = 1; k <= 3; ++k) {
        const double kp = std::pow(k, order);
        // d^order of cos(kx) = k^order cos(kx + order pi/2)
        const double ph = order * std::numbers::pi / 2;
        s += kp * (a[k] * std::cos(k * x + ph) + b[k] * std::sin(k * x + ph));
    }
    return s;
}

PeriodicField TrigPoly::sample(std::size_t n) const {
    return PeriodicField::sample(n, [this](double x) { return value(x); });
}

TrigPoly random_trig(Rng& rng, double amplitude) {
    // sum_k |c_k| <= amplitude and sum_k k |c_k| <= 0.5
    TrigPoly t;
    double w[4] = {0, 0, 0, 0};
    double total = 0, slope = 0;
    for (int k = 1; k <= 3; ++k) {
        w[k] = rng.uniform(0.2, 1.0) / k;
        total += w[k];
        slope += k * w[k];
    }
    const double scale = std::min(amplitude / total, 0.5 / slope);
    for (int k = 1; k <= 3; ++k) {
        const double ph = rng.uniform(0, two_pi);
        t.a[k] = scale * w[k] * std::cos(ph);
        t.b[k] = scale * w[k] * std::sin(ph);
    }
    return t;
}

CircleDiffeo SmoothDiffeo::sample(std::size_t n) const {
    return CircleDiffeo(PeriodicField::sample(n, [this](double x) { return shift + p.value(x); }));
}

SmoothDiffeo random_diffeo(Rng& rng, double amplitude, bool rotate) {
    SmoothDiffeo f;
    f.p = random_trig(rng, amplitude);
    f.shift = rotate ? rng.uniform(-std::numbers::pi, std::numbers::pi) : 0.0;
    return f;
}

double quadrature(const std::function<double(double)>& fn, std::size_t m) {
    long double s = 0;
    for (std::size_t j = 0; j < m; ++j) s += fn(two_pi * static_cast<double>(j) / static_cast<double>(m));
    return static_cast<double>(s * two_pi / static_cast<long double>(m));
}

double bott_reference(const SmoothDiffeo& f, const SmoothDiffeo& g, std::size_t m) {
    return quadrature(
        [&](double x) {
            const double gp = g.deriv(x);
            return std::log(f.deriv(g(x)) * gp) * g.deriv2(x) / gp;
        },
        m);
}

double bessel_i0_one() {
    long double term = 1, sum = 1;
    for (int k = 1; k < 30; ++k) {
        term *= 0.25L / (static_cast<long double>(k) * k);
        sum += term;
    }
    return static_cast<double>(sum);
}

vir::PotentialV VFamily::potential() const {
    const double p_ = p, q_ = q, s_ = s, r_ = r, w_ = w;
    vir::PotentialVFunctions fn;
    fn.V = [=](double a, double b) {
        return p_ * (1 - std::cos(a)) + 0.5 * q_ * (b - 1) * (b - 1) + s_ * (1 - std::cos(a)) * (b - 1) +
               r_ * std::sin(a) * std::sin(a) * b * b * b + w_ * std::sin(a) * (b - 1) * (b - 1);
    };
    fn.V1 = [=](double a, double b) {
        return p_ * std::sin(a) + s_ * std::sin(a) * (b - 1) + r_ * std::sin(2 * a) * b * b * b +
               w_ * std::cos(a) * (b - 1) * (b - 1);
    };
    fn.V2 = [=](double a, double b) {
        return q_ * (b - 1) + s_ * (1 - std::cos(a)) + 3 * r_ * std::sin(a) * std::sin(a) * b * b +
               2 * w_ * std::sin(a) * (b - 1);
    };
    fn.V11 = [=](double a, double b) {
        return p_ * std::cos(a) + s_ * std::cos(a) * (b - 1) + 2 * r_ * std::cos(2 * a) * b * b * b -
               w_ * std::sin(a) * (b - 1) * (b - 1);
    };
    fn.V12 = [=](double a, double b) {
        return s_ * std::sin(a) + 3 * r_ * std::sin(2 * a) * b * b + 2 * w_ * std::cos(a) * (b - 1);
    };
    fn.V22 = [=](double a, double b) { return q_ + 6 * r_ * std::sin(a) * std::sin(a) * b + 2 * w_ * std::sin(a); };
    fn.V112 = [=](double a, double b) {
        return s_ * std::cos(a) + 6 * r_ * std::cos(2 * a) * b * b - 2 * w_ * std::sin(a) * (b - 1);
    };
    return vir::PotentialV(fn, "family");
}

VFamily random_v_family(Rng& rng) {
    return VFamily{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5),
                   rng.uniform(-0.5, 0.5)};
}

std::vector<vir::GeneralPotentialU> generic_u_potentials() {
    std::vector<vir::GeneralPotentialU> out;
    {
        // (1 - cos x1) x2 g(x3), g = 1 + 0.1 sin x3
        auto g = [](double z) { return 1 + 0.1 * std::sin(z); };
        auto g1 = [](double z) { return 0.1 * std::cos(z); };
        auto g2 = [](double z) { return -0.1 * std::sin(z); };
        vir::PotentialUFunctions f;
        f.U = [=](double a, double b, double c) { return (1 - std::cos(a)) * b * g(c); };
        f.U1 = [=](double a, double b, double c) { return std::sin(a) * b * g(c); };
        f.U11 = [=](double a, double b, double c) { return std::cos(a) * b * g(c); };
        f.U12 = [=](double a, double, double c) { return std::sin(a) * g(c); };
        f.U13 = [=](double a, double b, double c) { return std::sin(a) * b * g1(c); };
        f.U22 = [](double, double, double) { return 0.0; };
        f.U23 = [=](double a, double, double c) { return (1 - std::cos(a)) * g1(c); };
        f.U112 = [=](double a, double, double c) { return std::cos(a) * g(c); };
        f.U123 = [=](double a, double, double c) { return std::sin(a) * g1(c); };
        f.U233 = [=](double a, double, double c) { return (1 - std::cos(a)) * g2(c); };
        out.emplace_back(f, "linear-in-slope");
    }
    {
        // sin(x1 + 0.5) x2^2 h(x3), h = 1 + 0.2 cos x3
        auto h = [](double z) { return 1 + 0.2 * std::cos(z); };
        auto h1 = [](double z) { return -0.2 * std::sin(z); };
        auto h2 = [](double z) { return -0.2 * std::cos(z); };
        vir::PotentialUFunctions f;
        f.U = [=](double a, double b, double c) { return std::sin(a + 0.5) * b * b * h(c); };
        f.U1 = [=](double a, double b, double c) { return std::cos(a + 0.5) * b * b * h(c); };
        f.U11 = [=](double a, double b, double c) { return -std::sin(a + 0.5) * b * b * h(c); };
        f.U12 = [=](double a, double b, double c) { return 2 * std::cos(a + 0.5) * b * h(c); };
        f.U13 = [=](double a, double b, double c) { return std::cos(a + 0.5) * b * b * h1(c); };
        f.U22 = [=](double a, double, double c) { return 2 * std::sin(a + 0.5) * h(c); };
        f.U23 = [=](double a, double b, double c) { return 2 * std::sin(a + 0.5) * b * h1(c); };
        f.U112 = [=](double a, double b, double c) { return -2 * std::sin(a + 0.5) * b * h(c); };
        f.U123 = [=](double a, double b, double c) { return 2 * std::cos(a + 0.5) * b * h1(c); };
        f.U233 = [=](double a, double b, double c) { return 2 * std::sin(a + 0.5) * b * h2(c); };
        out.emplace_back(f, "quadratic-in-slope");
    }
    {
        // exp(sin(x1 - 2 x3)) x2^3
        auto E = [](double a, double c) { return std::exp(std::sin(a - 2 * c)); };
        auto C = [](double a, double c) { return std::cos(a - 2 * c); };
        auto S = [](double a, double c) { return std::sin(a - 2 * c); };
        auto K = [=](double a, double c) { return (C(a, c) * C(a, c) - S(a, c)) * E(a, c); };
        vir::PotentialUFunctions f;
        f.U = [=](double a, double b, double c) { return E(a, c) * b * b * b; };
        f.U1 = [=](double a, double b, double c) { return C(a, c) * E(a, c) * b * b * b; };
        f.U11 = [=](double a, double b, double c) { return K(a, c) * b * b * b; };
        f.U12 = [=](double a, double b, double c) { return 3 * C(a, c) * E(a, c) * b * b; };
        f.U13 = [=](double a, double b, double c) { return -2 * K(a, c) * b * b * b; };
        f.U22 = [=](double a, double b, double c) { return 6 * E(a, c) * b; };
        f.U23 = [=](double a, double b, double c) { return -6 * C(a, c) * E(a, c) * b * b; };
        f.U112 = [=](double a, double b, double c) { return 3 * K(a, c) * b * b; };
        f.U123 = [=](double a, double b, double c) { return -6 * K(a, c) * b * b; };
        f.U233 = [=](double a, double b, double c) { return 12 * K(a, c) * b * b; };
        out.emplace_back(f, "cubic-traveling");
    }
    return out;
}

PeriodicField extrapolate_coefficient(const std::vector<double>& eps, const std::vector<PeriodicField>& residuals,
                                      int order) {
    const std::size_t m = eps.size();
    PeriodicField out = PeriodicField::zeros(residuals.front().size());
    for (std::size_t i = 0; i < m; ++i) {
        double w = 1;  // Lagrange basis at 0
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) w *= eps[j] / (eps[j] - eps[i]);
        }
        out += residuals[i] * (w / std::pow(eps[i], order));
    }
    return out;
}

namespace {

vir::VirasoroElement next_from(const PeriodicField& z, const vir::VirasoroElement& cur, double Omega) {
    const CircleDiffeo f_next(z);
    const double F_next = cur.F + vir::bott_cocycle(cur.f, vir::invert(f_next)) - Omega;
    return {f_next, F_next};
}

Eigen::VectorXd to_vec(const PeriodicField& u) {
    return Eigen::Map<const Eigen::VectorXd>(u.values().data(), static_cast<Eigen::Index>(u.size()));
}

}  // namespace

VariationalSolve solve_by_gradient(const vir::VirasoroElement& prev, const vir::VirasoroElement& cur, double Omega,
                                   const vir::PotentialV& pot, double target, int max_iter) {
    const std::size_t n = cur.size();
    // Start from omega_{k+1} = omega_k.
    const vir::VirasoroElement omega_k = vir::vir_product(prev, vir::vir_inverse(cur));
    PeriodicField z = vir::compose(vir::invert(omega_k.f), cur.f).centered_displacement();

    auto gradient = [&](const PeriodicField& zz) {
        return vir::action_gradient(prev, cur, next_from(zz, cur, Omega), pot).displacement;
    };
    auto jacobian = [&](const PeriodicField& zz, const PeriodicField& g0) {
        const double h = 1e-5;
        Eigen::MatrixXd J(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            PeriodicField zp = zz;
            zp[j] += h;
            J.col(static_cast<Eigen::Index>(j)) = (to_vec(gradient(zp)) - to_vec(g0)) / h;
        }
        return J;
    };

    VariationalSolve result{CircleDiffeo(z), next_from(z, cur, Omega), 0.0, 0};
    PeriodicField g = gradient(z);
    double norm = g.max_abs();
    Eigen::MatrixXd J = jacobian(z, g);
    for (int it = 1; it <= max_iter && norm > target; ++it) {
        const Eigen::VectorXd dz = J.partialPivLu().solve(-to_vec(g));
        PeriodicField trial = z;
        for (std::size_t j = 0; j < n; ++j) trial[j] += dz[static_cast<Eigen::Index>(j)];
        const PeriodicField gt = gradient(trial);
        const double nt = gt.max_abs();
        if (nt > 0.5 * norm) {
            J = jacobian(trial, gt);  // stalled: start again from a fresh Jacobian
        } else {
            // Broyden rank-one update
            const Eigen::VectorXd dg = to_vec(gt) - to_vec(g);
            J += (dg - J * dz) * dz.transpose() / dz.squaredNorm();
        }
        z = trial;
        g = gt;
        norm = nt;
        result.iterations = it;
    }
    result.next = next_from(z, cur, Omega);
    result.omega_next = vir::compose(cur.f, vir::invert(result.next.f));
    result.gradient_norm = vir::action_gradient(prev, cur, result.next, pot).max_norm();
    return result;
}

PeriodicField predicted_gradient(const PeriodicField& el2, const CircleDiffeo& f_cur) {
    const std::size_t n = el2.size();
    const PeriodicField c = f_cur.centered_displacement();
    const PeriodicField slope = vir::spectral_derivative(c, 1) + 1.0;
    // Evaluate el2 at f_cur(x_j) by summing its discrete Fourier series directly.
    PeriodicField out = PeriodicField::zeros(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = el2.node(j) + c[j];
        long double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            // Dirichlet-kernel interpolation with the Nyquist cosine split evenly
            const double d = y - el2.node(i);
            const double half = d / 2;
            const double den = std::sin(half);
            double kern;
            if (std::abs(den) < 1e-14) {
                kern = 1.0;
            } else {
                kern = std::sin(static_cast<double>(n) * half) * std::cos(half) / (static_cast<double>(n) * den);
            }
            s += el2[i] * kern;
        }
        out[j] = two_pi / static_cast<double>(n) * static_cast<double>(s) * slope[j];
    }
    return out;
}

double max_abs_diff(const PeriodicField& a, const PeriodicField& b) { return (a - b).max_abs(); }

double circle_distance(const PeriodicField& a, const PeriodicField& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = std::remainder(a[j] - b[j], two_pi);
        m = std::max(m, std::abs(d));
    }
    return m;
}

}  // namespace oracle
