#include "virasoro/discrete_dynamics.hpp"

#include "virasoro/errors.hpp"
#include "virasoro/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vir {
namespace {

// Pieces of one diffeomorphism that the residual needs.
struct Jet {
    PeriodicField u;      // centered displacement
    PeriodicField slope;  // 1 + u'
    PeriodicField curv;   // u''
    PeriodicField log_slope_dd;  // (log(1 + u'))''
};

Jet make_jet(const PeriodicField& centered) {
    Jet j;
    j.u = centered;
    const PeriodicField du = spectral_derivative(centered, 1);
    if (!(du.min() > -1.0)) throw MonotonicityLoss("el2_residual: diffeomorphism derivative is nonpositive");
    j.slope = du + 1.0;
    j.curv = spectral_derivative(centered, 2);
    j.log_slope_dd = spectral_derivative(du.map([](double d) { return std::log1p(d); }), 2);
    return j;
}

// Terms evaluated along omega_k.
PeriodicField lower_terms(const Jet& w, double Omega_k, const PotentialV& v) {
    PeriodicField r = w.u;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double a = w.u[j];
        const double b = w.slope[j];
        const double v12 = v.V12(a, b);
        r[j] = -2.0 * Omega_k * w.log_slope_dd[j] - v.V1(a, b) * b + v12 * b * b + v.V22(a, b) * w.curv[j] * b -
               v12 * b;
    }
    return r;
}

PeriodicField lower_terms(const Jet& w, double Omega_k, const GeneralPotentialU& U) {
    PeriodicField r = w.u;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double x = r.node(j);
        const double a = x + w.u[j];
        const double b = w.slope[j];
        r[j] = -2.0 * Omega_k * w.log_slope_dd[j] - U.U1(a, b, x) * b + U.U12(a, b, x) * b * b +
               U.U22(a, b, x) * w.curv[j] * b + U.U23(a, b, x) * b;
    }
    return r;
}

// Terms evaluated along psi = omega_{k+1}^{-1}, arguments (x, 1/psi', psi).
PeriodicField upper_terms(const Jet& p, double Omega_next, const PotentialV& v) {
    PeriodicField r = p.u;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double s = p.slope[j];
        const double a = -p.u[j];
        const double b = 1.0 / s;
        const double v12 = v.V12(a, b);
        r[j] = 2.0 * Omega_next * p.log_slope_dd[j] + v.V1(a, b) * s - v12 + v.V22(a, b) * p.curv[j] / (s * s) +
               v12 * s;
    }
    return r;
}

PeriodicField upper_terms(const Jet& p, double Omega_next, const GeneralPotentialU& U) {
    PeriodicField r = p.u;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double x = r.node(j);
        const double s = p.slope[j];
        const double b = 1.0 / s;
        const double c = x + p.u[j];
        r[j] = 2.0 * Omega_next * p.log_slope_dd[j] + U.U1(x, b, c) * s - U.U12(x, b, c) +
               U.U22(x, b, c) * p.curv[j] / (s * s) - U.U23(x, b, c) * s;
    }
    return r;
}

PeriodicField lower_terms(const Jet& w, double Omega_k, const Potential& pot) {
    return std::visit([&](const auto& p) { return lower_terms(w, Omega_k, p); }, pot);
}

PeriodicField upper_terms(const Jet& p, double Omega_next, const Potential& pot) {
    return std::visit([&](const auto& q) { return upper_terms(p, Omega_next, q); }, pot);
}

template <class Pot>
PeriodicField el2_impl(const CircleDiffeo& omega_k, const CircleDiffeo& omega_next, double Omega_k,
                       double Omega_next, const Pot& pot) {
    if (omega_k.size() != omega_next.size()) throw std::invalid_argument("el2_residual: grid size mismatch");
    const Jet lower = make_jet(omega_k.centered_displacement());
    const Jet upper = make_jet(invert(omega_next).centered_displacement());
    return lower_terms(lower, Omega_k, pot) + upper_terms(upper, Omega_next, pot);
}

double l2(const PeriodicField& r) {
    double s = 0.0;
    for (double v : r.values()) s += v * v;
    return std::sqrt(s);
}

template <class E>
[[noreturn]] void rethrow_with_prefix(const E& e, const std::string& prefix) {
    throw E(prefix + e.what());
}

}  // namespace

DiscretePath::DiscretePath(std::vector<VirasoroElement> elements) : elements_(std::move(elements)) {
    if (elements_.size() < 2) throw std::invalid_argument("DiscretePath: need at least two elements");
    for (const auto& e : elements_) {
        if (e.size() != elements_.front().size()) throw std::invalid_argument("DiscretePath: mixed grid sizes");
    }
}

std::vector<VelocityPair> velocities(const DiscretePath& path) {
    std::vector<VelocityPair> out;
    out.reserve(path.length() - 1);
    for (std::size_t k = 1; k < path.length(); ++k) {
        VirasoroElement w = vir_product(path[k - 1], vir_inverse(path[k]));
        out.push_back({std::move(w.f), w.F});
    }
    return out;
}

std::vector<double> el1_residual(std::span<const VelocityPair> v) {
    if (v.size() < 2) throw std::invalid_argument("el1_residual: need at least two velocity pairs");
    std::vector<double> r(v.size() - 1);
    for (std::size_t k = 0; k + 1 < v.size(); ++k) r[k] = v[k + 1].Omega - v[k].Omega;
    return r;
}

PeriodicField el2_residual(const CircleDiffeo& omega_k, const CircleDiffeo& omega_next, double Omega_k,
                           double Omega_next, const PotentialV& pot) {
    return el2_impl(omega_k, omega_next, Omega_k, Omega_next, pot);
}

PeriodicField el2_residual(const CircleDiffeo& omega_k, const CircleDiffeo& omega_next, double Omega_k,
                           double Omega_next, const GeneralPotentialU& pot) {
    return el2_impl(omega_k, omega_next, Omega_k, Omega_next, pot);
}

PeriodicField el2_residual(const CircleDiffeo& omega_k, const CircleDiffeo& omega_next, double Omega_k,
                           double Omega_next, const Potential& pot) {
    return std::visit([&](const auto& p) { return el2_impl(omega_k, omega_next, Omega_k, Omega_next, p); }, pot);
}

PeriodicField el2_residual_psi(const CircleDiffeo& omega_k, const PeriodicField& psi_displacement, double Omega_k,
                               double Omega_next, const Potential& pot) {
    const Jet lower = make_jet(omega_k.centered_displacement());
    const Jet upper = make_jet(center_displacement(psi_displacement));
    return lower_terms(lower, Omega_k, pot) + upper_terms(upper, Omega_next, pot);
}

double ActionGradient::max_norm() const { return std::max(displacement.max_abs(), std::abs(central)); }

ActionGradient action_gradient(const VirasoroElement& prev, const VirasoroElement& cur, const VirasoroElement& next,
                               const PotentialV& pot, double h, std::size_t oversample) {
    const std::size_t n = cur.size();
    if (prev.size() != n || next.size() != n) throw std::invalid_argument("action_gradient: grid size mismatch");
    if (!(h > 0)) throw std::invalid_argument("action_gradient: h must be positive");
    if (oversample < 1 || (oversample & (oversample - 1)) != 0) {
        throw std::invalid_argument("action_gradient: oversample must be a power of two");
    }
    const std::size_t fine = n * oversample;
    auto refine = [fine](const PeriodicField& u, double F) {
        return VirasoroElement{CircleDiffeo(resample(u, fine)), F};
    };
    const VirasoroElement prev_f = refine(prev.f.centered_displacement(), prev.F);
    const VirasoroElement next_inv = vir_inverse(refine(next.f.centered_displacement(), next.F));
    auto phi = [&](const PeriodicField& u, double F) {
        const VirasoroElement c = refine(u, F);
        return eval_L(prev_f, c, pot) + eval_H(vir_product(c, next_inv), pot);
    };
    const PeriodicField u = cur.f.centered_displacement();

    ActionGradient g{PeriodicField::zeros(n), 0.0};
    std::vector<double> comp(n + 1, 0.0);
    parallel_for(n + 1, [&](std::size_t j) {
        if (j == n) {
            comp[j] = (phi(u, cur.F + h) - phi(u, cur.F - h)) / (2.0 * h);
            return;
        }
        PeriodicField up = u;
        PeriodicField um = u;
        up[j] += h;
        um[j] -= h;
        comp[j] = (phi(up, cur.F) - phi(um, cur.F)) / (2.0 * h);
    });
    for (std::size_t j = 0; j < n; ++j) g.displacement[j] = comp[j];
    g.central = comp[n];
    return g;
}

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver max_iter must be >= 1");
    if (!(fd_step > 0.0)) throw std::invalid_argument("solver fd_step must be positive");
    if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("solver armijo must lie in (0, 1)");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("solver backtrack must lie in (0, 1)");
    if (max_backtracks < 1) throw std::invalid_argument("solver max_backtracks must be >= 1");
    if (!(min_slope > 0.0 && min_slope < 1.0)) throw std::invalid_argument("solver min_slope must lie in (0, 1)");
}

StepResult step(const CircleDiffeo& omega_k, double Omega, const PotentialV& pot, const SolverOptions& opts) {
    opts.validate();
    if (!std::isfinite(Omega)) throw std::invalid_argument("step: Omega must be finite");
    const std::size_t n = omega_k.size();
    const Potential p = pot;
    const Jet lower = make_jet(omega_k.centered_displacement());
    const PeriodicField fixed = lower_terms(lower, Omega, p);
    auto residual = [&](const PeriodicField& z) {
        return fixed + upper_terms(make_jet(center_displacement(z)), Omega, p);
    };

    PeriodicField z = invert(omega_k).centered_displacement();
    PeriodicField r = residual(z);
    int iter = 0;
    while (r.max_abs() > opts.tol) {
        if (iter == opts.max_iter) {
            std::ostringstream msg;
            msg << "step: Newton did not reach tol " << opts.tol << " in " << opts.max_iter
                << " iterations (residual " << r.max_abs() << "); reduce the step or raise n";
            throw NoConvergence(msg.str());
        }
        ++iter;

        Eigen::MatrixXd J(n, n);
        parallel_for(n, [&](std::size_t col) {
            PeriodicField zp = z;
            zp[col] += opts.fd_step;
            const PeriodicField rp = residual(zp);
            for (std::size_t row = 0; row < n; ++row) J(row, col) = (rp[row] - r[row]) / opts.fd_step;
        });
        Eigen::VectorXd rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs(j) = -r[j];
        const Eigen::VectorXd delta = J.partialPivLu().solve(rhs);

        const double norm0 = l2(r);
        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < opts.max_backtracks; ++bt, lambda *= opts.backtrack) {
            PeriodicField trial = z;
            for (std::size_t j = 0; j < n; ++j) trial[j] += lambda * delta(j);
            PeriodicField rt;
            try {
                rt = residual(trial);
            } catch (const MonotonicityLoss&) {
                continue;
            }
            if (l2(rt) <= (1.0 - opts.armijo * lambda) * norm0) {
                z = std::move(trial);
                r = std::move(rt);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "step: line search failed at Newton iteration " << iter << " (residual " << r.max_abs() << ")";
            throw NoConvergence(msg.str());
        }
    }

    CircleDiffeo omega_next = invert(CircleDiffeo(z));
    const double slope = omega_next.min_slope();
    if (slope < opts.min_slope) {
        std::ostringstream msg;
        msg << "step: min omega_next' = " << slope << " below margin " << opts.min_slope;
        throw MonotonicityLoss(msg.str());
    }
    return {std::move(omega_next), iter, r.max_abs()};
}

Trajectory trajectory(const VirasoroElement& f0, const VelocityPair& omega1, int nsteps, const PotentialV& pot,
                      const SolverOptions& opts) {
    if (nsteps < 1) throw std::invalid_argument("trajectory: nsteps must be positive");
    if (f0.size() != omega1.omega.size()) throw std::invalid_argument("trajectory: grid size mismatch");
    opts.validate();

    std::vector<VirasoroElement> xs;
    xs.reserve(static_cast<std::size_t>(nsteps) + 1);
    xs.push_back(f0);
    CircleDiffeo omega = omega1.omega;
    const double Omega = omega1.Omega;
    xs.push_back(vir_product(vir_inverse(omega1.as_element()), f0));
    for (int k = 1; k < nsteps; ++k) {
        const std::string prefix = "step " + std::to_string(k) + ": ";
        try {
            omega = step(omega, Omega, pot, opts).omega_next;
        } catch (const NoConvergence& e) {
            rethrow_with_prefix(e, prefix);
        } catch (const MonotonicityLoss& e) {
            rethrow_with_prefix(e, prefix);
        }
        xs.push_back(vir_product(vir_inverse(VirasoroElement{omega, Omega}), xs.back()));
    }

    Trajectory t{DiscretePath(std::move(xs)), {}, 0.0, 0.0};
    const std::vector<VelocityPair> vel = velocities(t.path);
    if (vel.size() >= 2) {
        for (double e : el1_residual(vel)) t.max_el1 = std::max(t.max_el1, std::abs(e));
        for (std::size_t k = 0; k + 1 < vel.size(); ++k) {
            const double r = el2_residual(vel[k].omega, vel[k + 1].omega, vel[k].Omega, vel[k + 1].Omega, pot).max_abs();
            t.el2_residuals.push_back(r);
            t.max_el2 = std::max(t.max_el2, r);
        }
    }
    return t;
}

}  // namespace vir
