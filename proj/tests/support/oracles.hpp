#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the library's numerics except where a test needs a
// library object as input (a CircleDiffeo to feed, a potential to wrap).

#include "virasoro/ch_family.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Deterministic generator for randomized tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

private:
    std::mt19937_64 gen_;
};

/// Closed-form smooth periodic function with its derivatives:
/// u(x) = sum_k a_k cos(kx) + b_k sin(kx), k = 1..3.
struct TrigPoly {
    double a[4] = {0, 0, 0, 0};
    double b[4] = {0, 0, 0, 0};

    double value(double x) const;
    double deriv(double x, int order) const;
    vir::PeriodicField sample(std::size_t n) const;
};

/// Random trig polynomial with max|u| <= amplitude and max|u'| <= 0.5.
TrigPoly random_trig(Rng& rng, double amplitude);

/// Random smooth diffeomorphism: rotation by `shift` plus a TrigPoly
/// displacement. f(x) = x + shift + p(x).
struct SmoothDiffeo {
    TrigPoly p;
    double shift = 0.0;

    double operator()(double x) const { return x + shift + p.value(x); }
    double deriv(double x) const { return 1.0 + p.deriv(x, 1); }
    double deriv2(double x) const { return p.deriv(x, 2); }
    vir::CircleDiffeo sample(std::size_t n) const;
};

SmoothDiffeo random_diffeo(Rng& rng, double amplitude, bool rotate = true);

/// Periodic trapezoid rule of fn on m nodes.
double quadrature(const std::function<double(double)>& fn, std::size_t m);

/// Bott cocycle of two closed-form diffeomorphisms by m-node quadrature.
double bott_reference(const SmoothDiffeo& f, const SmoothDiffeo& g, std::size_t m);

/// Sum_k (1/4)^k / (k!)^2: I0(1) by its power series.
double bessel_i0_one();

/// Admissible V-family with analytic partials:
/// p(1-cos a) + (q/2)(b-1)^2 + s(1-cos a)(b-1) + r sin^2 a b^3 + w sin a (b-1)^2.
struct VFamily {
    double p, q, s, r, w;
    vir::PotentialV potential() const;
};

VFamily random_v_family(Rng& rng);

/// The three generic (not V-class) densities with analytic partials.
std::vector<vir::GeneralPotentialU> generic_u_potentials();

/// Lagrange extrapolation to eps = 0 of R(eps)/eps^order, nodewise, exact for
/// a polynomial of degree eps.size() - 1.
vir::PeriodicField extrapolate_coefficient(const std::vector<double>& eps,
                                           const std::vector<vir::PeriodicField>& residuals, int order);

/// Independent variational solve: find X_{k+1} with Omega_{k+1} = Omega such
/// that the action gradient with respect to X_k vanishes, by a Newton-chord
/// iteration on the displacement of f_{k+1} with a finite-difference Jacobian
/// of vir::action_gradient. Returns omega_{k+1} = f_k o f_{k+1}^{-1}.
struct VariationalSolve {
    vir::CircleDiffeo omega_next;
    vir::VirasoroElement next;
    double gradient_norm = 0.0;
    int iterations = 0;
};

VariationalSolve solve_by_gradient(const vir::VirasoroElement& prev, const vir::VirasoroElement& cur, double Omega,
                                   const vir::PotentialV& pot, double target = 1e-9, int max_iter = 40);

/// Stationarity predicted from the EL2 residual: (2pi/n) EL2(f(x_j)) f'(x_j).
vir::PeriodicField predicted_gradient(const vir::PeriodicField& el2, const vir::CircleDiffeo& f_cur);

double max_abs_diff(const vir::PeriodicField& a, const vir::PeriodicField& b);

/// Max distance between two displacements as circle maps (mod 2pi).
double circle_distance(const vir::PeriodicField& a, const vir::PeriodicField& b);

}  // namespace oracle
