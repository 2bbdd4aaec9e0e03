#pragma once

// Pseudospectral solver for the Camassa-Holm family
//   alpha(v_t + 3 v v_x) - beta(v_xxt + 2 v_x v_xx + v v_xxx) - b v_xxx = 0
// in momentum form m_t + v m_x + 2 m v_x = b v_xxx, m = alpha v - beta v_xx,
// plus conserved quantities and the symmetry-orbit classifier.

#include "virasoro/continuum_limit.hpp"

#include <functional>
#include <string_view>

namespace vir {

enum class OrbitTag { CamassaHolm, KdV, DispersionlessKdV, HunterSaxton, ThirdDerivativeConstraint };

std::string_view to_string(OrbitTag tag);

/// v -> lambda v, t -> mu t, x -> lambda mu x, composed after the Galilean
/// boost v -> v + c, x -> x + d t; the transformed equation is then
/// multiplied by scale.
struct SymmetryTransform {
    double lambda = 1.0;
    double mu = 1.0;
    double c = 0.0;
    double d = 0.0;
    double scale = 1.0;
};

struct OrbitClass {
    OrbitTag tag = OrbitTag::CamassaHolm;
    SymmetryTransform normalization;
    CHParams canonical;  // transform_params(input, normalization)
};

/// Coefficients of |x| <= 1e-12 count as vanishing. Throws
/// std::invalid_argument for (0, 0, 0), which is not an equation.
OrbitClass classify_orbit(const CHParams& params);

/// Coefficients of the equation satisfied by the transformed solutions.
/// Throws std::invalid_argument if the boost is incompatible with the
/// equation (alpha != 0 requires d = 3c).
CHParams transform_params(const CHParams& params, const SymmetryTransform& t);

/// z(x, t) = lambda (v(x / (lambda mu) - d t / mu, t / mu) + c), with its time
/// derivative. On the circle 1 / (lambda mu) must be a nonzero integer so the
/// result stays 2pi-periodic; anything else is rejected.
TimeSampledField apply_symmetry(const TimeSampledField& field, const SymmetryTransform& t);

struct PDEState {
    PeriodicField v;
    double t = 0.0;
    CHParams params;
};

/// Right-hand side v_t of the dealiased semi-discrete system.
PeriodicField time_derivative(const PDEState& state);

/// Optional per-step callback, invoked after every accepted step.
using StepObserver = std::function<void(const PDEState&)>;

/// Integrating-factor RK4 with 2/3-rule dealiasing; the step is shrunk so an
/// integer number of steps lands exactly on t + T. The initial field is
/// projected onto the retained modes. Throws BlowUp, ZeroModeViolation, or
/// std::invalid_argument for alpha = beta = 0 or (alpha = 0 and mean(v) != 0).
PDEState evolve(const PDEState& state, double T, double dt, const StepObserver& observer = {});

/// int (alpha v^2 + beta v_x^2) dx.
double energy(const PDEState& state);

/// int v dx / 2pi.
double mean_momentum(const PDEState& state);

/// m_t + v m_x + 2 m v_x - b v_xxx with m = alpha v - beta v_xx and
/// m_t = alpha v_t - beta v_xxt.
PeriodicField momentum_form_residual(const PeriodicField& v, const PeriodicField& v_t, const CHParams& params);

/// Traveling wave of v_t + 3 v v_x + v_xxx = 0, i.e. params (1, 0, -1):
/// v = 4 kappa^2 sech^2(kappa(x - x0 - 4 kappa^2 t)), summed over enough
/// periodic images to be exact in double precision.
PeriodicField kdv_soliton(std::size_t n, double kappa, double x0, double t);

/// Its exact time derivative.
PeriodicField kdv_soliton_rate(std::size_t n, double kappa, double x0, double t);

/// Solution of the PDE started at `initial`, evaluated on demand by evolving
/// with steps of at most dt. Times before initial.t are rejected.
TimeSampledField solution_field(const PDEState& initial, double dt);

/// u(x, s) such that u(x, -s) solves the family with `params`, for s >= 0.
/// Since w(-x, -t) solves the family whenever w does, u(x, s) = w(-x, s)
/// with w evolved forward from w(x, 0) = v0(-x). Feeding the limit
/// parameters of (V, A) gives a field on which the second-order continuum
/// term vanishes.
TimeSampledField time_reversed_field(const PeriodicField& v0, const CHParams& params, double dt);

}  // namespace vir
