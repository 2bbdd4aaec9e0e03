#pragma once

// Small-step expansion of the discrete Euler-Lagrange residual: embedding of
// smooth velocity fields as near-identity group velocities, the closed-form
// first- and second-order terms, and the residual scaling study.

#include "virasoro/discrete_dynamics.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace vir {

/// Coefficients of alpha(v_t + 3 v v_x) - beta(v_xxt + 2 v_x v_xx + v v_xxx) - b v_xxx = 0.
struct CHParams {
    double alpha = 1.0;
    double beta = 1.0;
    double b = 0.0;
};

/// A velocity profile at one time plus the central velocity and step size.
struct ContinuumEmbedding {
    PeriodicField v;
    double A = 0.0;
    double eps = 0.0;

    /// eps >= 0 and eps * max|v'| < 0.5.
    void validate() const;
};

/// Time-dependent periodic field with its time derivative.
struct TimeSampledField {
    std::function<PeriodicField(double)> v;
    std::function<PeriodicField(double)> v_t;
};

/// Frozen profile: v(t) = v0, v_t = 0.
TimeSampledField frozen_field(const PeriodicField& v0);

/// (id + eps v, eps A).
VelocityPair embed(const ContinuumEmbedding& emb);

/// The eps^1 coefficient of the residual for a general U, evaluated at
/// (x, 1, x):
/// U233 v - 2 U1 v_x + 2 U23 v_x + 2 U123 v + U112 v - U11 v + 2 U12 v_x - U13 v.
PeriodicField epsilon1_term(const GeneralPotentialU& U, const PeriodicField& v);

/// alpha(v_t + 3 v v_x) - beta(v_xxt + 2 v_x v_xx + v v_xxx) - b v_xxx, all
/// x-derivatives spectral.
PeriodicField ch_family_operator(const PeriodicField& v, const PeriodicField& v_t, const CHParams& params);

/// V11(0,1)(v_t - 3 v v_x) - V22(0,1)(v_xxt - 2 v_xx v_x - v v_xxx) - 4 A v_xxx.
PeriodicField second_order_term(const PeriodicField& v, const PeriodicField& v_t, const PotentialV& V, double A);

/// CH parameters the second-order term maps to under t -> -t:
/// (V11(0,1), V22(0,1), -4A).
CHParams limit_params(const PotentialV& V, double A);

struct ScalingSample {
    double eps = 0.0;
    double residual_max = 0.0;
};

struct ScalingStudy {
    std::vector<ScalingSample> samples;
    PowerLawFit fit;
    int leading_order = 0;
    PeriodicField coefficient_field;  // extrapolated eps^leading_order coefficient
};

/// Nodewise least-squares fit of R(eps)/eps^order = c0 + c1 eps + c2 eps^2
/// (fewer terms when fewer samples); returns c0.
PeriodicField richardson_coefficient(std::span<const double> eps, std::span<const PeriodicField> residuals, int order);

/// For each eps: omega_k from v(t0), omega_{k+1} from v(t0 + eps), both with
/// central part eps A; records max|el2_residual|; fits the power law and
/// extracts the leading coefficient field. leading_order defaults to the
/// fitted exponent rounded to an integer in [1, 3].
ScalingStudy scaling_study(const Potential& pot, const TimeSampledField& field, double A, double t0,
                           std::span<const double> eps_list, std::optional<int> leading_order = std::nullopt);

struct FieldComparison {
    double correlation = 0.0;     // Pearson, nodewise
    double ratio = 0.0;           // least-squares c in measured ~ c * reference
    double max_rel_error = 0.0;   // max|measured - reference| / max|reference|
    double pointwise_rel_error = 0.0;  // over nodes where |reference| > 1e-3 max|reference|
};

FieldComparison compare_fields(const PeriodicField& measured, const PeriodicField& reference);

}  // namespace vir
