#include "virasoro/continuum_limit.hpp"

#include "virasoro/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vir {
namespace {

constexpr double embedding_margin = 0.5;

void require_same_size(const PeriodicField& a, const PeriodicField& b, const char* who) {
    if (a.size() != b.size()) throw std::invalid_argument(std::string(who) + ": fields must share a grid");
}

}  // namespace

void ContinuumEmbedding::validate() const {
    if (!is_valid_grid_size(v.size())) throw std::invalid_argument("ContinuumEmbedding: invalid grid size");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("ContinuumEmbedding: eps must be >= 0");
    if (!std::isfinite(A)) throw std::invalid_argument("ContinuumEmbedding: A must be finite");
    const double slope = spectral_derivative(v, 1).max_abs();
    if (!(eps * slope < embedding_margin)) {
        std::ostringstream msg;
        msg << "ContinuumEmbedding: eps * max|v'| = " << eps * slope << " violates the margin " << embedding_margin;
        throw std::invalid_argument(msg.str());
    }
}

TimeSampledField frozen_field(const PeriodicField& v0) {
    const std::size_t n = v0.size();
    return {[v0](double) { return v0; }, [n](double) { return PeriodicField::zeros(n); }};
}

VelocityPair embed(const ContinuumEmbedding& emb) {
    emb.validate();
    return {CircleDiffeo(emb.v * emb.eps), emb.eps * emb.A};
}

PeriodicField epsilon1_term(const GeneralPotentialU& U, const PeriodicField& v) {
    const PeriodicField vx = spectral_derivative(v, 1);
    PeriodicField out = PeriodicField::zeros(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = v.node(j);
        const double cv = U.U233(x, 1, x) + 2 * U.U123(x, 1, x) + U.U112(x, 1, x) - U.U11(x, 1, x) - U.U13(x, 1, x);
        const double cvx = -2 * U.U1(x, 1, x) + 2 * U.U23(x, 1, x) + 2 * U.U12(x, 1, x);
        out[j] = cv * v[j] + cvx * vx[j];
    }
    return out;
}

PeriodicField ch_family_operator(const PeriodicField& v, const PeriodicField& v_t, const CHParams& params) {
    require_same_size(v, v_t, "ch_family_operator");
    const PeriodicField vx = spectral_derivative(v, 1);
    const PeriodicField vxx = spectral_derivative(v, 2);
    const PeriodicField vxxx = spectral_derivative(v, 3);
    const PeriodicField vxxt = spectral_derivative(v_t, 2);
    PeriodicField out = PeriodicField::zeros(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        out[j] = params.alpha * (v_t[j] + 3 * v[j] * vx[j]) -
                 params.beta * (vxxt[j] + 2 * vx[j] * vxx[j] + v[j] * vxxx[j]) - params.b * vxxx[j];
    }
    return out;
}

PeriodicField second_order_term(const PeriodicField& v, const PeriodicField& v_t, const PotentialV& V, double A) {
    require_same_size(v, v_t, "second_order_term");
    const double a = V.alpha();
    const double b = V.beta();
    const PeriodicField vx = spectral_derivative(v, 1);
    const PeriodicField vxx = spectral_derivative(v, 2);
    const PeriodicField vxxx = spectral_derivative(v, 3);
    const PeriodicField vxxt = spectral_derivative(v_t, 2);
    PeriodicField out = PeriodicField::zeros(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        out[j] = a * (v_t[j] - 3 * v[j] * vx[j]) - b * (vxxt[j] - 2 * vxx[j] * vx[j] - v[j] * vxxx[j]) -
                 4 * A * vxxx[j];
    }
    return out;
}

CHParams limit_params(const PotentialV& V, double A) { return {V.alpha(), V.beta(), -4 * A}; }

PeriodicField richardson_coefficient(std::span<const double> eps, std::span<const PeriodicField> residuals, int order) {
    if (eps.size() != residuals.size() || eps.empty()) {
        throw std::invalid_argument("richardson_coefficient: need matching, non-empty eps and residual lists");
    }
    const std::size_t m = eps.size();
    const std::size_t terms = std::min<std::size_t>(3, m);
    const std::size_t n = residuals.front().size();
    Eigen::MatrixXd design(m, terms);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(eps[i] > 0)) throw std::invalid_argument("richardson_coefficient: eps must be positive");
        if (residuals[i].size() != n) throw std::invalid_argument("richardson_coefficient: grid mismatch");
        for (std::size_t c = 0; c < terms; ++c) design(i, c) = std::pow(eps[i], static_cast<double>(c));
    }
    const auto qr = design.colPivHouseholderQr();
    Eigen::MatrixXd rhs(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const double scale = std::pow(eps[i], order);
        for (std::size_t j = 0; j < n; ++j) rhs(i, j) = residuals[i][j] / scale;
    }
    const Eigen::MatrixXd coeffs = qr.solve(rhs);
    PeriodicField out = PeriodicField::zeros(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = coeffs(0, j);
    return out;
}

ScalingStudy scaling_study(const Potential& pot, const TimeSampledField& field, double A, double t0,
                           std::span<const double> eps_list, std::optional<int> leading_order) {
    if (eps_list.size() < 4) throw std::invalid_argument("scaling_study: eps_list needs at least 4 entries");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0)) throw std::invalid_argument("scaling_study: eps must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
            throw std::invalid_argument("scaling_study: eps_list must be strictly decreasing");
        }
    }
    if (!field.v || !field.v_t) throw std::invalid_argument("scaling_study: field evaluators must be set");
    if (leading_order && (*leading_order < 0 || *leading_order > 4)) {
        throw std::invalid_argument("scaling_study: leading order must lie in [0, 4]");
    }

    const std::size_t m = eps_list.size();
    std::vector<PeriodicField> residuals(m);
    parallel_for(m, [&](std::size_t i) {
        const double eps = eps_list[i];
        const VelocityPair wk = embed({field.v(t0), A, eps});
        const VelocityPair wn = embed({field.v(t0 + eps), A, eps});
        residuals[i] = el2_residual(wk.omega, wn.omega, wk.Omega, wn.Omega, pot);
    });

    ScalingStudy out;
    std::vector<double> norms(m);
    for (std::size_t i = 0; i < m; ++i) {
        norms[i] = residuals[i].max_abs();
        out.samples.push_back({eps_list[i], norms[i]});
    }
    out.fit = fit_power_law(eps_list, norms);
    out.leading_order = leading_order ? *leading_order
                                      : std::clamp(static_cast<int>(std::lround(out.fit.exponent)), 1, 3);
    out.coefficient_field = richardson_coefficient(eps_list, residuals, out.leading_order);
    return out;
}

FieldComparison compare_fields(const PeriodicField& measured, const PeriodicField& reference) {
    require_same_size(measured, reference, "compare_fields");
    const std::size_t n = measured.size();
    if (n == 0) throw std::invalid_argument("compare_fields: empty fields");
    double mean_m = 0, mean_r = 0;
    for (std::size_t j = 0; j < n; ++j) {
        mean_m += measured[j];
        mean_r += reference[j];
    }
    mean_m /= static_cast<double>(n);
    mean_r /= static_cast<double>(n);
    double smm = 0, srr = 0, smr = 0, dot = 0, rr = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double dm = measured[j] - mean_m;
        const double dr = reference[j] - mean_r;
        smm += dm * dm;
        srr += dr * dr;
        smr += dm * dr;
        dot += measured[j] * reference[j];
        rr += reference[j] * reference[j];
    }
    FieldComparison c;
    c.correlation = (smm > 0 && srr > 0) ? smr / std::sqrt(smm * srr) : 0.0;
    c.ratio = rr > 0 ? dot / rr : 0.0;
    const double ref_max = reference.max_abs();
    c.max_rel_error = ref_max > 0 ? (measured - reference).max_abs() / ref_max : (measured - reference).max_abs();
    double worst = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(reference[j]) > 1e-3 * ref_max) {
            worst = std::max(worst, std::abs(measured[j] - reference[j]) / std::abs(reference[j]));
        }
    }
    c.pointwise_rel_error = worst;
    return c;
}

}  // namespace vir
