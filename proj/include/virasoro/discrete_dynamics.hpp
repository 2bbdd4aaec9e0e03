#pragma once

// Discrete Euler-Lagrange machinery for S = sum_k L(X_k, X_{k+1}) with a
// right-invariant L(X, Y) = H(X Y^{-1}).

#include "virasoro/lagrangian.hpp"

#include <span>
#include <vector>

namespace vir {

/// Discrete angular velocity (omega_k, Omega_k) = X_{k-1} X_k^{-1}.
struct VelocityPair {
    CircleDiffeo omega;
    double Omega = 0.0;

    VirasoroElement as_element() const { return {omega, Omega}; }
};

/// The sequence X_0, X_1, ... on a common grid.
class DiscretePath {
public:
    explicit DiscretePath(std::vector<VirasoroElement> elements);

    const std::vector<VirasoroElement>& elements() const { return elements_; }
    std::size_t length() const { return elements_.size(); }
    std::size_t grid_size() const { return elements_.front().size(); }
    const VirasoroElement& operator[](std::size_t k) const { return elements_[k]; }

private:
    std::vector<VirasoroElement> elements_;
};

/// (omega_k, Omega_k) = X_{k-1} X_k^{-1} for k = 1 .. length-1.
std::vector<VelocityPair> velocities(const DiscretePath& path);

/// Omega_{k+1} - Omega_k for each consecutive pair. Requires >= 2 pairs.
std::vector<double> el1_residual(std::span<const VelocityPair> v);

/// Left-hand side of the second discrete Euler-Lagrange equation at every
/// node, with psi = omega_next^{-1}. V-class inputs use the partials of
/// U(x1, x2, x3) = V(x1 - x3, x2) evaluated through V directly.
PeriodicField el2_residual(const CircleDiffeo& omega_k, const CircleDiffeo& omega_next, double Omega_k,
                           double Omega_next, const PotentialV& pot);
PeriodicField el2_residual(const CircleDiffeo& omega_k, const CircleDiffeo& omega_next, double Omega_k,
                           double Omega_next, const GeneralPotentialU& pot);
PeriodicField el2_residual(const CircleDiffeo& omega_k, const CircleDiffeo& omega_next, double Omega_k,
                           double Omega_next, const Potential& pot);

/// Same residual, parameterized directly by the displacement of
/// psi = omega_next^{-1} (no inversion). This is the map the stepper solves.
PeriodicField el2_residual_psi(const CircleDiffeo& omega_k, const PeriodicField& psi_displacement, double Omega_k,
                               double Omega_next, const Potential& pot);

struct ActionGradient {
    PeriodicField displacement;  // dPhi / du_cur(x_j)
    double central = 0.0;        // dPhi / dF_cur

    /// Max-norm over all n + 1 components.
    double max_norm() const;
};

/// Brute-force gradient of Phi = L(prev, cur) + L(cur, next) with respect to
/// the n displacement samples of cur.f and to cur.F, by central differences.
/// The three elements are band-limited interpolants of their samples; Phi is
/// evaluated after resampling them onto oversample * n nodes, so that
/// composing a node perturbation with a large displacement does not alias.
/// oversample = 1 differentiates the n-node discretization itself.
ActionGradient action_gradient(const VirasoroElement& prev, const VirasoroElement& cur,
                               const VirasoroElement& next, const PotentialV& pot, double h = 1e-6,
                               std::size_t oversample = 4);

struct SolverOptions {
    double tol = 1e-10;          // max-norm of the residual
    int max_iter = 50;
    double fd_step = 1e-6;       // Jacobian column step
    double armijo = 1e-4;        // sufficient decrease constant
    double backtrack = 0.5;      // step shrink factor
    int max_backtracks = 30;
    double min_slope = 0.05;     // abort if omega_next' drops below this

    void validate() const;
};

struct StepResult {
    CircleDiffeo omega_next;
    int iterations = 0;
    double residual = 0.0;  // max-norm at the accepted iterate
};

/// Solves el2_residual(omega_k, omega_next, Omega, Omega) = 0 for omega_next
/// by damped Newton on the displacement of psi = omega_next^{-1}, starting
/// from psi = omega_k^{-1}. Throws NoConvergence or MonotonicityLoss.
StepResult step(const CircleDiffeo& omega_k, double Omega, const PotentialV& pot, const SolverOptions& opts = {});

struct Trajectory {
    DiscretePath path;
    std::vector<double> el2_residuals;  // per solved step, recomputed from the path
    double max_el1 = 0.0;               // from velocities recomputed from the path
    double max_el2 = 0.0;
};

/// Iterates step() from X_0 = f0 with first velocity omega1, reconstructing
/// X_k = (omega_k, Omega)^{-1} X_{k-1}. Returns nsteps + 1 elements. Errors
/// from step k are rethrown with the index prefixed.
Trajectory trajectory(const VirasoroElement& f0, const VelocityPair& omega1, int nsteps, const PotentialV& pot,
                      const SolverOptions& opts = {});

}  // namespace vir
