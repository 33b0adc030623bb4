#pragma once

#include "ckdv/grid.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ckdv {

/// Snapshot of the cKdV flow: A(rho, .) and its zero-mean antiderivative B.
struct CkdvState {
    double rho = 0.0;
    RealField A;
    RealField B;
};

/// Builds a state from A, computing B = antiderivative of A.
/// Throws MeanValueError if A does not have zero mean.
CkdvState make_ckdv_state(double rho, RealField A, std::optional<double> mean_tol = {});

struct CkdvRunConfig {
    double rho0 = 1.0;
    double rho1 = 2.0;
    double d_rho = 1e-3;
    SpectralGrid grid = make_grid(256, 40.0);
    bool dealias = true;
    /// Radii (inside (rho0, rho1)) at which snapshots are kept in addition
    /// to rho0 and rho1.
    std::vector<double> outputs;
    /// Zero-mean tolerance for the initial data (default 1e-10 sup|A0|).
    std::optional<double> mean_tol;
};

/// Throws std::invalid_argument unless 0 < rho0 < rho1 and d_rho > 0.
void validate(const CkdvRunConfig& cfg);

/// Forcing added to the right-hand side of dA/drho, as a function of rho.
using CkdvForcing = std::function<RealField(double rho)>;

/// sqrt(rho_from/rho_to) exp(i k^3 (rho_to - rho_from)/2).
Complex ckdv_linear_propagator(double k, double rho_from, double rho_to);

/// dA/drho from the equation itself: (-A/rho - A_ttt + (A^2)_t)/2.
RealField ckdv_rho_derivative(const RealField& A, double rho, bool dealias = false);

/// dA/drho plus a forcing term.
RealField ckdv_rhs_with_forcing(const CkdvState& state, const RealField& forcing, bool dealias = false);

/// One integrating-factor RK4 step. Throws StepUnstable when sup|A| grows
/// by more than a factor 10.
CkdvState ckdv_step(const CkdvState& state, double d_rho, const CkdvRunConfig& cfg,
                    const CkdvForcing& forcing = {});

/// Integrates from rho0 to rho1; returns snapshots at rho0, cfg.outputs and
/// rho1 (in increasing order). Steps are shortened so every output radius
/// is hit exactly.
std::vector<CkdvState> ckdv_evolve(const RealField& A0, const CkdvRunConfig& cfg, const CkdvForcing& forcing = {});

} // namespace ckdv
