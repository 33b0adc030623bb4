#pragma once

#include "ckdv/ckdv.hpp"
#include "ckdv/grid.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace ckdv {

// Change of variables v = u + u^2 and the remainder N of its inverse
// u = v - v^2 + N(v). All of these throw BranchError for v <= -1/4.
double u_to_v(double u);
RealField u_to_v(const RealField& u);
double v_to_u(double v);
RealField v_to_u(const RealField& v);
double n_of_v(double v);
double n1_of_v(double v);
double n2_of_v(double v);

struct SpatialOptions {
    double rhs_tol = 1e-12;  ///< L2 residual target of the resolvent solve
    int max_iter = 200;
    double v_max = 0.25;     ///< AmplitudeGuard threshold on sup|v|
    bool flip_b2_sign = false;  ///< debug hook: replaces B^2 by -B^2
};

struct ResolventResult {
    RealField h;
    int iterations = 0;
    double residual = 0.0;  ///< L2 norm of h - B^2(g h) - rhs
};

/// Solves h - B^2(g h) = rhs by the Neumann iteration h <- rhs + B^2(g h).
/// The tolerance is absolute in L2 with a floor at round-off level.
/// Throws NoConvergence on divergence or after max_iter iterations.
ResolventResult resolvent_solve(const RealField& g, const RealField& rhs, double tol, int max_iter = 200,
                                bool flip_b2_sign = false);

/// (r, v(r, .), w = dv/dr) on the periodic t-grid.
struct BoussinesqState {
    double r = 0.0;
    RealField v;
    RealField w;
};

/// Right-hand side (w, f(v, w)) of the first-order radial system.
std::pair<RealField, RealField> spatial_rhs(const BoussinesqState& state, const SpatialOptions& opts = {});

/// One classical RK4 step in r. Throws StepUnstable on a tenfold growth
/// of max(sup|v|, sup|w|).
BoussinesqState boussinesq_step(const BoussinesqState& state, double dr, const SpatialOptions& opts = {});

using BoussinesqObserver = std::function<void(const BoussinesqState&)>;

/// Integrates from init.r to r1 with steps of at most dr. Returns the
/// states at init.r, at each radius in `outputs` and at r1; the observer
/// (if set) sees every accepted state including the first.
std::vector<BoussinesqState> boussinesq_evolve(const BoussinesqState& init, double r1, double dr,
                                               const std::vector<double>& outputs = {},
                                               const SpatialOptions& opts = {},
                                               const BoussinesqObserver& observer = {});

/// Long-wave ansatz v = eps^2 A(eps^3 r, eps (t - r)) built from a cKdV
/// trajectory. The t-grid has the same n as the tau-grid, length L/eps and
/// center c/eps, so eps t_j = tau_j.
struct AnsatzConfig {
    double eps = 0.1;
    std::shared_ptr<const std::vector<CkdvState>> source;
    double r0 = 0.0;
};

/// Checks 0 < eps <= 0.3 and a non-empty, increasing source; sets r0.
AnsatzConfig make_ansatz_config(double eps, std::vector<CkdvState> trajectory);

SpectralGrid ansatz_grid(const AnsatzConfig& cfg);

struct AnsatzFields {
    RealField a;       ///< A(eps^3 r, eps (t - r)) on the t-grid
    RealField psi;     ///< eps^2 a
    RealField psi_r;   ///< d psi / dr = eps^2 (-eps A_tau + eps^3 A_rho)
};

/// Throws OutOfRange if eps^3 r lies outside the trajectory. Between
/// snapshots A is interpolated by cubic Hermite polynomials in rho with
/// slopes from the cKdV equation.
AnsatzFields ansatz_fields(const AnsatzConfig& cfg, double r);

BoussinesqState make_ansatz_state(const AnsatzConfig& cfg, double at_r);

struct ApproximationError {
    double eps = 0.0;
    double sup_u_error = 0.0;  ///< sup over r, t of |v_to_u(v) - eps^2 A|
    double sup_v_error = 0.0;  ///< sup over r, t of |v - eps^2 A|
    double r_at_sup = 0.0;     ///< radius where sup_u_error is attained
};

/// Compares a trajectory with the ansatz at every state it contains.
ApproximationError approximation_error(const std::vector<BoussinesqState>& traj, const AnsatzConfig& cfg);

/// Running version of approximation_error, usable as an observer.
class ErrorMonitor {
public:
    explicit ErrorMonitor(AnsatzConfig cfg);
    void operator()(const BoussinesqState& state);
    const ApproximationError& result() const { return err_; }

private:
    AnsatzConfig cfg_;
    ApproximationError err_;
};

/// Per-mode solution of v'' + v'/r + kappa^2 v = 0, kappa^2 = k^2/(1+k^2),
/// built from J0 and Y0 (1 and log r when k = 0): returns (v(r), v'(r))
/// for coefficients c1, c2.
std::pair<double, double> bessel_mode(double k, double c1, double c2, double r);

} // namespace ckdv
