#pragma once

// Drivers shared by the CLI, the acceptance suite and the Python module.

#include "ckdv/airy.hpp"
#include "ckdv/boussinesq.hpp"
#include "ckdv/ckdv.hpp"
#include "ckdv/grid.hpp"
#include "ckdv/residual.hpp"

#include <cstddef>
#include <vector>

namespace ckdv {

/// Least-squares slope of log y against log x. Needs >= 2 points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Smooth periodic-compatible version of a field: tanh ramps over the outer
/// `ramp` fraction of the domain on each side, followed by a Gaussian bump
/// inside the left ramp that removes the mean.
RealField window_field(const RealField& f, double ramp = 0.1);

struct WindowedSolitonSetup {
    SolitonSpec spec{1e8, 0.0};
    double rho0 = 20.0;
    double rho1 = 22.0;
    std::size_t n = 2048;
    double tau_lo = -250.0;
    double tau_hi = 150.0;
    double d_rho = 4e-3;
    double interior = 0.6;  ///< central fraction of the domain used for comparison
};

struct WindowedSolitonResult {
    double rel_error = 0.0;   ///< interior sup error / interior sup of the exact solution
    double abs_error = 0.0;
    double exact_sup = 0.0;
    double final_mean = 0.0;
};

/// Evolves the windowed closed-form soliton from rho0 to rho1 and compares
/// with the closed form on the interior of the domain.
WindowedSolitonResult windowed_soliton_run(const WindowedSolitonSetup& setup);

/// Smooth zero-mean cKdV data -2 a (tau/w) exp(-(tau/w)^2).
RealField derivative_of_gaussian(const SpectralGrid& grid, double amplitude, double width);

/// Throws ConfigError when a field is not negligible (> 1e-8 of its sup)
/// at the ends of the periodic domain, e.g. a pulse wider than the grid.
void require_localized(const RealField& f, const char* what);

/// Slope of log y against log x, or NaN when fewer than `min_points`
/// points are given or some value is not positive.
double optional_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points = 3);

struct ResidualSweepSetup {
    std::vector<double> eps{0.2, 0.14, 0.1, 0.07};
    std::size_t n = 256;
    double length = 80.0;
    double amplitude = 1.0;
    double width = 2.0;
    double rho0 = 1.0;
    double rho1 = 1.5;
    double d_rho = 1e-3;
    int snapshots = 11;  ///< equally spaced radii, endpoints included
};

struct ResidualSweepResult {
    std::vector<ResidualReport> rows;
    double slope_l2 = 0.0;    ///< NaN for fewer than three eps values
    double slope_sup = 0.0;
    double slope_anti = 0.0;
};

/// One cKdV source (undealiased, so that it solves the equation the
/// residual is built on) and the residual norms for every eps.
ResidualSweepResult residual_sweep(const ResidualSweepSetup& setup);

struct Theorem1Setup {
    std::vector<double> eps{0.12, 0.1, 0.08, 0.065};
    std::size_t n = 256;
    double length = 40.0;
    double amplitude = 1.0;
    double width = 1.0;
    double rho0 = 1.0;
    double rho1 = 1.5;
    double d_rho = 1e-3;
    double dr = 0.2;
    double energy_bound = 1000.0;
    SpatialOptions spatial{};
};

struct Theorem1Row {
    ApproximationError error;
    GronwallReport energy;
    double seconds = 0.0;
};

/// Boussinesq run over [rho0, rho1] eps^-3 started from the ansatz, with
/// the sup error and the energy of R = eps^{-7/2}(v - eps^2 A) recorded at
/// every step.
Theorem1Row theorem1_run(const Theorem1Setup& setup, double eps);

struct Theorem1Result {
    std::vector<Theorem1Row> rows;
    double slope_u = 0.0;  ///< NaN for fewer than three eps values
    double slope_v = 0.0;
};

/// All eps values, run concurrently when `parallel` is set.
Theorem1Result theorem1_sweep(const Theorem1Setup& setup, bool parallel = true);

struct Profile {
    std::vector<double> x;
    std::vector<double> y;
};

/// Shape of a profile made of one negative pulse and an oscillatory tail.
struct PulseMorphology {
    double x_pulse = 0.0;  ///< location of the global minimum
    double y_pulse = 0.0;
    int front_sign_changes = 0;  ///< on the side away from the tail
    int tail_sign_changes = 0;
    double gap = 0.0;       ///< distance from the pulse to the nearest tail zero
    double tail_max = 0.0;  ///< max |y| beyond that zero
    /// negative pulse, quiet front, at least three tail oscillations, and
    /// a pulse taller than any tail oscillation
    bool leading_pulse() const;
};

PulseMorphology pulse_morphology(const Profile& p, bool tail_on_left);

struct FigureSetup {
    SolitonSpec spec{1e8, 0.0};
    std::vector<double> rhos{1.0, 20.0, 100.0, 500.0};
    double tau_lo = -150.0;
    double tau_hi = 100.0;
    double tau_step = 0.05;
    double eps = 0.1;
    std::vector<double> times{50.0, 100.0};
    double r_lo = 0.5;
    double r_step = 0.025;  ///< u is sampled on [r_lo, 3 t]
};

struct FigureData {
    std::vector<Profile> a_profiles;  ///< A(rho, tau) for each rho
    std::vector<Profile> u_profiles;  ///< u(r, t) against r for each t
};

FigureData figure_profiles(const FigureSetup& setup);

/// Pulses lead with a tail behind them, and the pulse shrinks and moves
/// away from its tail as rho (or t) grows.
bool figure_morphology_ok(const FigureData& data);

} // namespace ckdv
