#pragma once

#include "ckdv/airy.hpp"
#include "ckdv/grid.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace ckdv {

/// Similarity coordinates of (rho, tau): s = (6 rho)^{1/3}, z = tau / s.
struct SelfSimilarPoint {
    double rho = 0.0;
    double tau = 0.0;
    double z = 0.0;
    double s = 0.0;
};

SelfSimilarPoint self_similar_point(double rho, double tau);

/// Exact cKdV solitary wave A = -6 d^2/dtau^2 log(offset + F(z)/s).
/// Throws DenominatorSignError when offset*s + F(z) <= 0.
double soliton_amplitude(double rho, double tau, const SolitonSpec& spec);

/// Same, for raw Airy coefficients (gamma not tied to alpha and beta).
double soliton_amplitude(double rho, double tau, const AiryQuadratic& q, double offset);

/// Samples soliton_amplitude(rho, .) on the grid nodes.
RealField soliton_field(double rho, const SpectralGrid& grid, const SolitonSpec& spec);

struct BilinearReport {
    double sup_abs = 0.0;  ///< sup over the grid of |bilinear left-hand side|
    double scale = 0.0;    ///< sup over the grid of the largest single term
    double relative = 0.0; ///< sup_abs / scale (0 when scale is 0)
};

/// Bilinear (Hirota) form of the cKdV equation evaluated on
/// f = offset + F(z)/s with exact rho and tau derivatives. The form is
/// homogeneous of degree two in f, so f is normalised by max(offset, |F|
/// coefficients) before evaluation.
BilinearReport bilinear_residual(double rho, const SpectralGrid& grid, const SolitonSpec& spec);
BilinearReport bilinear_residual(double rho, const SpectralGrid& grid, const AiryQuadratic& q, double offset);

struct ZeroMeanReport {
    double quadrature = 0.0;  ///< integral of A over [-T, T]
    double left_tail = 0.0;   ///< exact integral over (-inf, -T]
    double right_tail = 0.0;  ///< exact integral over [T, inf)
    double defect = 0.0;      ///< quadrature + left_tail + right_tail
};

/// Quadrature of A(rho, .) over [-T, T] completed with the exact boundary
/// terms -6/s F'/(offset s + F) of the antiderivative.
ZeroMeanReport zero_mean_defect(double rho, const SolitonSpec& spec, double half_width);

struct WindowGrowth {
    std::vector<double> windows;  ///< T values
    std::vector<double> values;   ///< I(T) = integral_{-T}^{0} A^2
    double slope = 0.0;           ///< least-squares c in I ~ c ln T + d
};

/// Growth of the squared L2 norm of A over [-T, 0].
WindowGrowth window_l2_growth(double rho, const SolitonSpec& spec, const std::vector<double>& windows);

/// Integral of fn over [a, b]: 20-point Gauss rule on panels no wider than
/// half the local oscillation length of the soliton tail at radius rho.
double integrate_soliton_tail(const std::function<double(double)>& fn, double rho, double a, double b);

/// Radial Boussinesq wave u(r, t) built from the solitary wave, evaluated
/// in the physical variables (r, t). Equals eps^2 A(eps^3 r, eps (t - r)).
double physical_wave(double r, double t, double eps, const SolitonSpec& spec);

/// Local maxima of |A(rho, .)| on [tau_lo, tau_hi] located by dense sampling
/// and parabolic refinement; returns (tau, |A|) pairs.
std::vector<std::pair<double, double>> soliton_envelope_peaks(double rho, const SolitonSpec& spec, double tau_lo,
                                                              double tau_hi, double step);

/// Zeros of A(rho, .) on [tau_lo, tau_hi] (sign changes refined by bisection).
std::vector<double> soliton_zeros(double rho, const SolitonSpec& spec, double tau_lo, double tau_hi, double step);

} // namespace ckdv
