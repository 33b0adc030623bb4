#include "ckdv/soliton.hpp"

#include "ckdv/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ckdv {

namespace {

double amplitude_from_jet(double s, const ProfileJet& j, double offset)
{
    const double denom = offset * s + j.f;
    if (!(denom > 0.0)) {
        throw DenominatorSignError("offset*s + F(z) = " + std::to_string(denom) + " is not positive");
    }
    const double r1 = j.d1 / denom;
    return -6.0 / (s * s) * (j.d2 / denom - r1 * r1);
}

double scale_of(const AiryQuadratic& q, double offset)
{
    return std::max({offset, std::abs(q.alpha) + std::abs(q.beta) + std::abs(q.gamma), 1e-300});
}

} // namespace

SelfSimilarPoint self_similar_point(double rho, double tau)
{
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    const double s = std::cbrt(6.0 * rho);
    return {rho, tau, tau / s, s};
}

double soliton_amplitude(double rho, double tau, const AiryQuadratic& q, double offset)
{
    const SelfSimilarPoint p = self_similar_point(rho, tau);
    if (q.alpha == 0.0 && q.beta == 0.0 && q.gamma == 0.0) return 0.0;
    return amplitude_from_jet(p.s, profile_jet(p.z, q), offset);
}

double soliton_amplitude(double rho, double tau, const SolitonSpec& spec)
{
    return soliton_amplitude(rho, tau, spec.coefficients(), spec.offset);
}

RealField soliton_field(double rho, const SpectralGrid& grid, const SolitonSpec& spec)
{
    const AiryQuadratic q = spec.coefficients();
    return RealField::sample(grid, [&](double tau) { return soliton_amplitude(rho, tau, q, spec.offset); });
}

BilinearReport bilinear_residual(double rho, const SpectralGrid& grid, const AiryQuadratic& q, double offset)
{
    const double s = std::cbrt(6.0 * rho);
    const double c = scale_of(q, offset);
    BilinearReport rep;
    for (double tau : grid.nodes()) {
        const double z = tau / s;
        const ProfileJet j = profile_jet(z, q);
        const double s2 = s * s;
        const double s4 = s2 * s2;
        const double s5 = s4 * s;
        const double f = (offset + j.f / s) / c;
        const double ft = j.d1 / s2 / c;
        const double ftt = j.d2 / (s2 * s) / c;
        const double fttt = j.d3 / s4 / c;
        const double ftttt = j.d4 / s5 / c;
        const double fr = -2.0 * (z * j.d1 + j.f) / s4 / c;
        const double frt = -2.0 * (2.0 * j.d1 + z * j.d2) / s5 / c;
        const double terms[] = {2.0 * f * frt, -2.0 * fr * ft, f * ft / rho, f * ftttt, -4.0 * ft * fttt,
                                3.0 * ftt * ftt};
        double sum = 0.0;
        double biggest = 0.0;
        for (double t : terms) {
            sum += t;
            biggest = std::max(biggest, std::abs(t));
        }
        rep.sup_abs = std::max(rep.sup_abs, std::abs(sum));
        rep.scale = std::max(rep.scale, biggest);
    }
    rep.relative = rep.scale > 0.0 ? rep.sup_abs / rep.scale : 0.0;
    return rep;
}

BilinearReport bilinear_residual(double rho, const SpectralGrid& grid, const SolitonSpec& spec)
{
    return bilinear_residual(rho, grid, spec.coefficients(), spec.offset);
}

double integrate_soliton_tail(const std::function<double(double)>& fn, double rho, double a, double b)
{
    using boost::math::quadrature::gauss;
    const double s = std::cbrt(6.0 * rho);
    double total = 0.0;
    double x = a;
    while (x < b) {
        // local wavenumber of cos(4/3 |z|^{3/2}) is 2 sqrt(|z|) / s
        const double zabs = std::max(0.0, -x / s);
        const double k = 2.0 * std::sqrt(zabs) / s;
        double width = k > 0.0 ? std::min(0.5, 0.5 * std::numbers::pi / k) : 0.5;
        width = std::min(width, b - x);
        total += gauss<double, 20>::integrate(fn, x, x + width);
        x += width;
    }
    return total;
}

ZeroMeanReport zero_mean_defect(double rho, const SolitonSpec& spec, double half_width)
{
    if (!(half_width > 0.0)) throw std::invalid_argument("half width must be positive");
    ZeroMeanReport rep;
    const AiryQuadratic q = spec.coefficients();
    if (q.alpha == 0.0 && q.beta == 0.0) return rep;
    const double s = std::cbrt(6.0 * rho);
    auto antiderivative = [&](double tau) {
        const ProfileJet j = profile_jet(tau / s, q);
        return -6.0 / s * j.d1 / (spec.offset * s + j.f);
    };
    rep.quadrature = integrate_soliton_tail([&](double tau) { return soliton_amplitude(rho, tau, q, spec.offset); },
                                            rho, -half_width, half_width);
    rep.right_tail = -antiderivative(half_width);
    rep.left_tail = antiderivative(-half_width);
    rep.defect = rep.quadrature + rep.left_tail + rep.right_tail;
    return rep;
}

WindowGrowth window_l2_growth(double rho, const SolitonSpec& spec, const std::vector<double>& windows)
{
    if (windows.empty()) throw std::invalid_argument("window list is empty");
    if (!std::is_sorted(windows.begin(), windows.end()) || windows.front() <= 0.0) {
        throw std::invalid_argument("windows must be positive and increasing");
    }
    const AiryQuadratic q = spec.coefficients();
    WindowGrowth out;
    out.windows = windows;
    auto a2 = [&](double tau) {
        const double a = soliton_amplitude(rho, tau, q, spec.offset);
        return a * a;
    };
    double running = 0.0;
    double upper = 0.0;  // right end of the window is fixed at tau = 0
    for (double T : windows) {
        running += integrate_soliton_tail(a2, rho, -T, upper);
        upper = -T;
        out.values.push_back(running);
    }
    if (windows.size() >= 2) {
        const double n = static_cast<double>(windows.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < windows.size(); ++i) {
            const double x = std::log(windows[i]);
            sx += x;
            sy += out.values[i];
            sxx += x * x;
            sxy += x * out.values[i];
        }
        out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return out;
}

double physical_wave(double r, double t, double eps, const SolitonSpec& spec)
{
    if (!(r > 0.0) || !(eps > 0.0)) throw std::invalid_argument("physical_wave needs r > 0 and eps > 0");
    const AiryQuadratic q = spec.coefficients();
    if (q.alpha == 0.0 && q.beta == 0.0) return 0.0;
    const double big_s = std::cbrt(6.0 * r);
    const ProfileJet j = profile_jet((t - r) / big_s, q);
    const double denom = spec.offset * big_s * eps + j.f;
    if (!(denom > 0.0)) throw DenominatorSignError("physical_wave: denominator is not positive");
    const double r1 = j.d1 / denom;
    return -6.0 / (big_s * big_s) * (j.d2 / denom - r1 * r1);
}

std::vector<std::pair<double, double>> soliton_envelope_peaks(double rho, const SolitonSpec& spec, double tau_lo,
                                                              double tau_hi, double step)
{
    const AiryQuadratic q = spec.coefficients();
    const auto count = static_cast<std::size_t>(std::floor((tau_hi - tau_lo) / step)) + 1;
    std::vector<double> mag(count);
    for (std::size_t i = 0; i < count; ++i) {
        mag[i] = std::abs(soliton_amplitude(rho, tau_lo + static_cast<double>(i) * step, q, spec.offset));
    }
    std::vector<std::pair<double, double>> peaks;
    for (std::size_t i = 1; i + 1 < count; ++i) {
        if (mag[i] >= mag[i - 1] && mag[i] > mag[i + 1]) {
            // vertex of the parabola through the three samples
            const double d = mag[i - 1] - 2.0 * mag[i] + mag[i + 1];
            const double off = d != 0.0 ? 0.5 * (mag[i - 1] - mag[i + 1]) / d : 0.0;
            const double peak = mag[i] - 0.25 * (mag[i - 1] - mag[i + 1]) * off;
            peaks.emplace_back(tau_lo + (static_cast<double>(i) + off) * step, peak);
        }
    }
    return peaks;
}

std::vector<double> soliton_zeros(double rho, const SolitonSpec& spec, double tau_lo, double tau_hi, double step)
{
    const AiryQuadratic q = spec.coefficients();
    auto a = [&](double tau) { return soliton_amplitude(rho, tau, q, spec.offset); };
    std::vector<double> zeros;
    double x0 = tau_lo;
    double f0 = a(x0);
    for (double x1 = tau_lo + step; x1 <= tau_hi; x1 += step) {
        const double f1 = a(x1);
        if (f0 == 0.0) {
            zeros.push_back(x0);
        } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
            double lo = x0, hi = x1, flo = f0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = a(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return zeros;
}

} // namespace ckdv
