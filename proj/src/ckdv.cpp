#include "ckdv/ckdv.hpp"

#include "ckdv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ckdv {

namespace {

// A and B carried together in Fourier space.
struct Pair {
    Spectrum a;
    Spectrum b;
};

Pair axpy(const Pair& x, double h, const Pair& k)
{
    Pair r = x;
    for (std::size_t m = 0; m < r.a.size(); ++m) {
        r.a[m] += h * k.a[m];
        r.b[m] += h * k.b[m];
    }
    return r;
}

void propagate(Pair& p, const SpectralGrid& g, double from, double to)
{
    for (std::size_t m = 0; m < p.a.size(); ++m) {
        // the odd dispersive symbol is dropped on the Nyquist mode
        const double k = m == g.nyquist() ? 0.0 : g.wavenumber(m);
        const Complex e = ckdv_linear_propagator(k, from, to);
        p.a[m] *= e;
        p.b[m] *= e;
    }
}

// Nonlinear part of dA/drho, (A^2)_t / 2, and of dB/drho, (A^2 - mean)/2.
Pair nonlinear(const Spectrum& a_hat, double rho, const SpectralGrid& g, bool dealias, const CkdvForcing& forcing)
{
    Spectrum a = a_hat;
    if (dealias) dealias_two_thirds(a);
    std::vector<double> sq = g.inverse(a);
    for (double& x : sq) x *= x;
    Spectrum s = g.forward(sq);
    if (dealias) dealias_two_thirds(s);
    Pair out{Spectrum(s.size()), Spectrum(s.size())};
    for (std::size_t m = 1; m < g.nyquist(); ++m) {
        out.b[m] = 0.5 * s[m];
        out.a[m] = Complex(0.0, g.wavenumber(m)) * out.b[m];
    }
    if (forcing) {
        const RealField f = forcing(rho);
        if (!(f.grid() == g)) throw std::invalid_argument("forcing lives on a different grid");
        const Spectrum fh = g.forward(f.values());
        for (std::size_t m = 0; m < fh.size(); ++m) out.a[m] += fh[m];
        for (std::size_t m = 1; m < g.nyquist(); ++m) out.b[m] += fh[m] / Complex(0.0, g.wavenumber(m));
    }
    return out;
}

} // namespace

CkdvState make_ckdv_state(double rho, RealField A, std::optional<double> mean_tol)
{
    RealField B = spectral_antiderivative(A, mean_tol);
    return {rho, std::move(A), std::move(B)};
}

void validate(const CkdvRunConfig& cfg)
{
    if (!(cfg.rho0 > 0.0) || !(cfg.rho1 > cfg.rho0)) throw std::invalid_argument("need 0 < rho0 < rho1");
    if (!(cfg.d_rho > 0.0)) throw std::invalid_argument("d_rho must be positive");
}

Complex ckdv_linear_propagator(double k, double rho_from, double rho_to)
{
    if (!(rho_from > 0.0) || rho_to < rho_from) throw std::invalid_argument("propagator needs 0 < rho_from <= rho_to");
    return std::sqrt(rho_from / rho_to) * std::polar(1.0, 0.5 * k * k * k * (rho_to - rho_from));
}

RealField ckdv_rho_derivative(const RealField& A, double rho, bool dealias)
{
    const auto& g = A.grid();
    Spectrum a = g.forward(A.values());
    const Pair nl = nonlinear(a, rho, g, dealias, {});
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double k = m == g.nyquist() ? 0.0 : g.wavenumber(m);
        // -A/(2 rho) - (ik)^3 A / 2 = (-1/(2 rho) + i k^3/2) A
        a[m] = Complex(-0.5 / rho, 0.5 * k * k * k) * a[m] + nl.a[m];
    }
    return RealField(g, g.inverse(a));
}

RealField ckdv_rhs_with_forcing(const CkdvState& state, const RealField& forcing, bool dealias)
{
    return ckdv_rho_derivative(state.A, state.rho, dealias) + forcing;
}

CkdvState ckdv_step(const CkdvState& state, double h, const CkdvRunConfig& cfg, const CkdvForcing& forcing)
{
    if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
    const auto& g = state.A.grid();
    const double r0 = state.rho;
    const double rh = r0 + 0.5 * h;
    const double r1 = r0 + h;

    const Pair u{g.forward(state.A.values()), g.forward(state.B.values())};
    const Pair k1 = nonlinear(u.a, r0, g, cfg.dealias, forcing);

    Pair a2 = axpy(u, 0.5 * h, k1);
    propagate(a2, g, r0, rh);
    const Pair k2 = nonlinear(a2.a, rh, g, cfg.dealias, forcing);

    Pair u_half = u;
    propagate(u_half, g, r0, rh);
    const Pair a3 = axpy(u_half, 0.5 * h, k2);
    const Pair k3 = nonlinear(a3.a, rh, g, cfg.dealias, forcing);

    // E(r0->r1) u + h E(rh->r1) k3
    Pair a4 = u;
    propagate(a4, g, r0, r1);
    Pair k3_moved = k3;
    propagate(k3_moved, g, rh, r1);
    a4 = axpy(a4, h, k3_moved);
    const Pair k4 = nonlinear(a4.a, r1, g, cfg.dealias, forcing);

    // u_{n+1} = E(r0->r1)[u + h/6 k1] + E(rh->r1)[h/3 (k2 + k3)] + h/6 k4
    Pair out = axpy(u, h / 6.0, k1);
    propagate(out, g, r0, r1);
    Pair mid = axpy(k2, 1.0, k3);
    propagate(mid, g, rh, r1);
    out = axpy(out, h / 3.0, mid);
    out = axpy(out, h / 6.0, k4);

    CkdvState next{r1, RealField(g, g.inverse(out.a)), RealField(g, g.inverse(out.b))};
    const double before = state.A.sup_norm();
    const double after = next.A.sup_norm();
    if (!next.A.all_finite() || (before > 0.0 && after > 10.0 * before)) {
        throw StepUnstable("cKdV step at rho = " + std::to_string(r0) + " grew sup|A| from " + std::to_string(before) +
                           " to " + std::to_string(after));
    }
    return next;
}

std::vector<CkdvState> ckdv_evolve(const RealField& A0, const CkdvRunConfig& cfg, const CkdvForcing& forcing)
{
    validate(cfg);
    if (!(A0.grid() == cfg.grid)) throw std::invalid_argument("initial data lives on a different grid");
    std::vector<double> stops;
    for (double r : cfg.outputs) {
        if (r > cfg.rho0 && r < cfg.rho1) stops.push_back(r);
    }
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    stops.push_back(cfg.rho1);

    std::vector<CkdvState> out;
    out.push_back(make_ckdv_state(cfg.rho0, A0, cfg.mean_tol));
    CkdvState cur = out.back();
    for (double stop : stops) {
        const double span = stop - cur.rho;
        const auto steps = static_cast<long>(std::ceil(span / cfg.d_rho - 1e-9));
        const double h = span / static_cast<double>(std::max(1L, steps));
        const double start = cur.rho;
        for (long i = 0; i < steps; ++i) {
            cur = ckdv_step(cur, h, cfg, forcing);
            cur.rho = start + h * static_cast<double>(i + 1);
        }
        cur.rho = stop;
        out.push_back(cur);
    }
    return out;
}

} // namespace ckdv
