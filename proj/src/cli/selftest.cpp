#include "ckdv/cli.hpp"

#include "ckdv/airy.hpp"
#include "ckdv/boussinesq.hpp"
#include "ckdv/ckdv.hpp"
#include "ckdv/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ckdv {

namespace {

using std::numbers::pi;

double max_diff(const RealField& a, const RealField& b) { return (a - b).sup_norm(); }

SelfCheck wronskian()
{
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double z = -10.0 + 13.0 * i / 999.0;
        const AiryValues a = airy_eval(z);
        worst = std::max(worst, std::abs(a.ai * a.bi_prime - a.ai_prime * a.bi - 1.0 / pi));
    }
    return {"airy wronskian", worst <= 1e-10, worst, 1e-10};
}

SelfCheck propagator()
{
    CkdvRunConfig cfg;
    cfg.grid = make_grid(64, 2.0 * pi * 8.0);
    cfg.d_rho = 2e-3;
    const double k = 3.0 / 8.0;
    const RealField a0 = RealField::sample(cfg.grid, [k](double t) { return 1e-10 * std::cos(k * t); });
    const auto traj = ckdv_evolve(a0, cfg);
    const Complex e = ckdv_linear_propagator(k, cfg.rho0, cfg.rho1);
    const Spectrum out = cfg.grid.forward(traj.back().A.values());
    const Spectrum in = cfg.grid.forward(a0.values());
    const double err = std::abs(out[3] / in[3] - e) / std::abs(e);
    return {"ckdv linear propagator", err <= 1e-9, err, 1e-9};
}

SelfCheck bessel(bool flip)
{
    // modes m/4 on a grid of length 8 pi, each a J0/Y0 combination
    const auto grid = make_grid(32, 8.0 * pi);
    const double amp = 1e-8;
    auto at = [&](double r) {
        BoussinesqState s{r, RealField(grid), RealField(grid)};
        auto x = grid.nodes();
        for (int m : {1, 2, 3, 5, 7}) {
            const double k = m / 4.0;
            const auto [v, dv] = bessel_mode(k, 1.0, 0.5 * m - 1.0, r);
            for (std::size_t j = 0; j < grid.size(); ++j) {
                s.v.mutable_values()[j] += amp * v * std::cos(k * x[j] + m);
                s.w.mutable_values()[j] += amp * dv * std::cos(k * x[j] + m);
            }
        }
        return s;
    };
    SpatialOptions opts;
    opts.flip_b2_sign = flip;
    double err = std::numeric_limits<double>::infinity();
    try {
        const auto traj = boussinesq_evolve(at(50.0), 100.0, 0.025, {75.0}, opts);
        err = 0.0;
        for (const auto& s : traj) {
            const auto exact = at(s.r);
            err = std::max(err, max_diff(s.v, exact.v) / exact.v.sup_norm());
            err = std::max(err, max_diff(s.w, exact.w) / exact.w.sup_norm());
        }
    } catch (const Error&) {
        // blow-up counts as failure
    }
    return {"boussinesq bessel oracle", err <= 1e-6, err, 1e-6};
}

SelfCheck round_trip(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(-0.2, 0.5);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = dist(rng);
        worst = std::max(worst, std::abs(v_to_u(u_to_v(u)) - u) / std::max(std::abs(u), 1e-300));
    }
    return {"u-v round trip", worst <= 1e-14, worst, 1e-14};
}

SelfCheck resolvent(std::mt19937_64& rng)
{
    const auto grid = make_grid(128, 40.0);
    std::normal_distribution<double> nd;
    std::vector<double> gv(grid.size()), rv(grid.size());
    for (auto& x : gv) x = nd(rng);
    for (auto& x : rv) x = nd(rng);
    RealField g(grid, gv);
    g *= 0.1 / g.sup_norm();
    const RealField rhs(grid, rv);
    const auto res = resolvent_solve(g, rhs, 1e-12);
    // a-posteriori: apply the operator to the answer
    const double r = (res.h - apply_b2(product(g, res.h)) - rhs).l2_norm();
    return {"resolvent a-posteriori residual", r <= 1e-12 && res.iterations <= 30, r, 1e-12};
}

SelfCheck zero_mean()
{
    CkdvRunConfig cfg;
    cfg.rho0 = 1.0;
    cfg.rho1 = 2.0;
    cfg.d_rho = 1e-3;
    const RealField a0 = RealField::sample(cfg.grid, [](double t) { return -2.0 * t * std::exp(-t * t); });
    const auto traj = ckdv_evolve(a0, cfg);
    const double m = std::abs(traj.back().A.mean()) / traj.back().A.sup_norm();
    return {"ckdv zero mean over 1000 steps", m <= 1e-10, m, 1e-10};
}

} // namespace

std::vector<SelfCheck> run_self_checks(bool flip_b2_sign)
{
    std::mt19937_64 rng(20240611);
    return {wronskian(), propagator(), bessel(flip_b2_sign), round_trip(rng), resolvent(rng), zero_mean()};
}

} // namespace ckdv
