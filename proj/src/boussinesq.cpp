#include "ckdv/boussinesq.hpp"

#include "ckdv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ckdv {

namespace {

// small-u root of u + u^2 = v, written without cancellation
double small_root(double v)
{
    if (!(v > -0.25)) throw BranchError("v = " + std::to_string(v) + " is not above -1/4");
    return 2.0 * v / (1.0 + std::sqrt(1.0 + 4.0 * v));
}

template <typename Fn>
RealField pointwise(const RealField& f, Fn&& fn)
{
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = fn(f[j]);
    return RealField(f.grid(), std::move(out));
}

RealField b2(const RealField& f, bool flip)
{
    RealField out = apply_b2(f);
    if (flip) out *= -1.0;
    return out;
}

double state_size(const BoussinesqState& s) { return std::max(s.v.sup_norm(), s.w.sup_norm()); }

BoussinesqState combine(const BoussinesqState& s, double h, const RealField& dv, const RealField& dw)
{
    return {s.r + h, s.v + h * dv, s.w + h * dw};
}

} // namespace

double u_to_v(double u) { return u + u * u; }
RealField u_to_v(const RealField& u) { return pointwise(u, [](double x) { return u_to_v(x); }); }
double v_to_u(double v) { return small_root(v); }
RealField v_to_u(const RealField& v) { return pointwise(v, [](double x) { return v_to_u(x); }); }

double n_of_v(double v)
{
    const double u = small_root(v);
    return u * u * (u + v);
}

double n1_of_v(double v)
{
    const double u = small_root(v);
    return 2.0 * u * (u + 2.0 * v) / (1.0 + 2.0 * u);
}

double n2_of_v(double v)
{
    const double u = small_root(v);
    const double q = 1.0 + 2.0 * u;
    return 4.0 * u * (3.0 + 6.0 * u + 4.0 * u * u) / (q * q * q);
}

ResolventResult resolvent_solve(const RealField& g, const RealField& rhs, double tol, int max_iter, bool flip_b2_sign)
{
    if (!(g.grid() == rhs.grid())) throw std::invalid_argument("resolvent fields live on different grids");
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * rhs.l2_norm();
    const double target = std::max(tol, floor);
    ResolventResult res{rhs, 0, 0.0};
    double first = -1.0;
    for (int it = 0; it <= max_iter; ++it) {
        const RealField bgh = b2(product(g, res.h), flip_b2_sign);
        RealField defect = res.h - rhs;
        defect -= bgh;
        res.residual = defect.l2_norm();
        res.iterations = it;
        if (res.residual <= target) return res;
        if (first < 0.0) first = res.residual;
        if (!std::isfinite(res.residual) || res.residual > 1e3 * first) {
            throw NoConvergence("resolvent iteration diverges (residual " + std::to_string(res.residual) +
                                " after " + std::to_string(it) + " iterations, sup|g| = " +
                                std::to_string(g.sup_norm()) + ")");
        }
        res.h = rhs + bgh;
    }
    throw NoConvergence("resolvent iteration did not reach " + std::to_string(target) + " in " +
                        std::to_string(max_iter) + " iterations (residual " + std::to_string(res.residual) + ")");
}

std::pair<RealField, RealField> spatial_rhs(const BoussinesqState& s, const SpatialOptions& opts)
{
    if (!(s.r > 0.0)) throw std::invalid_argument("spatial_rhs needs r > 0");
    if (s.v.sup_norm() > opts.v_max) {
        throw AmplitudeGuard("sup|v| = " + std::to_string(s.v.sup_norm()) + " exceeds v_max = " +
                             std::to_string(opts.v_max) + " at r = " + std::to_string(s.r));
    }
    const std::size_t n = s.v.size();
    std::vector<double> g(n), src(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double v = s.v[j];
        const double w = s.w[j];
        g[j] = -2.0 * v + n1_of_v(v);
        src[j] = v - v * v + n_of_v(v) + (-2.0 + n2_of_v(v)) * w * w;
    }
    const RealField gf(s.v.grid(), std::move(g));
    const RealField rhs = b2(RealField(s.v.grid(), std::move(src)), opts.flip_b2_sign);
    ResolventResult h = resolvent_solve(gf, rhs, opts.rhs_tol, opts.max_iter, opts.flip_b2_sign);
    RealField f = std::move(h.h);
    f -= (1.0 / s.r) * s.w;
    return {s.w, std::move(f)};
}

BoussinesqState boussinesq_step(const BoussinesqState& s, double dr, const SpatialOptions& opts)
{
    if (!(dr > 0.0)) throw std::invalid_argument("step must be positive");
    const auto [v1, w1] = spatial_rhs(s, opts);
    const auto [v2, w2] = spatial_rhs(combine(s, 0.5 * dr, v1, w1), opts);
    const auto [v3, w3] = spatial_rhs(combine(s, 0.5 * dr, v2, w2), opts);
    const auto [v4, w4] = spatial_rhs(combine(s, dr, v3, w3), opts);
    BoussinesqState next{s.r + dr, s.v, s.w};
    auto& nv = next.v.mutable_values();
    auto& nw = next.w.mutable_values();
    for (std::size_t j = 0; j < nv.size(); ++j) {
        nv[j] += dr / 6.0 * (v1[j] + 2.0 * v2[j] + 2.0 * v3[j] + v4[j]);
        nw[j] += dr / 6.0 * (w1[j] + 2.0 * w2[j] + 2.0 * w3[j] + w4[j]);
    }
    const double before = state_size(s);
    const double after = state_size(next);
    if (!next.v.all_finite() || !next.w.all_finite() || (before > 0.0 && after > 10.0 * before)) {
        throw StepUnstable("Boussinesq step at r = " + std::to_string(s.r) + " grew the state from " +
                           std::to_string(before) + " to " + std::to_string(after));
    }
    return next;
}

std::vector<BoussinesqState> boussinesq_evolve(const BoussinesqState& init, double r1, double dr,
                                               const std::vector<double>& outputs, const SpatialOptions& opts,
                                               const BoussinesqObserver& observer)
{
    if (!(init.r > 0.0) || !(r1 > init.r)) throw std::invalid_argument("need 0 < r0 < r1");
    if (!(dr > 0.0)) throw std::invalid_argument("dr must be positive");
    std::vector<double> stops;
    for (double r : outputs) {
        if (r > init.r && r < r1) stops.push_back(r);
    }
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    stops.push_back(r1);

    std::vector<BoussinesqState> out{init};
    if (observer) observer(init);
    BoussinesqState cur = init;
    for (double stop : stops) {
        const double start = cur.r;
        const auto steps = std::max(1L, static_cast<long>(std::ceil((stop - start) / dr - 1e-9)));
        const double h = (stop - start) / static_cast<double>(steps);
        for (long i = 0; i < steps; ++i) {
            cur = boussinesq_step(cur, h, opts);
            cur.r = i + 1 == steps ? stop : start + h * static_cast<double>(i + 1);
            if (observer) observer(cur);
        }
        out.push_back(cur);
    }
    return out;
}

AnsatzConfig make_ansatz_config(double eps, std::vector<CkdvState> trajectory)
{
    if (!(eps > 0.0) || eps > 0.3) throw std::invalid_argument("eps must lie in (0, 0.3]");
    if (trajectory.empty()) throw std::invalid_argument("empty cKdV trajectory");
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        if (!(trajectory[i].rho > trajectory[i - 1].rho)) throw std::invalid_argument("trajectory radii must increase");
    }
    AnsatzConfig cfg;
    cfg.eps = eps;
    cfg.r0 = trajectory.front().rho / (eps * eps * eps);
    cfg.source = std::make_shared<const std::vector<CkdvState>>(std::move(trajectory));
    return cfg;
}

SpectralGrid ansatz_grid(const AnsatzConfig& cfg)
{
    const SpectralGrid& tau = cfg.source->front().A.grid();
    return make_grid(tau.size(), tau.length() / cfg.eps, tau.center() / cfg.eps);
}

AnsatzFields ansatz_fields(const AnsatzConfig& cfg, double r)
{
    const auto& src = *cfg.source;
    const double eps = cfg.eps;
    const double rho = eps * eps * eps * r;
    const double lo = src.front().rho;
    const double hi = src.back().rho;
    const double slack = 1e-12 * hi;
    if (rho < lo - slack || rho > hi + slack) {
        throw OutOfRange("rho = " + std::to_string(rho) + " outside the cKdV trajectory [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    // A(rho, .) on the tau-grid
    auto it = std::lower_bound(src.begin(), src.end(), rho, [](const CkdvState& s, double x) { return s.rho < x; });
    RealField a_tau(src.front().A.grid());
    if (it != src.end() && std::abs(it->rho - rho) <= slack) {
        a_tau = it->A;
    } else if (it != src.begin() && std::abs(std::prev(it)->rho - rho) <= slack) {
        a_tau = std::prev(it)->A;
    } else {
        const CkdvState& b = *it;
        const CkdvState& a = *std::prev(it);
        const double h = b.rho - a.rho;
        const double s = (rho - a.rho) / h;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = -s * s * (1.0 - s);
        a_tau = h00 * a.A + (h10 * h) * ckdv_rho_derivative(a.A, a.rho) + h01 * b.A +
                (h11 * h) * ckdv_rho_derivative(b.A, b.rho);
    }
    const RealField a_rho_tau = ckdv_rho_derivative(a_tau, rho);

    // same samples on the t-grid (eps t_j = tau_j), then t -> t - r
    const SpectralGrid tg = ansatz_grid(cfg);
    RealField a_t(tg, std::vector<double>(a_tau.values().begin(), a_tau.values().end()));
    RealField ar_t(tg, std::vector<double>(a_rho_tau.values().begin(), a_rho_tau.values().end()));
    a_t = spectral_shift(a_t, -r);
    ar_t = spectral_shift(ar_t, -r);
    // d/dt of A(eps (t - r)) is eps A_tau
    const RealField dt_a = spectral_derivative(a_t, 1);

    AnsatzFields f{a_t, (eps * eps) * a_t, RealField(tg)};
    f.psi_r = (-eps * eps) * dt_a + (eps * eps * eps * eps * eps) * ar_t;
    return f;
}

BoussinesqState make_ansatz_state(const AnsatzConfig& cfg, double at_r)
{
    AnsatzFields f = ansatz_fields(cfg, at_r);
    return {at_r, std::move(f.psi), std::move(f.psi_r)};
}

ErrorMonitor::ErrorMonitor(AnsatzConfig cfg) : cfg_(std::move(cfg)) { err_.eps = cfg_.eps; }

void ErrorMonitor::operator()(const BoussinesqState& s)
{
    const AnsatzFields f = ansatz_fields(cfg_, s.r);
    for (std::size_t j = 0; j < s.v.size(); ++j) {
        const double eu = std::abs(v_to_u(s.v[j]) - f.psi[j]);
        const double ev = std::abs(s.v[j] - f.psi[j]);
        if (eu > err_.sup_u_error) {
            err_.sup_u_error = eu;
            err_.r_at_sup = s.r;
        }
        err_.sup_v_error = std::max(err_.sup_v_error, ev);
    }
}

ApproximationError approximation_error(const std::vector<BoussinesqState>& traj, const AnsatzConfig& cfg)
{
    ErrorMonitor mon(cfg);
    for (const auto& s : traj) mon(s);
    return mon.result();
}

std::pair<double, double> bessel_mode(double k, double c1, double c2, double r)
{
    const double kappa = std::abs(k) / std::sqrt(1.0 + k * k);
    if (kappa == 0.0) return {c1 + c2 * std::log(r), c2 / r};  // k = 0: v'' + v'/r = 0
    const double x = kappa * r;
    const double v = c1 * std::cyl_bessel_j(0.0, x) + c2 * std::cyl_neumann(0.0, x);
    const double dv = -kappa * (c1 * std::cyl_bessel_j(1.0, x) + c2 * std::cyl_neumann(1.0, x));
    return {v, dv};
}

} // namespace ckdv
