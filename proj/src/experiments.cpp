#include "ckdv/experiments.hpp"

#include "ckdv/errors.hpp"
#include "ckdv/soliton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>

namespace ckdv {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("slope fit needs positive data");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RealField window_field(const RealField& f, double ramp)
{
    const auto& g = f.grid();
    const double lo = g.center() - 0.5 * g.length();
    const double hi = lo + g.length();
    const double width = ramp * g.length();
    const double left = lo + 0.5 * width;
    const double right = hi - 0.5 * width;
    const double delta = 0.125 * width;
    RealField out = RealField::sample(g, [&](double t) {
        return 0.5 * (std::tanh((t - left) / delta) - std::tanh((t - right) / delta));
    });
    for (std::size_t j = 0; j < out.size(); ++j) out.mutable_values()[j] *= f[j];
    const RealField bump = RealField::sample(g, [&](double t) {
        const double x = (t - left) / delta;
        return std::exp(-x * x);
    });
    out -= (out.mean() / bump.mean()) * bump;
    return out;
}

WindowedSolitonResult windowed_soliton_run(const WindowedSolitonSetup& setup)
{
    const double length = setup.tau_hi - setup.tau_lo;
    const auto grid = make_grid(setup.n, length, 0.5 * (setup.tau_lo + setup.tau_hi));
    const RealField a0 = window_field(soliton_field(setup.rho0, grid, setup.spec));

    CkdvRunConfig cfg;
    cfg.rho0 = setup.rho0;
    cfg.rho1 = setup.rho1;
    cfg.d_rho = setup.d_rho;
    cfg.grid = grid;
    const auto traj = ckdv_evolve(a0, cfg);
    const RealField& a1 = traj.back().A;
    const RealField exact = soliton_field(setup.rho1, grid, setup.spec);

    const double margin = 0.5 * (1.0 - setup.interior) * length;
    WindowedSolitonResult r;
    auto x = grid.nodes();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (x[j] < setup.tau_lo + margin || x[j] > setup.tau_hi - margin) continue;
        r.abs_error = std::max(r.abs_error, std::abs(a1[j] - exact[j]));
        r.exact_sup = std::max(r.exact_sup, std::abs(exact[j]));
    }
    r.rel_error = r.exact_sup > 0.0 ? r.abs_error / r.exact_sup : r.abs_error;
    r.final_mean = a1.mean();
    return r;
}

RealField derivative_of_gaussian(const SpectralGrid& grid, double amplitude, double width)
{
    if (!(width > 0.0)) throw ConfigError("pulse width must be positive");
    return RealField::sample(grid, [=](double t) {
        const double x = t / width;
        return -2.0 * amplitude * x * std::exp(-x * x);
    });
}

void require_localized(const RealField& f, const char* what)
{
    const double sup = f.sup_norm();
    if (sup == 0.0) return;
    const std::size_t n = f.size();
    const std::size_t edge = std::max<std::size_t>(1, n / 64);
    double boundary = 0.0;
    for (std::size_t j = 0; j < edge; ++j) boundary = std::max({boundary, std::abs(f[j]), std::abs(f[n - 1 - j])});
    if (boundary > 1e-8 * sup) {
        throw ConfigError(std::string(what) + " is not localized on the grid: |f| = " + std::to_string(boundary) +
                          " near the ends against sup " + std::to_string(sup) + "; enlarge the domain");
    }
}

double optional_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points)
{
    if (x.size() < min_points) return std::numeric_limits<double>::quiet_NaN();
    for (double v : y) {
        if (!(v > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    }
    return loglog_slope(x, y);
}

ResidualSweepResult residual_sweep(const ResidualSweepSetup& setup)
{
    if (setup.eps.empty()) throw ConfigError("empty eps list");
    if (setup.snapshots < 2) throw ConfigError("need at least two snapshots");
    CkdvRunConfig cfg;
    cfg.grid = make_grid(setup.n, setup.length);
    cfg.rho0 = setup.rho0;
    cfg.rho1 = setup.rho1;
    cfg.d_rho = setup.d_rho;
    cfg.dealias = false;
    for (int i = 1; i + 1 < setup.snapshots; ++i) {
        cfg.outputs.push_back(setup.rho0 + (setup.rho1 - setup.rho0) * i / (setup.snapshots - 1));
    }
    validate(cfg);
    const RealField a0 = derivative_of_gaussian(cfg.grid, setup.amplitude, setup.width);
    require_localized(a0, "initial cKdV data");
    const auto traj = ckdv_evolve(a0, cfg);

    ResidualSweepResult out;
    std::vector<double> e, l2, sup, anti;
    for (double eps : setup.eps) {
        out.rows.push_back(residual_report(traj, eps));
        e.push_back(eps);
        l2.push_back(out.rows.back().res_l2);
        sup.push_back(out.rows.back().res_sup);
        anti.push_back(out.rows.back().antires_l2);
    }
    out.slope_l2 = optional_slope(e, l2);
    out.slope_sup = optional_slope(e, sup);
    out.slope_anti = optional_slope(e, anti);
    return out;
}

Theorem1Row theorem1_run(const Theorem1Setup& setup, double eps)
{
    const auto start = std::chrono::steady_clock::now();
    CkdvRunConfig cfg;
    cfg.grid = make_grid(setup.n, setup.length);
    cfg.rho0 = setup.rho0;
    cfg.rho1 = setup.rho1;
    cfg.d_rho = setup.d_rho;
    validate(cfg);
    // keep every step so that the ansatz interpolates between close snapshots
    const int steps = static_cast<int>(std::ceil((setup.rho1 - setup.rho0) / setup.d_rho - 1e-9));
    for (int i = 1; i < steps; ++i) cfg.outputs.push_back(setup.rho0 + (setup.rho1 - setup.rho0) * i / steps);
    const RealField a0 = derivative_of_gaussian(cfg.grid, setup.amplitude, setup.width);
    require_localized(a0, "initial cKdV data");

    const AnsatzConfig ans = make_ansatz_config(eps, ckdv_evolve(a0, cfg));
    ErrorMonitor err(ans);
    EnergyMonitor energy(ans, setup.energy_bound);
    const double r1 = setup.rho1 / (eps * eps * eps);
    boussinesq_evolve(make_ansatz_state(ans, ans.r0), r1, setup.dr, {}, setup.spatial,
                      [&](const BoussinesqState& s) {
                          err(s);
                          energy(s);
                      });
    Theorem1Row row{err.result(), energy.report(), 0.0};
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

Theorem1Result theorem1_sweep(const Theorem1Setup& setup, bool parallel)
{
    if (setup.eps.empty()) throw ConfigError("empty eps list");
    Theorem1Result out;
    if (parallel) {
        std::vector<std::future<Theorem1Row>> jobs;
        for (double eps : setup.eps) jobs.push_back(std::async(std::launch::async, theorem1_run, std::cref(setup), eps));
        for (auto& j : jobs) out.rows.push_back(j.get());
    } else {
        for (double eps : setup.eps) out.rows.push_back(theorem1_run(setup, eps));
    }
    std::vector<double> e, u, v;
    for (const auto& r : out.rows) {
        e.push_back(r.error.eps);
        u.push_back(r.error.sup_u_error);
        v.push_back(r.error.sup_v_error);
    }
    out.slope_u = optional_slope(e, u);
    out.slope_v = optional_slope(e, v);
    return out;
}

bool PulseMorphology::leading_pulse() const
{
    return y_pulse < 0.0 && front_sign_changes == 0 && tail_sign_changes >= 3 && -y_pulse > tail_max;
}

PulseMorphology pulse_morphology(const Profile& p, bool tail_on_left)
{
    if (p.x.size() != p.y.size() || p.x.size() < 3) throw std::invalid_argument("profile needs matching samples");
    PulseMorphology m;
    const auto it = std::min_element(p.y.begin(), p.y.end());
    const std::size_t ip = static_cast<std::size_t>(it - p.y.begin());
    m.x_pulse = p.x[ip];
    m.y_pulse = *it;
    if (!(m.y_pulse < 0.0)) return m;
    // values below this are treated as zero when counting sign changes
    const double floor = 1e-10 * std::abs(m.y_pulse);
    auto count = [&](std::size_t lo, std::size_t hi) {
        int changes = 0;
        int sign = 0;
        for (std::size_t j = lo; j < hi; ++j) {
            if (std::abs(p.y[j]) <= floor) continue;
            const int sj = p.y[j] > 0.0 ? 1 : -1;
            if (sign != 0 && sj != sign) ++changes;
            sign = sj;
        }
        return changes;
    };
    const std::size_t n = p.y.size();
    if (tail_on_left) {
        m.front_sign_changes = count(ip, n);
        m.tail_sign_changes = count(0, ip + 1);
        std::size_t j = ip;
        while (j > 0 && p.y[j] < 0.0) --j;
        m.gap = m.x_pulse - p.x[j];
        for (std::size_t k = 0; k < j; ++k) m.tail_max = std::max(m.tail_max, std::abs(p.y[k]));
    } else {
        m.front_sign_changes = count(0, ip + 1);
        m.tail_sign_changes = count(ip, n);
        std::size_t j = ip;
        while (j + 1 < n && p.y[j] < 0.0) ++j;
        m.gap = p.x[j] - m.x_pulse;
        for (std::size_t k = j + 1; k < n; ++k) m.tail_max = std::max(m.tail_max, std::abs(p.y[k]));
    }
    return m;
}

FigureData figure_profiles(const FigureSetup& setup)
{
    setup.spec.validate();
    FigureData d;
    for (double rho : setup.rhos) {
        if (!(rho > 0.0)) throw ConfigError("rho must be positive");
        Profile p;
        for (double t = setup.tau_lo; t <= setup.tau_hi + 0.5 * setup.tau_step; t += setup.tau_step) {
            p.x.push_back(t);
            p.y.push_back(soliton_amplitude(rho, t, setup.spec));
        }
        d.a_profiles.push_back(std::move(p));
    }
    for (double t : setup.times) {
        if (!(t > 0.0)) throw ConfigError("t must be positive");
        Profile p;
        for (double r = setup.r_lo; r <= 3.0 * t; r += setup.r_step) {
            p.x.push_back(r);
            p.y.push_back(physical_wave(r, t, setup.eps, setup.spec));
        }
        d.u_profiles.push_back(std::move(p));
    }
    return d;
}

bool figure_morphology_ok(const FigureData& data)
{
    auto ordered = [](const std::vector<Profile>& ps, bool tail_on_left) {
        double amp = std::numeric_limits<double>::infinity();
        double gap = 0.0;
        for (const auto& p : ps) {
            const PulseMorphology m = pulse_morphology(p, tail_on_left);
            if (!m.leading_pulse()) return false;
            if (!(-m.y_pulse < amp) || !(m.gap > gap)) return false;
            amp = -m.y_pulse;
            gap = m.gap;
        }
        return true;
    };
    // in tau the tail trails to the left; in r at fixed t it lies at larger r
    return ordered(data.a_profiles, true) && ordered(data.u_profiles, false);
}

} // namespace ckdv
