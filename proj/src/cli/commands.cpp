#include "ckdv/cli.hpp"

#include "ckdv/errors.hpp"
#include "ckdv/experiments.hpp"
#include "ckdv/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ckdv {

namespace {

namespace fs = std::filesystem;

std::string label(const std::string& name, double x) { return name + "=" + format_real(x); }

std::string fname(const std::string& stem, double x)
{
    std::string s = format_real(x);
    std::replace(s.begin(), s.end(), '.', 'p');
    return stem + s;
}

std::string pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

class Artifacts {
public:
    explicit Artifacts(const ExperimentConfig& cfg) : dir_(cfg.out), manifest_(manifest_lines(cfg)) {}

    void csv(const std::string& name, const CsvTable& t)
    {
        write_csv(dir_ / name, t, manifest_);
        files_.push_back(dir_ / name);
    }
    void svg(const std::string& name, const SvgPlot& p)
    {
        write_svg(dir_ / name, p, manifest_);
        files_.push_back(dir_ / name);
    }
    CommandResult finish(const ExperimentConfig& cfg, CommandResult r)
    {
        // the manifest file lists the full config and every artifact
        std::string text;
        for (const auto& l : manifest_) text += "# " + l + "\n";
        text += "\n" + to_ini(cfg) + "\n[files]\n";
        for (const auto& f : files_) text += f.filename().string() + "\n";
        fs::create_directories(dir_);
        std::ofstream(dir_ / "manifest.txt", std::ios::binary) << text;
        files_.push_back(dir_ / "manifest.txt");
        r.files = files_;
        return r;
    }

private:
    fs::path dir_;
    std::vector<std::string> manifest_;
    std::vector<fs::path> files_;
};

SolitonSpec spec_of(const ExperimentConfig& cfg)
{
    SolitonSpec s;
    s.alpha = cfg.alpha;
    s.beta = cfg.beta;
    s.offset = cfg.offset;
    s.validate();
    return s;
}

} // namespace

CommandResult cmd_soliton(const ExperimentConfig& cfg)
{
    validate(cfg);
    Artifacts out(cfg);
    CommandResult res;
    FigureSetup fs;
    fs.spec = spec_of(cfg);
    fs.rhos = cfg.rhos;
    fs.times = cfg.times;
    fs.eps = cfg.eps.front();
    const FigureData data = figure_profiles(fs);

    CsvTable a{{"rho", "tau", "A"}, {}};
    for (std::size_t i = 0; i < fs.rhos.size(); ++i) {
        const Profile& p = data.a_profiles[i];
        for (std::size_t j = 0; j < p.x.size(); ++j) a.add({format_real(fs.rhos[i]), format_real(p.x[j]), format_real(p.y[j])});
        out.svg(fname("soliton_A_rho", fs.rhos[i]) + ".svg",
                {"cKdV solitary wave, " + label("rho", fs.rhos[i]), "tau", "A", false, false, {{"", p.x, p.y}}});
    }
    out.csv("soliton_profiles.csv", a);

    CsvTable u{{"t", "r", "u"}, {}};
    for (std::size_t i = 0; i < fs.times.size(); ++i) {
        const Profile& p = data.u_profiles[i];
        for (std::size_t j = 0; j < p.x.size(); ++j) u.add({format_real(fs.times[i]), format_real(p.x[j]), format_real(p.y[j])});
        out.svg(fname("soliton_u_t", fs.times[i]) + ".svg",
                {"radial wave, " + label("eps", fs.eps) + ", " + label("t", fs.times[i]), "r", "u", false, false,
                 {{"", p.x, p.y}}});
    }
    out.csv("soliton_waves.csv", u);

    // decay and mass diagnostics of the closed form
    CsvTable d{{"rho", "zero_mean_defect_T2000", "envelope_ratio_min", "envelope_ratio_max", "window_l2_slope",
                "window_l2_slope_times_rho_over_3"},
               {}};
    for (double rho : (fs.spec.alpha == 0.0) ? std::vector<double>{} : fs.rhos) {
        const auto zm = zero_mean_defect(rho, fs.spec, 2000.0);
        double lo = 0.0, hi = 0.0;
        const auto peaks = soliton_envelope_peaks(rho, fs.spec, -1600.0, -400.0, 0.004);
        if (!peaks.empty()) {
            lo = hi = peaks.front().second / std::sqrt(6.0 / (rho * std::abs(peaks.front().first)));
            for (const auto& [tau, mag] : peaks) {
                const double q = mag / std::sqrt(6.0 / (rho * std::abs(tau)));
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        const auto wg = window_l2_growth(rho, fs.spec, {200.0, 400.0, 800.0, 1600.0});
        d.add({format_real(rho), format_real(zm.defect), format_real(lo), format_real(hi), format_real(wg.slope),
               format_real(wg.slope * rho / 3.0)});
        res.summary.push_back(label("rho", rho) + ": zero-mean defect " + format_real(zm.defect) +
                              ", envelope ratio [" + format_real(lo) + ", " + format_real(hi) +
                              "], window slope * rho / 3 = " + format_real(wg.slope * rho / 3.0));
    }
    if (fs.spec.alpha == 0.0) {
        res.summary.push_back("alpha = 0: A vanishes identically, diagnostics skipped");
    } else {
        out.csv("soliton_diagnostics.csv", d);
    }
    if (fs.spec.alpha != 0.0) res.summary.push_back("figure morphology: " + pass_word(figure_morphology_ok(data)));
    return out.finish(cfg, res);
}

CommandResult cmd_residual_sweep(const ExperimentConfig& cfg)
{
    validate(cfg);
    Artifacts out(cfg);
    CommandResult res;
    ResidualSweepSetup s;
    s.eps = cfg.eps;
    s.n = cfg.n;
    s.length = cfg.length;
    s.amplitude = cfg.amplitude;
    s.width = cfg.width;
    s.rho0 = cfg.rho0;
    s.rho1 = cfg.rho1;
    s.d_rho = cfg.d_rho;
    const ResidualSweepResult sw = residual_sweep(s);

    auto slope_text = [](double x) { return std::isnan(x) ? std::string() : format_real(x); };
    CsvTable t{{"eps", "norm_kind", "value", "fitted_slope"}, {}};
    std::vector<double> e, l2, anti;
    for (const auto& r : sw.rows) {
        t.add({format_real(r.eps), "res_l2_t", format_real(r.res_l2), slope_text(sw.slope_l2)});
        t.add({format_real(r.eps), "res_sup", format_real(r.res_sup), slope_text(sw.slope_sup)});
        t.add({format_real(r.eps), "antires_l2_t", format_real(r.antires_l2), slope_text(sw.slope_anti)});
        t.add({format_real(r.eps), "res_l2_tau", format_real(r.res_l2_tau), slope_text(sw.slope_l2 - 0.5)});
        t.add({format_real(r.eps), "antires_l2_tau", format_real(r.antires_l2_tau), slope_text(sw.slope_anti - 0.5)});
        e.push_back(r.eps);
        l2.push_back(r.res_l2);
        anti.push_back(r.antires_l2);
    }
    out.csv("residual_scaling.csv", t);

    if (std::isnan(sw.slope_l2)) {
        res.summary.push_back("fewer than three eps values: no slope fit");
        return out.finish(cfg, res);
    }
    const bool ok_res = std::abs(sw.slope_l2 - 7.5) <= cfg.slope_tol;
    const bool ok_anti = std::abs(sw.slope_anti - 6.5) <= cfg.slope_tol;
    CsvTable sum{{"norm_kind", "fitted_slope", "target", "tolerance", "status"}, {}};
    sum.add({"res_l2_t", format_real(sw.slope_l2), "7.5", format_real(cfg.slope_tol), pass_word(ok_res)});
    sum.add({"antires_l2_t", format_real(sw.slope_anti), "6.5", format_real(cfg.slope_tol), pass_word(ok_anti)});
    sum.add({"res_sup", format_real(sw.slope_sup), "8", "", "info"});
    out.csv("residual_summary.csv", sum);
    out.svg("residual_scaling.svg", {"residual norms against eps", "eps", "L2(dt) norm", true, true,
                                     {{"||Res||", e, l2}, {"||dt^-1 Res||", e, anti}}});
    res.summary.push_back("slope ||Res||_L2 = " + format_real(sw.slope_l2) + " (target 7.5): " + pass_word(ok_res));
    res.summary.push_back("slope ||dt^-1 Res||_L2 = " + format_real(sw.slope_anti) + " (target 6.5): " +
                          pass_word(ok_anti));
    res.status = ok_res && ok_anti ? 0 : 1;
    return out.finish(cfg, res);
}

namespace {

Theorem1Setup theorem1_setup(const ExperimentConfig& cfg)
{
    Theorem1Setup s;
    s.eps = cfg.eps;
    s.n = cfg.n;
    s.length = cfg.length;
    s.amplitude = cfg.amplitude;
    s.width = cfg.width;
    s.rho0 = cfg.rho0;
    s.rho1 = cfg.rho1;
    s.d_rho = cfg.d_rho;
    s.dr = cfg.dr;
    s.energy_bound = cfg.energy_bound;
    s.spatial.rhs_tol = cfg.rhs_tol;
    s.spatial.flip_b2_sign = cfg.flip_b2_sign;
    return s;
}

} // namespace

CommandResult cmd_theorem1(const ExperimentConfig& cfg)
{
    validate(cfg);
    Artifacts out(cfg);
    CommandResult res;
    const Theorem1Result tr = theorem1_sweep(theorem1_setup(cfg));

    CsvTable t{{"eps", "sup_u_error", "sup_v_error", "r_at_sup", "max_energy", "min_E_over_E0", "max_E_over_E0",
                "growth_rate", "E_equivalent", "E1_equivalent"},
               {}};
    CsvTable trace{{"eps", "r", "E0", "E1", "E"}, {}};
    SvgPlot ep{"energy of R = eps^-3.5 (v - eps^2 A)", "rho = eps^3 r", "E", false, false, {}};
    std::vector<double> e, u;
    double emax_lo = 0.0, emax_hi = 0.0;
    bool equivalent = true, bounded = true;
    for (const auto& row : tr.rows) {
        const auto& g = row.energy;
        t.add({format_real(row.error.eps), format_real(row.error.sup_u_error), format_real(row.error.sup_v_error),
               format_real(row.error.r_at_sup), format_real(g.max_e), format_real(g.min_ratio),
               format_real(g.max_ratio), format_real(g.growth_rate), g.equivalent ? "true" : "false",
               g.equivalent_e1 ? "true" : "false"});
        SvgSeries s{label("eps", row.error.eps), {}, {}};
        const double e3 = std::pow(row.error.eps, 3);
        for (const auto& smp : g.trace) {
            trace.add({format_real(row.error.eps), format_real(smp.r), format_real(smp.energy.e0),
                       format_real(smp.energy.e1), format_real(smp.energy.e)});
            s.x.push_back(e3 * smp.r);
            s.y.push_back(smp.energy.e);
        }
        ep.series.push_back(std::move(s));
        e.push_back(row.error.eps);
        u.push_back(row.error.sup_u_error);
        equivalent = equivalent && g.equivalent;
        bounded = bounded && g.bounded;
        if (row.error.eps == *std::max_element(cfg.eps.begin(), cfg.eps.end())) emax_hi = g.max_e;
        if (row.error.eps == *std::min_element(cfg.eps.begin(), cfg.eps.end())) emax_lo = g.max_e;
    }
    out.csv("theorem1_errors.csv", t);
    out.csv("theorem1_energy.csv", trace);
    out.svg("theorem1_energy.svg", ep);

    const bool energy_ok = equivalent && bounded;
    res.summary.push_back("energy: E0/2 <= E <= 3E0/2 " + pass_word(equivalent) + ", max E <= " +
                          format_real(cfg.energy_bound) + " " + pass_word(bounded));
    if (std::isnan(tr.slope_u)) {
        res.summary.push_back("no slope fit (needs three eps values with nonzero error)");
        res.status = energy_ok ? 0 : 1;
        return out.finish(cfg, res);
    }
    const bool ok = tr.slope_u >= 3.2;
    out.svg("theorem1_errors.svg", {"sup |u - eps^2 A| against eps", "eps", "sup error", true, true, {{"", e, u}}});
    CsvTable sum{{"quantity", "value", "target", "status"}, {}};
    sum.add({"slope_sup_u_error", format_real(tr.slope_u), ">= 3.2", pass_word(ok)});
    sum.add({"max_E_ratio_smallest_to_largest_eps", format_real(emax_hi > 0.0 ? emax_lo / emax_hi : 0.0), "<= 2",
             pass_word(emax_hi > 0.0 && emax_lo <= 2.0 * emax_hi)});
    out.csv("theorem1_summary.csv", sum);
    res.summary.push_back("slope of sup |u - eps^2 A| = " + format_real(tr.slope_u) + " (>= 3.2): " + pass_word(ok));
    res.status = ok && energy_ok ? 0 : 1;
    return out.finish(cfg, res);
}

CommandResult cmd_ckdv(const ExperimentConfig& cfg)
{
    validate(cfg);
    Artifacts out(cfg);
    CommandResult res;
    CkdvRunConfig rc;
    rc.grid = make_grid(cfg.n, cfg.length);
    rc.rho0 = cfg.rho0;
    rc.rho1 = cfg.rho1;
    rc.d_rho = cfg.d_rho;
    rc.dealias = cfg.dealias;
    for (double r : cfg.rhos) {
        if (r > cfg.rho0 && r < cfg.rho1) rc.outputs.push_back(r);
    }
    std::sort(rc.outputs.begin(), rc.outputs.end());
    rc.outputs.erase(std::unique(rc.outputs.begin(), rc.outputs.end()), rc.outputs.end());
    const RealField a0 = derivative_of_gaussian(rc.grid, cfg.amplitude, cfg.width);
    require_localized(a0, "initial cKdV data");
    const auto traj = ckdv_evolve(a0, rc);

    CsvTable prof{{"rho", "tau", "A"}, {}};
    CsvTable diag{{"rho", "mean", "l2", "l2_times_sqrt_rho", "sup"}, {}};
    SvgPlot plot{"cKdV evolution", "tau", "A", false, false, {}};
    auto x = rc.grid.nodes();
    for (const auto& s : traj) {
        SvgSeries ser{label("rho", s.rho), {x.begin(), x.end()}, {s.A.values().begin(), s.A.values().end()}};
        for (std::size_t j = 0; j < x.size(); ++j) prof.add({format_real(s.rho), format_real(x[j]), format_real(s.A[j])});
        diag.add({format_real(s.rho), format_real(s.A.mean()), format_real(s.A.l2_norm()),
                  format_real(s.A.l2_norm() * std::sqrt(s.rho)), format_real(s.A.sup_norm())});
        plot.series.push_back(std::move(ser));
    }
    out.csv("ckdv_profiles.csv", prof);
    out.csv("ckdv_diagnostics.csv", diag);
    out.svg("ckdv_profiles.svg", plot);
    res.summary.push_back("evolved " + std::to_string(traj.size()) + " snapshots; final mean " +
                          format_real(traj.back().A.mean()));
    return out.finish(cfg, res);
}

CommandResult cmd_boussinesq(const ExperimentConfig& cfg)
{
    validate(cfg);
    Artifacts out(cfg);
    CommandResult res;
    const double eps = cfg.eps.front();
    const Theorem1Setup setup = theorem1_setup(cfg);

    CkdvRunConfig rc;
    rc.grid = make_grid(cfg.n, cfg.length);
    rc.rho0 = cfg.rho0;
    rc.rho1 = cfg.rho1;
    rc.d_rho = cfg.d_rho;
    const int steps = static_cast<int>(std::ceil((cfg.rho1 - cfg.rho0) / cfg.d_rho - 1e-9));
    for (int i = 1; i < steps; ++i) rc.outputs.push_back(cfg.rho0 + (cfg.rho1 - cfg.rho0) * i / steps);
    const RealField a0 = derivative_of_gaussian(rc.grid, cfg.amplitude, cfg.width);
    require_localized(a0, "initial cKdV data");
    const AnsatzConfig ans = make_ansatz_config(eps, ckdv_evolve(a0, rc));

    ErrorMonitor err(ans);
    EnergyMonitor energy(ans, cfg.energy_bound);
    const double r1 = cfg.rho1 / (eps * eps * eps);
    std::vector<double> outs;
    for (int i = 1; i < 4; ++i) outs.push_back(ans.r0 + (r1 - ans.r0) * i / 4.0);
    const auto traj = boussinesq_evolve(make_ansatz_state(ans, ans.r0), r1, cfg.dr, outs, setup.spatial,
                                        [&](const BoussinesqState& s) {
                                            err(s);
                                            energy(s);
                                        });

    CsvTable prof{{"r", "t", "v", "eps2_A"}, {}};
    SvgPlot plot{"Boussinesq solution against the ansatz at r = " + format_real(traj.back().r), "t", "v", false,
                 false, {}};
    for (const auto& s : traj) {
        const AnsatzFields f = ansatz_fields(ans, s.r);
        auto x = s.v.grid().nodes();
        for (std::size_t j = 0; j < x.size(); ++j) {
            prof.add({format_real(s.r), format_real(x[j]), format_real(s.v[j]), format_real(f.psi[j])});
        }
        if (&s == &traj.back()) {
            plot.series.push_back({"v", {x.begin(), x.end()}, {s.v.values().begin(), s.v.values().end()}});
            plot.series.push_back({"eps^2 A", {x.begin(), x.end()}, {f.psi.values().begin(), f.psi.values().end()}});
        }
    }
    const GronwallReport g = energy.report();
    CsvTable trace{{"r", "E0", "E1", "E"}, {}};
    for (const auto& smp : g.trace) {
        trace.add({format_real(smp.r), format_real(smp.energy.e0), format_real(smp.energy.e1), format_real(smp.energy.e)});
    }
    out.csv("boussinesq_profiles.csv", prof);
    out.csv("boussinesq_energy.csv", trace);
    out.svg("boussinesq_final.svg", plot);
    res.summary.push_back(label("eps", eps) + ": sup |u - eps^2 A| = " + format_real(err.result().sup_u_error) +
                          ", max E = " + format_real(g.max_e));
    return out.finish(cfg, res);
}

CommandResult cmd_selftest(const ExperimentConfig& cfg)
{
    validate(cfg);
    Artifacts out(cfg);
    CommandResult res;
    CsvTable t{{"check", "status", "value", "tolerance"}, {}};
    bool all = true;
    for (const auto& c : run_self_checks(cfg.flip_b2_sign)) {
        t.add({c.name, pass_word(c.passed), format_real(c.value), format_real(c.tolerance)});
        res.summary.push_back(pass_word(c.passed) + "  " + c.name + "  (" + format_real(c.value) + " vs " +
                              format_real(c.tolerance) + ")");
        all = all && c.passed;
    }
    out.csv("selftest.csv", t);
    res.status = all ? 0 : 1;
    return out.finish(cfg, res);
}

CommandResult run_command(const ExperimentConfig& cfg)
{
    if (cfg.command == "soliton") return cmd_soliton(cfg);
    if (cfg.command == "residual-sweep") return cmd_residual_sweep(cfg);
    if (cfg.command == "theorem1") return cmd_theorem1(cfg);
    if (cfg.command == "ckdv") return cmd_ckdv(cfg);
    if (cfg.command == "boussinesq") return cmd_boussinesq(cfg);
    if (cfg.command == "selftest") return cmd_selftest(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

} // namespace ckdv
