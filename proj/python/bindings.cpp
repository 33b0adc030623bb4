#include "ckdv/airy.hpp"
#include "ckdv/boussinesq.hpp"
#include "ckdv/ckdv.hpp"
#include "ckdv/cli.hpp"
#include "ckdv/errors.hpp"
#include "ckdv/experiments.hpp"
#include "ckdv/residual.hpp"
#include "ckdv/soliton.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>

namespace py = pybind11;
using namespace ckdv;

namespace {

py::array_t<double> to_array(std::span<const double> v)
{
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

RealField to_field(const SpectralGrid& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& a)
{
    if (a.ndim() != 1 || static_cast<std::size_t>(a.size()) != g.size()) {
        throw std::invalid_argument("array length must equal the grid size");
    }
    return RealField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

SolitonSpec spec_of(double alpha, double beta, double offset)
{
    SolitonSpec s;
    s.alpha = alpha;
    s.beta = beta;
    s.offset = offset;
    s.validate();
    return s;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "cKdV and radial Boussinesq numerics";
    m.attr("__version__") = library_version;

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<MeanValueError>(m, "MeanValueError", PyExc_ValueError);

    m.def("airy", [](double z) {
        const AiryValues a = airy_eval(z);
        return py::make_tuple(a.ai, a.ai_prime, a.bi, a.bi_prime);
    }, py::arg("z"), "(Ai, Ai', Bi, Bi') at z");

    m.def("grid_nodes", [](std::size_t n, double length, double center) {
        return to_array(make_grid(n, length, center).nodes());
    }, py::arg("n"), py::arg("length"), py::arg("center") = 0.0);

    m.def("soliton_amplitude", [](double rho, double tau, double alpha, double beta, double offset) {
        return soliton_amplitude(rho, tau, spec_of(alpha, beta, offset));
    }, py::arg("rho"), py::arg("tau"), py::arg("alpha") = 1e8, py::arg("beta") = 0.0, py::arg("offset") = 1.0);

    m.def("soliton_field", [](double rho, std::size_t n, double length, double center, double alpha, double beta,
                              double offset) {
        const RealField f = soliton_field(rho, make_grid(n, length, center), spec_of(alpha, beta, offset));
        return to_array(f.values());
    }, py::arg("rho"), py::arg("n"), py::arg("length"), py::arg("center") = 0.0, py::arg("alpha") = 1e8,
       py::arg("beta") = 0.0, py::arg("offset") = 1.0);

    m.def("physical_wave", [](double r, double t, double eps, double alpha, double beta, double offset) {
        return physical_wave(r, t, eps, spec_of(alpha, beta, offset));
    }, py::arg("r"), py::arg("t"), py::arg("eps"), py::arg("alpha") = 1e8, py::arg("beta") = 0.0,
       py::arg("offset") = 1.0);

    m.def("ckdv_evolve", [](py::array_t<double, py::array::c_style | py::array::forcecast> a0, double length,
                            double rho0, double rho1, double d_rho, std::vector<double> outputs, bool dealias) {
        CkdvRunConfig cfg;
        cfg.grid = make_grid(static_cast<std::size_t>(a0.size()), length);
        cfg.rho0 = rho0;
        cfg.rho1 = rho1;
        cfg.d_rho = d_rho;
        cfg.dealias = dealias;
        cfg.outputs = std::move(outputs);
        const RealField init = to_field(cfg.grid, a0);
        std::vector<CkdvState> traj;
        {
            py::gil_scoped_release nogil;
            traj = ckdv_evolve(init, cfg);
        }
        py::list out;
        for (const auto& s : traj) out.append(py::make_tuple(s.rho, to_array(s.A.values())));
        return out;
    }, py::arg("a0"), py::arg("length"), py::arg("rho0") = 1.0, py::arg("rho1") = 2.0, py::arg("d_rho") = 1e-3,
       py::arg("outputs") = std::vector<double>{}, py::arg("dealias") = true,
       "list of (rho, A) at rho0, each output radius and rho1");

    m.def("u_to_v", py::overload_cast<double>(&u_to_v), py::arg("u"));
    m.def("v_to_u", py::overload_cast<double>(&v_to_u), py::arg("v"));

    m.def("residual_sweep", [](std::vector<double> eps, std::size_t n, double length, double width) {
        ResidualSweepSetup s;
        s.eps = std::move(eps);
        s.n = n;
        s.length = length;
        s.width = width;
        ResidualSweepResult r;
        {
            py::gil_scoped_release nogil;
            r = residual_sweep(s);
        }
        py::list rows;
        for (const auto& x : r.rows) {
            py::dict d;
            d["eps"] = x.eps;
            d["res_l2"] = x.res_l2;
            d["res_sup"] = x.res_sup;
            d["antires_l2"] = x.antires_l2;
            rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["slope_l2"] = r.slope_l2;
        out["slope_sup"] = r.slope_sup;
        out["slope_anti"] = r.slope_anti;
        return out;
    }, py::arg("eps"), py::arg("n") = 256, py::arg("length") = 80.0, py::arg("width") = 2.0);

    m.def("theorem1_error", [](double eps, std::size_t n, double length, double rho1, double amplitude) {
        Theorem1Setup s;
        s.n = n;
        s.length = length;
        s.rho1 = rho1;
        s.amplitude = amplitude;
        Theorem1Row row;
        {
            py::gil_scoped_release nogil;
            row = theorem1_run(s, eps);
        }
        py::dict d;
        d["eps"] = row.error.eps;
        d["sup_u_error"] = row.error.sup_u_error;
        d["sup_v_error"] = row.error.sup_v_error;
        d["max_energy"] = row.energy.max_e;
        d["energy_equivalent"] = row.energy.equivalent;
        return d;
    }, py::arg("eps"), py::arg("n") = 256, py::arg("length") = 40.0, py::arg("rho1") = 1.5,
       py::arg("amplitude") = 1.0);

    m.def("self_checks", [](bool flip) {
        py::list out;
        for (const auto& c : run_self_checks(flip)) out.append(py::make_tuple(c.name, c.passed, c.value, c.tolerance));
        return out;
    }, py::arg("flip_b2_sign") = false);

    m.def("default_config", [](const std::string& cmd) { return to_ini(default_config(cmd)); }, py::arg("command"),
          "default configuration of a subcommand as INI text");

    m.def("run", [](const std::string& ini, const std::string& out) {
        ExperimentConfig cfg = from_ini(ini, ExperimentConfig{});
        cfg = from_ini(ini, default_config(cfg.command));
        if (!out.empty()) cfg.out = out;
        validate(cfg);
        CommandResult r;
        {
            py::gil_scoped_release nogil;
            r = run_command(cfg);
        }
        return py::make_tuple(r.status, r.files, r.summary);
    }, py::arg("config"), py::arg("out") = "", "run a subcommand from INI text; returns (status, files, summary)");
}
