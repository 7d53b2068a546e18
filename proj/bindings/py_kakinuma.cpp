//==============================================================================
// py_kakinuma.cpp
// Thin Python bindings for the main operations: linear theory scans, spectral
// derivatives, initial-data preparation, and the simulation driver.  Heavy
// lifting stays in the C++ core; configurations cross the boundary as JSON
// text, fields as NumPy arrays.
//==============================================================================
#include "kakinuma/diagnostics.hpp"
#include "kakinuma/evolution.hpp"
#include "kakinuma/lintheory.hpp"
#include "kakinuma/stability.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kakinuma;

namespace {

ModelParams make_params(double rho1, double rho2, double h1, double h2,
                        double grav, int N, std::vector<int> p_list) {
    ModelParams m;
    m.rho1 = rho1;
    m.rho2 = rho2;
    m.h1 = h1;
    m.h2 = h2;
    m.grav = grav;
    m.N = N;
    m.p_list = std::move(p_list);
    m.validate();
    return m;
}

Field to_field(const Grid1D& g, const py::array_t<double>& a) {
    auto buf = a.request();
    if (buf.ndim != 1 || buf.shape[0] != g.points)
        throw ConfigError("array length does not match the configured grid");
    Field f(g);
    const double* p = static_cast<const double*>(buf.ptr);
    std::copy(p, p + g.points, f.v.begin());
    return f;
}

py::array_t<double> from_field(const Field& f) {
    py::array_t<double> a(f.size());
    std::copy(f.v.begin(), f.v.end(),
              static_cast<double*>(a.request().ptr));
    return a;
}

py::dict series_to_dict(const std::vector<SeriesRow>& series) {
    const py::ssize_t n = static_cast<py::ssize_t>(series.size());
    auto col = [&](auto get) {
        py::array_t<double> a(n);
        double* p = static_cast<double*>(a.request().ptr);
        for (py::ssize_t i = 0; i < n; ++i) p[i] = get(series[i]);
        return a;
    };
    py::dict d;
    d["t"] = col([](const SeriesRow& r) { return r.t; });
    d["mass"] = col([](const SeriesRow& r) { return r.mass; });
    d["energy"] = col([](const SeriesRow& r) { return r.energy; });
    d["momentum"] = col([](const SeriesRow& r) { return r.momentum; });
    d["hamiltonian"] = col([](const SeriesRow& r) { return r.hamiltonian; });
    d["stability_margin"] =
        col([](const SeriesRow& r) { return r.stability_margin; });
    d["compat_residual"] =
        col([](const SeriesRow& r) { return r.compat_residual; });
    return d;
}

} // namespace

PYBIND11_MODULE(_kakinuma, mod) {
    mod.doc() = "Two-layer interfacial wave model: linear theory, constraint "
                "solver, and time evolution on a periodic domain";

    mod.def(
        "alpha_constant",
        [](double rho1, double rho2, double h1, double h2, double grav, int N,
           std::vector<int> p_list, const std::string& layer) {
            ModelParams m = make_params(rho1, rho2, h1, h2, grav, N,
                                        std::move(p_list));
            const Layer L = layer == "upper" ? Layer::Upper : Layer::Lower;
            return alpha_value(m, L);
        },
        py::arg("rho1"), py::arg("rho2"), py::arg("h1"), py::arg("h2"),
        py::arg("grav"), py::arg("N"), py::arg("p_list"), py::arg("layer"),
        "Depth-profile constant of one layer (exact rational internally)");

    mod.def(
        "phase_speed_model",
        [](double xi, double rho1, double rho2, double h1, double h2,
           double grav, int N, std::vector<int> p_list) {
            return phase_speed_kakinuma(
                xi, make_params(rho1, rho2, h1, h2, grav, N, std::move(p_list)));
        },
        py::arg("xi"), py::arg("rho1"), py::arg("rho2"), py::arg("h1"),
        py::arg("h2"), py::arg("grav"), py::arg("N"), py::arg("p_list"),
        "Squared phase speed of the discretized model at wavenumber xi");

    mod.def(
        "phase_speed_full",
        [](double xi, double rho1, double rho2, double h1, double h2,
           double grav) {
            return phase_speed_full(
                xi, make_params(rho1, rho2, h1, h2, grav, 0, {0}));
        },
        py::arg("xi"), py::arg("rho1"), py::arg("rho2"), py::arg("h1"),
        py::arg("h2"), py::arg("grav"),
        "Squared phase speed of the full linear theory at wavenumber xi");

    mod.def(
        "spectral_derivative",
        [](py::array_t<double> f, double L, int order) {
            auto buf = f.request();
            if (buf.ndim != 1) throw ConfigError("expected a 1-D array");
            Grid1D g(L, static_cast<int>(buf.shape[0]));
            return from_field(spectral_derivative(to_field(g, f), order));
        },
        py::arg("f"), py::arg("L"), py::arg("order") = 1,
        "Fourier derivative of a periodic sample vector");

    mod.def(
        "hamiltonian",
        [](const std::string& config_json, py::array_t<double> zeta,
           py::array_t<double> phi) {
            Config cfg = parse_config(config_json);
            Grid1D g(cfg.num.L, cfg.num.M);
            CanonicalState canon{to_field(g, zeta), to_field(g, phi)};
            Field b = make_bottom(cfg.num.bottom, g);
            return hamiltonian_value(cfg.model, cfg.num, canon, b);
        },
        py::arg("config_json"), py::arg("zeta"), py::arg("phi"),
        "Energy of canonical interface data (constraint solve included)");

    mod.def(
        "prepare",
        [](const std::string& config_json, py::array_t<double> zeta,
           py::array_t<double> phi) {
            Config cfg = parse_config(config_json);
            Grid1D g(cfg.num.L, cfg.num.M);
            CanonicalState canon{to_field(g, zeta), to_field(g, phi)};
            State s = prepare_initial_data(cfg.model, cfg.num, canon,
                                           make_bottom(cfg.num.bottom, g));
            py::dict d;
            py::list p1, p2;
            for (const auto& f : s.phi1) p1.append(from_field(f));
            for (const auto& f : s.phi2) p2.append(from_field(f));
            d["zeta"] = from_field(s.zeta);
            d["phi1"] = p1;
            d["phi2"] = p2;
            return d;
        },
        py::arg("config_json"), py::arg("zeta"), py::arg("phi"),
        "Solve the constraint system for the full coefficient state");

    mod.def(
        "simulate",
        [](const std::string& config_json, py::array_t<double> zeta,
           py::array_t<double> phi) {
            Config cfg = parse_config(config_json);
            Grid1D g(cfg.num.L, cfg.num.M);
            CanonicalState canon{to_field(g, zeta), to_field(g, phi)};
            SimResult res = simulate(cfg, canon);
            py::dict d;
            d["series"] = series_to_dict(res.series);
            d["zeta_final"] = from_field(res.final_state.zeta);
            d["t_final"] = res.t_final;
            d["aborted"] = res.aborted;
            d["abort_reason"] = res.abort_reason;
            return d;
        },
        py::arg("config_json"), py::arg("zeta"), py::arg("phi"),
        "Run the time evolution and return the diagnostics series");
}
