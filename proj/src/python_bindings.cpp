#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "risofdm/harness.hpp"
#include "risofdm/verify.hpp"

namespace py = pybind11;
using namespace risofdm;

namespace {

Codebook codebook_from_obj(const py::object& b) {
    if (py::isinstance<py::str>(b)) {
        const auto s = b.cast<std::string>();
        if (s == "inf" || s == "continuous") return Codebook::continuous();
        throw ConfigError("B must be an int or 'inf'");
    }
    return Codebook::discrete(b.cast<int>());
}

std::vector<Scheme> schemes_from_names(const std::vector<std::string>& names) {
    std::vector<Scheme> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(parse_scheme(n));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "RIS-assisted two-way OFDM max-min rate simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<Codebook>(m, "Codebook")
        .def_static("discrete", &Codebook::discrete, py::arg("bits"))
        .def_static("continuous", &Codebook::continuous)
        .def_property_readonly("is_discrete", &Codebook::is_discrete)
        .def_readonly("bits", &Codebook::bits)
        .def("__repr__", [](const Codebook& cb) { return "Codebook(B=" + cb.label() + ")"; });

    py::class_<SystemConfig>(m, "SystemConfig")
        .def_static("profile", &SystemConfig::profile, py::arg("name"))
        .def_static("from_json_file", &SystemConfig::from_json_file, py::arg("path"))
        .def("apply_json", &SystemConfig::apply_json, py::arg("json_text"))
        .def("validate", &SystemConfig::validate)
        .def_readwrite("K", &SystemConfig::K)
        .def_readwrite("V", &SystemConfig::V)
        .def_readwrite("R", &SystemConfig::R)
        .def_readwrite("codebook", &SystemConfig::codebook)
        .def_readwrite("tau", &SystemConfig::tau)
        .def_readwrite("T_max", &SystemConfig::T_max)
        .def_readwrite("outer_tol", &SystemConfig::outer_tol)
        .def_readwrite("outer_max_iters", &SystemConfig::outer_max_iters)
        .def_readwrite("lambda_grid_points", &SystemConfig::lambda_grid_points)
        .def_readwrite("seed", &SystemConfig::seed)
        .def_property(
            "B", [](const SystemConfig& c) -> py::object {
                if (c.codebook.is_discrete()) return py::int_(c.codebook.bits);
                return py::str("inf");
            },
            [](SystemConfig& c, const py::object& b) { c.codebook = codebook_from_obj(b); })
        .def("set_uniform_power_dbm", &SystemConfig::set_uniform_power_dbm)
        .def("set_uniform_noise_dbm", &SystemConfig::set_uniform_noise_dbm)
        .def("set_uniform_kappa", &SystemConfig::set_uniform_kappa);

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def_readonly("K", &ChannelRealization::K)
        .def_readonly("V", &ChannelRealization::V)
        .def_readonly("R", &ChannelRealization::R)
        .def("g", &ChannelRealization::g_at, py::arg("k"), py::arg("v"), py::arg("i"))
        .def("h",
             [](const ChannelRealization& ch, int k, int v, int i) {
                 const auto s = ch.h_at(k, v, i);
                 return cvec(s.begin(), s.end());
             })
        .def("without_ris", &ChannelRealization::without_ris);

    py::class_<PhaseVector>(m, "PhaseVector")
        .def_readonly("psi", &PhaseVector::psi)
        .def_readonly("codes", &PhaseVector::codes)
        .def_property_readonly("R", &PhaseVector::size)
        .def_static("ones", &PhaseVector::ones, py::arg("R"), py::arg("codebook"))
        .def_static("from_codes", &PhaseVector::from_codes, py::arg("codes"), py::arg("codebook"));

    py::class_<Allocation>(m, "Allocation")
        .def_readonly("K", &Allocation::K)
        .def_readonly("V", &Allocation::V)
        .def("owned", &Allocation::owned, py::arg("k"), py::arg("v"), py::arg("i"))
        .def("power", [](const Allocation& a, int k, int v, int i) { return a.p[a.idx(k, v, i)]; });

    py::class_<TrialResult>(m, "TrialResult")
        .def_property_readonly("scheme", [](const TrialResult& r) { return scheme_name(r.scheme); })
        .def_readonly("seed", &TrialResult::seed)
        .def_readonly("trial", &TrialResult::trial)
        .def_readonly("R", &TrialResult::R)
        .def_property_readonly("B", [](const TrialResult& r) { return r.codebook.label(); })
        .def_readonly("min_sumrate", &TrialResult::min_sumrate)
        .def_readonly("dir1_sumrate", &TrialResult::dir1_sumrate)
        .def_readonly("dir2_sumrate", &TrialResult::dir2_sumrate)
        .def_readonly("outer_iters", &TrialResult::outer_iters)
        .def_readonly("wall_ms", &TrialResult::wall_ms)
        .def_readonly("converged", &TrialResult::converged)
        .def_readonly("objective_trace", &TrialResult::objective_trace)
        .def("__repr__", [](const TrialResult& r) {
            return "TrialResult(" + scheme_name(r.scheme) + ", R=" + std::to_string(r.R) +
                   ", B=" + r.codebook.label() + ", min_sumrate=" +
                   std::to_string(r.min_sumrate) + ")";
        });

    m.def(
        "build_realization",
        [](const SystemConfig& cfg, std::uint64_t seed, int trial) {
            Rng rng = Rng::stream(seed, 0x6368u, static_cast<std::uint64_t>(trial));
            return build_realization(cfg, rng);
        },
        py::arg("cfg"), py::arg("seed"), py::arg("trial") = 0,
        "Channel draw from the stream the Monte-Carlo harness would use");

    m.def("init_phase", &init_phase, py::arg("ch"), py::arg("cfg"));
    m.def("allocate_subbands", &allocate_subbands, py::arg("ch"), py::arg("psi"), py::arg("cfg"));
    m.def(
        "effective_gain",
        [](cplx g, const cvec& h, const PhaseVector& psi) {
            return effective_gain(g, std::span<const cplx>(h.data(), h.size()), psi);
        },
        py::arg("g"), py::arg("h"), py::arg("psi"));
    m.def("min_weighted_sumrate", &min_weighted_sumrate, py::arg("ch"), py::arg("alloc"),
          py::arg("psi"), py::arg("cfg"));
    m.def(
        "psg_optimize",
        [](const ChannelRealization& ch, const Allocation& alloc, const PhaseVector& start,
           const SystemConfig& cfg) {
            const PsgResult r = psg_optimize(ch, alloc, start, cfg);
            return py::make_tuple(r.best, r.f_best, r.f_trace);
        },
        py::arg("ch"), py::arg("alloc"), py::arg("psi_start"), py::arg("cfg"),
        "Returns (best_phase, f_best, f_trace)");
    m.def("exhaustive_phase_oracle", &exhaustive_phase_oracle, py::arg("ch"), py::arg("alloc"),
          py::arg("cfg"), py::arg("cap") = static_cast<std::size_t>(1u << 16));

    m.def(
        "run_scheme",
        [](const SystemConfig& cfg, const std::string& scheme, std::uint64_t seed, int trial) {
            Rng ch_rng = Rng::stream(seed, 0x6368u, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, ch_rng);
            const Scheme s = parse_scheme(scheme);
            Rng s_rng = Rng::stream(seed, 0x5C00u + static_cast<std::uint64_t>(s),
                                    static_cast<std::uint64_t>(trial));
            TrialResult r = run_scheme_on(cfg, s, ch, s_rng);
            r.seed = seed;
            r.trial = trial;
            return r;
        },
        py::arg("cfg"), py::arg("scheme"), py::arg("seed"), py::arg("trial") = 0);

    m.def(
        "monte_carlo",
        [](const SystemConfig& cfg, const std::vector<std::string>& schemes,
           const std::vector<int>& r_values, const std::vector<py::object>& b_values, int trials,
           int threads) {
            std::vector<SweepPoint> sweep;
            for (int r : r_values)
                for (const auto& b : b_values) sweep.push_back({r, codebook_from_obj(b)});
            return monte_carlo(cfg, schemes_from_names(schemes), sweep, trials, threads);
        },
        py::arg("cfg"), py::arg("schemes"), py::arg("R"), py::arg("B"), py::arg("trials"),
        py::arg("threads") = 0);

    m.def(
        "write_csv",
        [](const std::vector<TrialResult>& results, const std::string& path, bool timing) {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw ConfigError("cannot open output file: " + path);
            write_csv(out, results, timing);
        },
        py::arg("results"), py::arg("path"), py::arg("timing") = false);

    m.def(
        "csv_text",
        [](const std::vector<TrialResult>& results, bool timing) {
            std::ostringstream ss;
            write_csv(ss, results, timing);
            return ss.str();
        },
        py::arg("results"), py::arg("timing") = false);

    m.def(
        "verify",
        [](std::uint64_t seed) {
            py::list out;
            for (const auto& c : run_verification(seed))
                out.append(py::make_tuple(c.name, c.pass, c.detail));
            return out;
        },
        py::arg("seed") = static_cast<std::uint64_t>(20240901));
}
