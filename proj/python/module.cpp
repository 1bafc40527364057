#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nuelab/experiments.hpp"

namespace py = pybind11;
using namespace nuelab;

namespace {

// thin handle around the immutable system pointer
struct PySystem {
    SystemPtr ptr;
    const MapSystem& get() const { return *ptr; }
};

State to_state(const PySystem& sys, const std::vector<double>& coords) {
    if (static_cast<int>(coords.size()) != sys.get().domain().dim())
        throw InvalidParams("state dimension does not match the system domain");
    return coords.size() == 1 ? state1(coords[0]) : state2(coords[0], coords[1]);
}

std::vector<double> from_state(const State& s) {
    return s.dim == 1 ? std::vector<double>{s.coord[0]}
                      : std::vector<double>{s.coord[0], s.coord[1]};
}

NoiseKernel make_kernel(const std::string& mode, double epsilon, int dims) {
    if (mode == "additive") return NoiseKernel::additive(epsilon, dims);
    if (mode == "rotational") return NoiseKernel::rotational(epsilon);
    throw InvalidParams("kernel mode must be 'additive' or 'rotational'");
}

std::array<int, 2> grid_for(const PySystem& sys, int bins) {
    return sys.get().domain().dim() == 1 ? std::array<int, 2>{bins, 1}
                                         : std::array<int, 2>{bins, bins};
}

} // namespace

PYBIND11_MODULE(nuelab, m) {
    m.doc() = "random perturbations of non-uniformly expanding maps: orbits, "
              "hyperbolic times, measure estimation, stability experiments";

    py::class_<PySystem>(m, "MapSystem")
        .def_property_readonly("name", [](const PySystem& s) { return s.get().name(); })
        .def_property_readonly("dim", [](const PySystem& s) { return s.get().domain().dim(); })
        .def_property_readonly("has_critical_set",
                               [](const PySystem& s) { return s.get().has_critical_set(); })
        .def_property_readonly("domain_margin",
                               [](const PySystem& s) { return s.get().domain_margin(); })
        .def("eval",
             [](const PySystem& sys, const std::vector<double>& x) {
                 return from_state(sys.get().eval(to_state(sys, x)));
             })
        .def("tangent",
             [](const PySystem& sys, const std::vector<double>& x) {
                 return sys.get().tangent(to_state(sys, x));
             })
        .def("inv_tangent_norm",
             [](const PySystem& sys, const std::vector<double>& x) {
                 return sys.get().inv_tangent_norm(to_state(sys, x));
             })
        .def("jac_det",
             [](const PySystem& sys, const std::vector<double>& x) {
                 return sys.get().jac_det(to_state(sys, x));
             })
        .def("critical_distance",
             [](const PySystem& sys, const std::vector<double>& x) -> py::object {
                 const auto d = sys.get().critical_distance(to_state(sys, x));
                 return d ? py::cast(*d) : py::none();
             })
        .def("truncated_distance", [](const PySystem& sys, const std::vector<double>& x,
                                      double delta) {
            return sys.get().truncated_distance(to_state(sys, x), delta);
        });

    m.def(
        "build_system",
        [](const std::string& name, const ParamMap& params) {
            return PySystem{build_system(name, params)};
        },
        py::arg("name"), py::arg("params") = ParamMap{});

    py::class_<OrbitTrace>(m, "OrbitTrace")
        .def_property_readonly("states",
                               [](const OrbitTrace& t) {
                                   std::vector<std::vector<double>> out;
                                   out.reserve(t.states.size());
                                   for (const auto& s : t.states) out.push_back(from_state(s));
                                   return out;
                               })
        .def_readonly("log_inv_norms", &OrbitTrace::log_inv_norms)
        .def_readonly("log_trunc_dists", &OrbitTrace::log_trunc_dists)
        .def_readonly("resample_count", &OrbitTrace::resample_count)
        .def_property_readonly("steps", &OrbitTrace::steps);

    m.def(
        "sample_noise",
        [](const std::string& mode, double epsilon, int dims, int n, uint64_t seed,
           uint64_t stream) {
            const auto seq = sample_noise(make_kernel(mode, epsilon, dims), n, seed, stream);
            std::vector<std::vector<double>> out;
            out.reserve(seq.entries.size());
            for (const auto& e : seq.entries)
                out.push_back(dims == 2 ? std::vector<double>{e[0], e[1]}
                                        : std::vector<double>{e[0]});
            return out;
        },
        py::arg("mode"), py::arg("epsilon"), py::arg("dims"), py::arg("n"), py::arg("seed"),
        py::arg("stream") = 0);

    m.def(
        "random_orbit",
        [](const PySystem& sys, const std::string& mode, double epsilon,
           const std::vector<double>& x0, int n, py::object delta, uint64_t seed,
           uint64_t stream) {
            std::optional<double> d;
            if (!delta.is_none()) d = delta.cast<double>();
            return random_orbit(sys.ptr, make_kernel(mode, epsilon, sys.get().domain().dim()),
                                to_state(sys, x0), n, d, seed, stream);
        },
        py::arg("system"), py::arg("mode"), py::arg("epsilon"), py::arg("x0"), py::arg("n"),
        py::arg("delta") = py::none(), py::arg("seed") = 1, py::arg("stream") = 0);

    m.def(
        "pliss_select",
        [](const std::vector<double>& a, double c1, double c2, double H,
           bool allow_unguaranteed) {
            return pliss_select(a, PlissParams(c1, c2, H), allow_unguaranteed);
        },
        py::arg("a"), py::arg("c1"), py::arg("c2"), py::arg("H"),
        py::arg("allow_unguaranteed") = false);

    py::class_<HyperbolicRecord>(m, "HyperbolicRecord")
        .def_readonly("times", &HyperbolicRecord::times)
        .def_property_readonly("first", [](const HyperbolicRecord& r) -> py::object {
            return r.first ? py::cast(*r.first) : py::none();
        });

    m.def("hyperbolic_times_diffeo", &hyperbolic_times_diffeo, py::arg("trace"),
          py::arg("alpha_hyp"));
    m.def(
        "hyperbolic_times_critical",
        [](const OrbitTrace& t, double alpha, double delta, double b) {
            return hyperbolic_times_critical(t, HypParams(alpha, delta, b));
        },
        py::arg("trace"), py::arg("alpha_hyp"), py::arg("delta"), py::arg("b_exponent"));
    m.def(
        "first_hyperbolic_time",
        [](const OrbitTrace& t, double alpha, double delta, double b,
           bool critical) -> py::object {
            const auto h = first_hyperbolic_time(t, HypParams(alpha, delta, b), critical);
            return h ? py::cast(*h) : py::none();
        },
        py::arg("trace"), py::arg("alpha_hyp"), py::arg("delta"), py::arg("b_exponent"),
        py::arg("critical"));

    py::class_<TailProfile>(m, "TailProfile")
        .def_readonly("epsilon", &TailProfile::epsilon)
        .def_readonly("counts", &TailProfile::counts)
        .def_readonly("censored", &TailProfile::censored)
        .def_readonly("sample_size", &TailProfile::sample_size)
        .def_readonly("n_max", &TailProfile::n_max)
        .def("survival", &TailProfile::survival);

    m.def(
        "tail_profile",
        [](const PySystem& sys, const std::string& mode, double epsilon, double alpha,
           double delta, int64_t sample_size, int n_max, uint64_t seed, int threads) {
            const HypParams hp(alpha, delta, sys.get().constants().b_exponent);
            return tail_profile(sys.ptr, make_kernel(mode, epsilon, sys.get().domain().dim()),
                                hp, sample_size, n_max, seed, threads);
        },
        py::arg("system"), py::arg("mode"), py::arg("epsilon"), py::arg("alpha_hyp"),
        py::arg("delta"), py::arg("sample_size"), py::arg("n_max"), py::arg("seed") = 1,
        py::arg("threads") = 1);
    m.def("tail_statistic", &tail_statistic, py::arg("profile"), py::arg("N"));
    m.def("uniform_tail_statistic", &uniform_tail_statistic, py::arg("profiles"), py::arg("N"));
    m.def("fit_geometric_tail", &fit_geometric_tail, py::arg("profile"));

    m.def("expansion_average", &expansion_average);
    m.def("recurrence_average", &recurrence_average);

    py::class_<HistogramMeasure>(m, "HistogramMeasure")
        .def_property_readonly("masses",
                               [](const HistogramMeasure& h) { return h.masses(); })
        .def_property_readonly("cells", &HistogramMeasure::cell_count)
        .def("l1_distance", &HistogramMeasure::l1_distance);

    m.def(
        "birkhoff_histogram",
        [](const PySystem& sys, const std::vector<double>& x0, int64_t n, int bins) {
            return birkhoff_histogram(sys.ptr, to_state(sys, x0), n, grid_for(sys, bins));
        },
        py::arg("system"), py::arg("x0"), py::arg("n"), py::arg("bins") = 128);
    m.def(
        "random_birkhoff_histogram",
        [](const PySystem& sys, const std::string& mode, double epsilon,
           const std::vector<double>& x0, int64_t n, int bins, uint64_t seed, uint64_t stream) {
            return random_birkhoff_histogram(sys.ptr,
                                             make_kernel(mode, epsilon, sys.get().domain().dim()),
                                             to_state(sys, x0), n, grid_for(sys, bins), seed,
                                             stream);
        },
        py::arg("system"), py::arg("mode"), py::arg("epsilon"), py::arg("x0"), py::arg("n"),
        py::arg("bins") = 128, py::arg("seed") = 1, py::arg("stream") = 0);

    m.def(
        "pushforward_average",
        [](const PySystem& sys, const std::string& mode, double epsilon,
           const std::vector<double>& x0, int n_time, int n_samples, int bins, uint64_t seed) {
            return pushforward_average(sys.ptr, make_kernel(mode, epsilon, sys.get().domain().dim()),
                                       to_state(sys, x0), n_time, n_samples, grid_for(sys, bins),
                                       seed);
        },
        py::arg("system"), py::arg("mode"), py::arg("epsilon"), py::arg("x0"), py::arg("n_time"),
        py::arg("n_samples"), py::arg("bins") = 128, py::arg("seed") = 1);

    m.def(
        "weak_star_distance",
        [](const HistogramMeasure& mu, const HistogramMeasure& nu, int K) {
            const TestFunctionFamily fam(mu.domain(), mu.bins(), K);
            return weak_star_distance(mu, nu, fam);
        },
        py::arg("mu"), py::arg("nu"), py::arg("K") = 16);
    m.def("wasserstein_1d", &wasserstein_1d);

    m.def(
        "stationarity_residual",
        [](const HistogramMeasure& mu, const PySystem& sys, const std::string& mode,
           double epsilon, int mc_samples, uint64_t seed, int K) {
            const TestFunctionFamily fam(mu.domain(), mu.bins(), K);
            return stationarity_residual(mu, sys.ptr,
                                         make_kernel(mode, epsilon, sys.get().domain().dim()),
                                         fam, mc_samples, seed);
        },
        py::arg("mu"), py::arg("system"), py::arg("mode"), py::arg("epsilon"),
        py::arg("mc_samples") = 1000, py::arg("seed") = 1, py::arg("K") = 16);

    m.def(
        "cluster_count",
        [](const std::vector<HistogramMeasure>& samples, double threshold, int K) {
            if (samples.empty()) throw InvalidParams("cluster_count: no samples");
            const TestFunctionFamily fam(samples[0].domain(), samples[0].bins(), K);
            return cluster_measures(samples, fam, threshold).l;
        },
        py::arg("samples"), py::arg("threshold"), py::arg("K") = 16);

    m.def(
        "convex_fit",
        [](const HistogramMeasure& mu, const std::vector<HistogramMeasure>& basis) {
            const ConvexFit f = convex_fit(mu, basis);
            return py::make_tuple(f.weights, f.residual);
        },
        py::arg("mu"), py::arg("basis"));

    py::class_<MisiurewiczResult>(m, "MisiurewiczResult")
        .def_readonly("a0", &MisiurewiczResult::a0)
        .def_readonly("k", &MisiurewiczResult::k)
        .def_readonly("residual", &MisiurewiczResult::residual);
    m.def("find_misiurewicz_a0", &find_misiurewicz_a0, py::arg("k_max") = 8,
          py::arg("tol") = 1e-12);

    m.def(
        "return_depths",
        [](const OrbitTrace& trace, double alpha_skew, double eta) {
            const auto r = return_depths(trace, alpha_skew, eta);
            return py::make_tuple(r.depths, r.g_set, r.g_sum);
        },
        py::arg("trace"), py::arg("alpha_skew"), py::arg("eta_exponent") = 0.1);
    m.def("central_expansion_average", &central_expansion_average);
    m.def(
        "deep_return_fraction",
        [](const PySystem& sys, double epsilon, int n, int64_t sample_size, uint64_t seed) {
            return deep_return_fraction(sys.ptr, NoiseKernel::additive(epsilon, 2), n,
                                        sample_size, seed);
        },
        py::arg("system"), py::arg("epsilon"), py::arg("n"), py::arg("sample_size"),
        py::arg("seed") = 1);
    m.def(
        "expansion_deficit_fraction",
        [](const PySystem& sys, double epsilon, int n, double gamma, int64_t sample_size,
           uint64_t seed) {
            return expansion_deficit_fraction(sys.ptr, NoiseKernel::additive(epsilon, 2), n,
                                              gamma, sample_size, seed);
        },
        py::arg("system"), py::arg("epsilon"), py::arg("n"), py::arg("gamma"),
        py::arg("sample_size"), py::arg("seed") = 1);

    m.def(
        "foliation_fixed_point",
        [](const PySystem& sys, int ns, int nx, double tol, int max_iters) {
            const auto r = foliation_fixed_point(sys.ptr, ns, nx, tol, max_iters);
            return py::make_tuple(r.field.sup_norm(), r.iterations, r.residual);
        },
        py::arg("system"), py::arg("ns") = 256, py::arg("nx") = 128, py::arg("tol") = 1e-10,
        py::arg("max_iters") = 64);

    m.attr("__version__") = "0.1.0";
}
