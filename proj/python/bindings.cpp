#include "tdkit/error.hpp"
#include "tdkit/experiments.hpp"
#include "tdkit/linear.hpp"
#include "tdkit/mrp.hpp"
#include "tdkit/mrp_suite.hpp"
#include "tdkit/nexting.hpp"
#include "tdkit/representation.hpp"
#include "tdkit/td_learner.hpp"
#include "tdkit/tile_coder.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace tdkit;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<TdVariant> variants(const std::vector<std::string>& names) {
    if (names.empty()) return all_variants();
    std::vector<TdVariant> out;
    for (const auto& n : names) out.push_back(parse_variant(n));
    return out;
}

} // namespace

PYBIND11_MODULE(_tdkit, m) {
    m.doc() = "Linear TD(lambda) learners, random MRPs and experiment harness";

    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);

    py::class_<FeatureVector>(m, "FeatureVector")
        .def_static("dense", [](std::vector<double> v) { return FeatureVector::dense(std::move(v)); })
        .def_static("sparse", [](std::size_t n, std::vector<std::size_t> idx, std::vector<double> val) {
            return FeatureVector::sparse(n, std::move(idx), std::move(val));
        })
        .def_static("binary", [](std::size_t n, std::vector<std::size_t> idx) {
            return FeatureVector::binary(n, std::move(idx));
        })
        .def_property_readonly("dim", &FeatureVector::dim)
        .def_property_readonly("active_count", &FeatureVector::active_count)
        .def("is_binary", &FeatureVector::is_binary)
        .def("to_dense", &FeatureVector::to_dense)
        .def("__eq__", [](const FeatureVector& a, const FeatureVector& b) { return a == b; });

    m.def("dot", [](const std::vector<double>& w, const FeatureVector& phi) {
        return dot(std::span<const double>(w), phi);
    });

    py::enum_<TdVariant>(m, "TdVariant")
        .value("accumulate", TdVariant::accumulate)
        .value("replace", TdVariant::replace)
        .value("true_online", TdVariant::true_online);

    py::class_<TdConfig>(m, "TdConfig")
        .def(py::init([](double alpha, double lambda, double gamma, TdVariant variant) {
                 TdConfig c;
                 c.alpha = alpha;
                 c.lambda = lambda;
                 c.gamma = gamma;
                 c.variant = variant;
                 return c;
             }),
             py::arg("alpha"), py::arg("lambda_"), py::arg("gamma") = 1.0,
             py::arg("variant") = TdVariant::true_online)
        .def_readwrite("alpha", &TdConfig::alpha)
        .def_readwrite("lambda_", &TdConfig::lambda)
        .def_readwrite("gamma", &TdConfig::gamma)
        .def_readwrite("variant", &TdConfig::variant)
        .def_readwrite("trace_cutoff", &TdConfig::trace_cutoff);

    py::class_<TdLearner>(m, "TdLearner")
        .def(py::init<TdConfig, std::size_t>(), py::arg("config"), py::arg("n"))
        .def("step", [](TdLearner& l, const FeatureVector& phi, double reward, const FeatureVector& next,
                        bool terminal) { return l.step(phi, reward, next, terminal).value; },
             py::arg("phi"), py::arg("reward"), py::arg("phi_next"), py::arg("terminal") = false)
        .def("start_episode", &TdLearner::start_episode)
        .def("predict", &TdLearner::predict)
        .def("reset", &TdLearner::reset)
        .def_property_readonly("theta", [](const TdLearner& l) { return l.theta().values(); })
        .def_property_readonly("trace", [](const TdLearner& l) { return l.trace(); })
        .def_property_readonly("diverged", &TdLearner::diverged);

    py::class_<Mrp>(m, "Mrp")
        .def_readonly("k", &Mrp::k)
        .def_readonly("gamma", &Mrp::gamma)
        .def_readonly("sigma", &Mrp::sigma)
        .def_readonly("P", &Mrp::P)
        .def_readonly("p_terminal", &Mrp::p_terminal)
        .def_readonly("r_mean", &Mrp::r_mean)
        .def_readonly("r_terminal", &Mrp::r_terminal)
        .def("episodic", &Mrp::episodic);

    py::class_<Representation>(m, "Representation")
        .def_property_readonly("dim", &Representation::dim)
        .def_property_readonly("num_states", &Representation::num_states)
        .def("is_binary", &Representation::is_binary)
        .def("features", &Representation::features, py::return_value_policy::copy);

    m.def("make_tabular", &make_tabular);
    m.def("make_binary", &make_binary);
    m.def("make_normal", [](std::size_t k, std::uint64_t seed, std::size_t dim) {
        Rng rng(seed);
        return make_normal(k, rng, dim);
    }, py::arg("k"), py::arg("seed"), py::arg("dim") = 5);
    m.def("make_aliased_constant", &make_aliased_constant);

    m.def("make_one_state", [](double p) {
        auto inst = make_one_state(p);
        return py::make_tuple(inst.mrp, inst.rep);
    }, py::arg("p") = 0.5);
    m.def("make_two_state", [](double p) {
        auto inst = make_two_state(p);
        return py::make_tuple(inst.mrp, inst.rep);
    }, py::arg("p") = 0.5);
    m.def("make_random_mrp", [](std::size_t k, std::size_t b, double sigma, std::uint64_t seed, double gamma) {
        return make_random_mrp({k, b, sigma, seed, gamma});
    }, py::arg("k"), py::arg("b"), py::arg("sigma"), py::arg("seed") = 0, py::arg("gamma") = 0.99);

    m.def("true_values", [](const Mrp& mrp) { return true_values(mrp).v; });
    m.def("state_distribution", &state_distribution);
    m.def("lms_solution", [](const Mrp& mrp, const Representation& rep, const std::string& weighting) {
        return lms_solution(mrp, rep, parse_weighting(weighting)).values();
    }, py::arg("mrp"), py::arg("rep"), py::arg("weighting") = "state_distribution");

    m.def("tile_code", [](const std::vector<double>& frame, std::uint64_t seed) {
        TileCoderConfig cfg;
        cfg.num_signals = frame.size();
        cfg.seed = seed;
        const auto phi = tile_code(cfg, frame);
        return std::vector<std::size_t>(phi.indices().begin(), phi.indices().end());
    }, py::arg("frame"), py::arg("seed") = 0);
    m.def("compute_returns", [](const std::vector<double>& x, double gamma) { return compute_returns(x, gamma); });

    m.def("run_sweep", [](const Mrp& mrp, const Representation& rep, std::vector<double> alphas,
                          std::vector<double> lambdas, const std::vector<std::string>& methods, std::size_t runs,
                          std::size_t horizon, std::uint64_t seed, std::size_t threads) {
        SweepConfig cfg;
        if (!alphas.empty()) cfg.alphas = std::move(alphas);
        if (!lambdas.empty()) cfg.lambdas = std::move(lambdas);
        cfg.methods = variants(methods);
        cfg.runs = runs;
        cfg.horizon = horizon;
        cfg.master_seed = seed;
        cfg.threads = threads;
        SweepResult r;
        {
            py::gil_scoped_release release;
            r = run_sweep(mrp, rep, cfg);
        }
        return json_to_py(sweep_summary_json(r));
    }, py::arg("mrp"), py::arg("rep"), py::arg("alphas") = std::vector<double>{},
       py::arg("lambdas") = std::vector<double>{}, py::arg("methods") = std::vector<std::string>{},
       py::arg("runs") = 50, py::arg("horizon") = 100, py::arg("seed") = 0, py::arg("threads") = 0);

    m.def("run_challenge_one_state", [](double p, std::size_t runs, std::uint64_t seed) {
        OneStateConfig cfg;
        cfg.p = p;
        cfg.runs = runs;
        cfg.seed = seed;
        py::list out;
        for (const auto& pt : run_challenge_one_state(cfg)) {
            out.append(py::dict(py::arg("method") = std::string(to_string(pt.method)), py::arg("alpha") = pt.alpha,
                                py::arg("mean_error") = pt.mean_error, py::arg("max_error") = pt.max_error,
                                py::arg("diverged") = pt.diverged));
        }
        return out;
    }, py::arg("p") = 0.5, py::arg("runs") = 100, py::arg("seed") = 0);

    m.def("run_challenge_two_state", [](double p, std::size_t runs, std::uint64_t seed) {
        TwoStateConfig cfg;
        cfg.p = p;
        cfg.runs = runs;
        cfg.seed = seed;
        const auto r = run_challenge_two_state(cfg);
        py::list pts;
        for (const auto& pt : r.points) {
            pts.append(py::dict(py::arg("method") = std::string(to_string(pt.method)), py::arg("lambda") = pt.lambda,
                                py::arg("error") = pt.error, py::arg("converged") = pt.all_converged));
        }
        return py::dict(py::arg("points") = pts, py::arg("lms_error") = r.lms_error,
                        py::arg("lms_theta") = r.lms_theta);
    }, py::arg("p") = 0.5, py::arg("runs") = 20, py::arg("seed") = 0);
}
