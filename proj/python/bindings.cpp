#include "csd/alternatives.hpp"
#include "csd/baselines.hpp"
#include "csd/exact_search.hpp"
#include "csd/experiment.hpp"
#include "csd/heuristic_search.hpp"
#include "csd/report.hpp"
#include "csd/smt.hpp"

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <limits>

namespace py = pybind11;
using namespace csd;

namespace {

// Infinite bounds cross the language boundary as float('inf') / float('-inf').
double to_float(const Bound& b) {
    if (b.is_neg_inf()) return -std::numeric_limits<double>::infinity();
    if (b.is_pos_inf()) return std::numeric_limits<double>::infinity();
    return b.value();
}

Bound from_float(double v) {
    if (std::isinf(v)) return v < 0 ? Bound::neg_inf() : Bound::pos_inf();
    return Bound::finite(v);
}

std::vector<double> lowers(const SubgroupDescription& d) {
    std::vector<double> out;
    for (std::size_t j = 0; j < d.size(); ++j) out.push_back(to_float(d.lower(j)));
    return out;
}

std::vector<double> uppers(const SubgroupDescription& d) {
    std::vector<double> out;
    for (std::size_t j = 0; j < d.size(); ++j) out.push_back(to_float(d.upper(j)));
    return out;
}

Dataset make_dataset(py::array_t<double, py::array::c_style | py::array::forcecast> x, BitVector y,
                     std::vector<std::string> names) {
    if (x.ndim() != 2) throw std::invalid_argument("X must be two-dimensional");
    const auto rows = static_cast<std::size_t>(x.shape(0));
    const auto cols = static_cast<std::size_t>(x.shape(1));
    std::vector<double> values(x.data(), x.data() + rows * cols);
    return Dataset(rows, cols, std::move(values), std::move(y), std::move(names));
}

SubgroupDescription discover(const Dataset& data, const std::string& method, std::optional<std::size_t> k,
                             std::uint64_t seed, double alpha, double beta0, std::size_t width,
                             std::size_t n_iters, std::uint64_t candidate_cap, const std::string& solver_command,
                             double solver_timeout_s) {
    const auto quality = QualityFunction::wracc();
    const auto hook = k ? PermissibleFeatures::cardinality(CardinalityConstraint(*k)) : PermissibleFeatures{};
    switch (parse_method(method)) {
    case Method::Prim: return prim_search(data, quality, PrimConfig{alpha, beta0}, hook);
    case Method::Beam: return beam_search(data, quality, BeamConfig{width, UpdateRule::BeamUpdate}, hook);
    case Method::BestInterval:
        return beam_search(data, quality, BeamConfig{width, UpdateRule::BestInterval}, hook);
    case Method::Mors: return mors_search(data, hook);
    case Method::Random: return random_search(data, quality, RandomConfig{n_iters, seed}, hook);
    case Method::Exact: {
        ExactConfig config;
        config.k = k;
        config.candidate_cap = candidate_cap;
        return exact_search(data, config);
    }
    case Method::Smt: {
        std::optional<CardinalityConstraint> limit;
        if (k) limit = CardinalityConstraint(*k);
        const auto problem = encode_subgroup_discovery(data, limit);
        const auto outcome = run_solver(problem, solver_command, solver_timeout_s);
        if (!outcome.model) throw SolverError("solver returned no model (" + to_string(outcome.status) + ")");
        return decode_model(outcome, problem, data);
    }
    }
    throw std::logic_error("unhandled method");
}

py::dict record_dict(const ExperimentRecord& r) {
    py::dict d;
    d["dataset"] = r.dataset;
    d["fold"] = r.fold;
    d["method"] = r.method;
    d["scenario"] = r.scenario;
    d["k"] = r.k;
    d["alternative_index"] = r.alternative_index;
    d["tau_abs"] = r.tau_abs;
    d["timeout_s"] = r.timeout_s;
    d["train_nwracc"] = r.train_nwracc;
    d["test_nwracc"] = r.test_nwracc;
    d["train_hamming"] = r.train_hamming;
    d["test_hamming"] = r.test_hamming;
    d["train_jaccard"] = r.train_jaccard;
    d["test_jaccard"] = r.test_jaccard;
    d["selected_feature_count"] = r.selected_feature_count;
    d["runtime_s"] = r.runtime_s;
    d["solver_status"] = r.solver_status;
    d["degenerate"] = r.degenerate;
    d["status"] = r.status;
    d["error"] = r.error;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Constrained subgroup discovery on numeric datasets";

    py::register_exception<DegenerateTargetError>(m, "DegenerateTargetError", PyExc_ValueError);
    py::register_exception<CandidateCapExceeded>(m, "CandidateCapExceeded", PyExc_RuntimeError);
    auto solver_error = py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<SolverNotFound>(m, "SolverNotFound", solver_error.ptr());

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("X"), py::arg("y"), py::arg("feature_names") = std::vector<std::string>{})
        .def_property_readonly("rows", &Dataset::rows)
        .def_property_readonly("cols", &Dataset::cols)
        .def_property_readonly("feature_names", &Dataset::feature_names)
        .def_property_readonly("target", &Dataset::target)
        .def_property_readonly("positives", &Dataset::positives)
        .def("unique_values", &Dataset::unique_values, py::arg("feature"))
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset rows=" + std::to_string(d.rows()) + " cols=" + std::to_string(d.cols()) + ">";
        });

    m.def("load_csv", [](const std::filesystem::path& path, const std::string& target) { return load_csv(path, target); },
          py::arg("path"), py::arg("target") = "target");

    py::class_<SubgroupDescription>(m, "SubgroupDescription")
        .def(py::init([](const std::vector<double>& lb, const std::vector<double>& ub) {
                 std::vector<Bound> lo, hi;
                 for (double v : lb) lo.push_back(from_float(v));
                 for (double v : ub) hi.push_back(from_float(v));
                 return SubgroupDescription(std::move(lo), std::move(hi));
             }),
             py::arg("lb"), py::arg("ub"))
        .def_static("unrestricted", &SubgroupDescription::unrestricted, py::arg("features"))
        .def_property_readonly("lb", &lowers)
        .def_property_readonly("ub", &uppers)
        .def_property_readonly("is_sentinel", &SubgroupDescription::is_sentinel)
        .def("to_json", [](const SubgroupDescription& d) { return to_json(d); })
        .def(py::self == py::self)
        .def("__repr__", [](const SubgroupDescription& d) { return "<SubgroupDescription " + to_json(d) + ">"; });

    m.def("membership", &membership, py::arg("description"), py::arg("dataset"));
    m.def("selected_features", &selected_features, py::arg("description"), py::arg("dataset"));
    m.def("postprocess_bounds", &postprocess_bounds, py::arg("description"), py::arg("dataset"));
    m.def("is_perfect", [](const BitVector& b, const BitVector& y) { return is_perfect(b, y); });

    m.def("wracc", [](const BitVector& b, const BitVector& y) { return wracc(b, y); }, py::arg("membership"), py::arg("target"));
    m.def("wracc_max", [](const BitVector& y) { return wracc_max(y); }, py::arg("target"));
    m.def("nwracc", [](const BitVector& b, const BitVector& y) { return nwracc(b, y); }, py::arg("membership"), py::arg("target"));
    m.def("hamming_similarity", [](const BitVector& a, const BitVector& b) { return hamming_similarity(a, b); });
    m.def("jaccard_similarity", [](const BitVector& a, const BitVector& b) { return jaccard_similarity(a, b); });
    m.def("deselection_dissimilarity",
          [](const BitVector& s_new, const BitVector& s_old) { return deselection_dissimilarity(s_new, s_old); },
          py::arg("s_new"), py::arg("s_old"));

    m.def("discover", &discover, py::arg("dataset"), py::arg("method") = "BEAM", py::arg("k") = py::none(),
          py::arg("seed") = 0, py::arg("alpha") = 0.05, py::arg("beta0") = 0.0, py::arg("width") = 10,
          py::arg("n_iters") = 1000, py::arg("candidate_cap") = 10'000'000,
          py::arg("solver_command") = std::string(kDefaultSolverCommand), py::arg("solver_timeout_s") = 60.0,
          "Find one subgroup description on the whole dataset with the named method.");

    m.def(
        "find_alternatives",
        [](const Dataset& data, const std::string& method, std::size_t a, std::size_t tau_abs,
           std::optional<std::size_t> k, std::uint64_t candidate_cap, const std::string& solver_command,
           double solver_timeout_s) {
            AlternativesOptions options;
            switch (parse_method(method)) {
            case Method::Beam: options.method = AlternativeMethod::Beam; break;
            case Method::Smt: options.method = AlternativeMethod::Smt; break;
            case Method::Exact: options.method = AlternativeMethod::Exact; break;
            default: throw std::invalid_argument("alternatives support BEAM, SMT and EXACT only");
            }
            options.a = a;
            options.tau_abs = tau_abs;
            options.k = k;
            options.exact.candidate_cap = candidate_cap;
            options.solver_command = solver_command;
            options.solver_timeout_s = solver_timeout_s;
            py::list out;
            for (const auto& e : find_alternatives(data, options)) {
                py::dict item;
                item["description"] = e.description;
                item["membership"] = e.evaluation.membership;
                item["selection"] = e.evaluation.selection;
                item["quality"] = e.quality;
                item["hamming_to_original"] = e.hamming_to_original;
                item["jaccard_to_original"] = e.jaccard_to_original;
                item["degenerate"] = e.degenerate;
                item["runtime_s"] = e.runtime_s;
                item["solver_status"] = e.solver_status ? py::cast(to_string(*e.solver_status)) : py::none();
                out.append(std::move(item));
            }
            return out;
        },
        py::arg("dataset"), py::arg("method") = "EXACT", py::arg("a") = 1, py::arg("tau_abs") = 1,
        py::arg("k") = py::none(), py::arg("candidate_cap") = 10'000'000,
        py::arg("solver_command") = std::string(kDefaultSolverCommand), py::arg("solver_timeout_s") = 60.0);

    m.def(
        "encode_smt",
        [](const Dataset& data, std::optional<std::size_t> k) {
            std::optional<CardinalityConstraint> limit;
            if (k) limit = CardinalityConstraint(*k);
            return encode_subgroup_discovery(data, limit).text;
        },
        py::arg("dataset"), py::arg("k") = py::none());
    m.def("solver_available", &default_solver_available);

    m.def(
        "run_experiment",
        [](const std::filesystem::path& config_path, std::optional<std::size_t> parallelism) {
            auto config = load_experiment_config(config_path);
            if (parallelism) config.parallelism = *parallelism;
            std::vector<ExperimentRecord> records;
            {
                py::gil_scoped_release release;
                records = run_experiment(config);
            }
            py::list out;
            for (const auto& r : records) out.append(record_dict(r));
            return out;
        },
        py::arg("config_path"), py::arg("parallelism") = py::none(),
        "Run the experiment described by a JSON config file and return its records as dicts.");
}
