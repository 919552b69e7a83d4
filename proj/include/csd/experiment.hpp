#pragma once

#include "csd/dataset.hpp"
#include "csd/heuristic_search.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace csd {

enum class Method { Prim, Beam, BestInterval, Mors, Random, Exact, Smt };
enum class Scenario { Unconstrained, Cardinality, Alternatives, Timeouts };

std::string to_string(Method method);
std::string to_string(Scenario scenario);
Method parse_method(const std::string& name);
Scenario parse_scenario(const std::string& name);

struct DatasetSpec {
    std::filesystem::path path;
    std::string target = "target";
    std::string id; // defaults to the file stem
};

struct NamedDataset {
    std::string id;
    Dataset data;
};

struct ExperimentConfig {
    std::vector<DatasetSpec> datasets;
    std::size_t folds = 5;
    std::vector<Method> methods;
    Scenario scenario = Scenario::Unconstrained;
    std::vector<std::size_t> k_values{1, 2, 3, 4, 5};
    std::size_t a = 5;
    std::vector<std::size_t> tau_values{1, 2, 3};
    std::vector<double> timeouts_s{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048};
    std::uint64_t seed = 0;
    std::size_t parallelism = 1;

    PrimConfig prim;
    BeamConfig beam;
    std::size_t random_iters = 1000;
    std::uint64_t exact_candidate_cap = 10'000'000;
    std::string solver_command = "z3 -smt2 -t:{timeout_ms} {file}";

    /// Rejects configurations a run could not honor.
    void validate(bool require_datasets = true) const;
};

/// Parses the JSON configuration; relative dataset paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentRecord {
    std::string dataset;
    std::size_t fold = 0;
    std::string method;
    std::string scenario;
    std::optional<std::size_t> k;
    std::optional<std::size_t> alternative_index;
    std::optional<std::size_t> tau_abs;
    std::optional<double> timeout_s;
    std::optional<double> train_nwracc;
    std::optional<double> test_nwracc;
    std::optional<double> train_hamming;
    std::optional<double> test_hamming;
    std::optional<double> train_jaccard;
    std::optional<double> test_jaccard;
    std::optional<std::size_t> selected_feature_count;
    std::optional<double> runtime_s;
    std::optional<std::string> solver_status;
    std::optional<bool> degenerate;
    std::string status = "ok";
    std::optional<std::string> error;

    bool operator==(const ExperimentRecord&) const = default;
};

/// Loads every dataset in the configuration.
std::vector<NamedDataset> load_datasets(const ExperimentConfig& config);

/// One record per (dataset, fold, method, parameter point), sorted deterministically.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);
/// Same on already loaded datasets; config.datasets is ignored.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const std::vector<NamedDataset>& datasets);

/// Records with their runtimes cleared, for comparisons across runs.
std::vector<ExperimentRecord> without_runtime(std::vector<ExperimentRecord> records);

} // namespace csd
