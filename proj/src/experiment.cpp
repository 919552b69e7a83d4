#include "csd/experiment.hpp"

#include "csd/alternatives.hpp"
#include "csd/baselines.hpp"
#include "csd/exact_search.hpp"
#include "csd/quality.hpp"
#include "csd/smt.hpp"
#include "csd/subgroup.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace csd {

namespace {

const std::vector<std::pair<Method, std::string>> kMethodNames = {
    {Method::Prim, "PRIM"}, {Method::Beam, "BEAM"},     {Method::BestInterval, "BEST_INTERVAL"},
    {Method::Mors, "MORS"}, {Method::Random, "RANDOM"}, {Method::Exact, "EXACT"},
    {Method::Smt, "SMT"},
};

const std::vector<std::pair<Scenario, std::string>> kScenarioNames = {
    {Scenario::Unconstrained, "UNCONSTRAINED"},
    {Scenario::Cardinality, "CARDINALITY"},
    {Scenario::Alternatives, "ALTERNATIVES"},
    {Scenario::Timeouts, "TIMEOUTS"},
};

std::string upper_snake(std::string text) {
    for (auto& c : text) c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return text;
}

} // namespace

std::string to_string(Method method) {
    for (const auto& [m, name] : kMethodNames) {
        if (m == method) return name;
    }
    throw std::logic_error("unknown method");
}

std::string to_string(Scenario scenario) {
    for (const auto& [s, name] : kScenarioNames) {
        if (s == scenario) return name;
    }
    throw std::logic_error("unknown scenario");
}

Method parse_method(const std::string& name) {
    const auto key = upper_snake(name);
    for (const auto& [m, n] : kMethodNames) {
        if (n == key) return m;
    }
    throw std::invalid_argument("unknown method '" + name + "'");
}

Scenario parse_scenario(const std::string& name) {
    const auto key = upper_snake(name);
    for (const auto& [s, n] : kScenarioNames) {
        if (n == key) return s;
    }
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

void ExperimentConfig::validate(bool require_datasets) const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("experiment config: " + what); };
    if (require_datasets && datasets.empty()) fail("no datasets given");
    if (methods.empty()) fail("no methods given");
    if (folds < 2) fail("folds must be at least 2");
    if (parallelism < 1) fail("parallelism must be at least 1");
    if (random_iters < 1) fail("random.n_iters must be at least 1");
    if (exact_candidate_cap < 1) fail("exact.candidate_cap must be at least 1");
    prim.validate();
    beam.validate();

    const bool uses_k = scenario != Scenario::Unconstrained;
    if (uses_k && scenario != Scenario::Timeouts && k_values.empty()) fail("k_values must not be empty");
    for (auto k : k_values) {
        if (k < 1) fail("every k must be at least 1");
    }
    const bool uses_smt = std::find(methods.begin(), methods.end(), Method::Smt) != methods.end();
    if (uses_smt || scenario == Scenario::Timeouts) {
        if (timeouts_s.empty()) fail("timeouts_s must not be empty");
        for (auto t : timeouts_s) {
            if (!(t > 0.0)) fail("every timeout must be positive");
        }
    }
    if (scenario == Scenario::Timeouts) {
        for (auto m : methods) {
            if (m != Method::Smt) fail("the TIMEOUTS scenario only runs SMT");
        }
    }
    if (scenario == Scenario::Alternatives) {
        if (a < 1) fail("a must be at least 1");
        if (tau_values.empty()) fail("tau_values must not be empty");
        for (auto t : tau_values) {
            if (t < 1) fail("every tau_abs must be at least 1");
        }
        for (auto m : methods) {
            if (m != Method::Beam && m != Method::Smt && m != Method::Exact) {
                fail("the ALTERNATIVES scenario supports BEAM, SMT and EXACT only, not " + to_string(m));
            }
        }
    }
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("experiment config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");

    static const std::set<std::string> known = {"datasets", "folds",  "methods", "scenario",    "k_values",
                                                "a",        "tau_values", "timeouts_s", "seed", "parallelism",
                                                "prim",     "beam",   "random",  "exact",       "solver"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw std::invalid_argument("experiment config: unknown key '" + key + "'");
    }

    ExperimentConfig config;
    try {
        for (const auto& d : j.at("datasets")) {
            DatasetSpec spec;
            spec.path = d.at("path").get<std::string>();
            if (spec.path.is_relative() && !base_dir.empty()) spec.path = base_dir / spec.path;
            spec.target = d.value("target", std::string("target"));
            spec.id = d.value("id", spec.path.stem().string());
            config.datasets.push_back(std::move(spec));
        }
        for (const auto& m : j.at("methods")) config.methods.push_back(parse_method(m.get<std::string>()));
        if (j.contains("scenario")) config.scenario = parse_scenario(j["scenario"].get<std::string>());
        config.folds = j.value("folds", config.folds);
        config.k_values = j.value("k_values", config.k_values);
        config.a = j.value("a", config.a);
        config.tau_values = j.value("tau_values", config.tau_values);
        config.timeouts_s = j.value("timeouts_s", config.timeouts_s);
        config.seed = j.value("seed", config.seed);
        config.parallelism = j.value("parallelism", config.parallelism);
        if (j.contains("prim")) {
            config.prim.alpha = j["prim"].value("alpha", config.prim.alpha);
            config.prim.beta0 = j["prim"].value("beta0", config.prim.beta0);
        }
        if (j.contains("beam")) config.beam.width = j["beam"].value("width", config.beam.width);
        if (j.contains("random")) config.random_iters = j["random"].value("n_iters", config.random_iters);
        if (j.contains("exact")) {
            config.exact_candidate_cap = j["exact"].value("candidate_cap", config.exact_candidate_cap);
        }
        if (j.contains("solver")) config.solver_command = j["solver"].value("command", config.solver_command);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("experiment config: ") + e.what());
    }
    config.validate();
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open experiment config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str(), path.parent_path());
}

std::vector<NamedDataset> load_datasets(const ExperimentConfig& config) {
    std::vector<NamedDataset> out;
    for (const auto& spec : config.datasets) {
        out.push_back({spec.id.empty() ? spec.path.stem().string() : spec.id, load_csv(spec.path, spec.target)});
    }
    return out;
}

namespace {

struct Task {
    std::size_t dataset;
    std::size_t fold;
    Method method;
    std::optional<std::size_t> k;
    std::optional<std::size_t> tau;
    std::optional<double> timeout;
};

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t task_seed(std::uint64_t seed, const Task& t) {
    std::uint64_t h = mix(seed);
    for (std::uint64_t part : {static_cast<std::uint64_t>(t.dataset), static_cast<std::uint64_t>(t.fold),
                               static_cast<std::uint64_t>(t.method), static_cast<std::uint64_t>(t.k.value_or(0))}) {
        h = mix(h ^ part);
    }
    return h;
}

std::vector<Task> plan(const ExperimentConfig& config, std::size_t dataset_count) {
    const std::optional<double> smt_timeout =
        config.timeouts_s.empty() ? std::nullopt
                                  : std::optional<double>(*std::max_element(config.timeouts_s.begin(),
                                                                            config.timeouts_s.end()));
    std::vector<Task> tasks;
    for (std::size_t d = 0; d < dataset_count; ++d) {
        for (std::size_t f = 0; f < config.folds; ++f) {
            for (auto method : config.methods) {
                const auto timeout = method == Method::Smt ? smt_timeout : std::nullopt;
                switch (config.scenario) {
                case Scenario::Unconstrained:
                    tasks.push_back({d, f, method, std::nullopt, std::nullopt, timeout});
                    break;
                case Scenario::Cardinality:
                    for (auto k : config.k_values) tasks.push_back({d, f, method, k, std::nullopt, timeout});
                    break;
                case Scenario::Alternatives:
                    for (auto k : config.k_values) {
                        for (auto tau : config.tau_values) tasks.push_back({d, f, method, k, tau, timeout});
                    }
                    break;
                case Scenario::Timeouts:
                    for (auto t : config.timeouts_s) {
                        tasks.push_back({d, f, method, std::nullopt, std::nullopt, t});
                        for (auto k : config.k_values) tasks.push_back({d, f, method, k, std::nullopt, t});
                    }
                    break;
                }
            }
        }
    }
    return tasks;
}

struct FoldData {
    Dataset train;
    Dataset test;
};

class Runner {
  public:
    Runner(const ExperimentConfig& config, const std::vector<NamedDataset>& datasets)
        : config_(config), datasets_(datasets) {
        for (const auto& named : datasets) {
            std::vector<FoldData> folds;
            for (const auto& split : stratified_kfold(named.data, config.folds, config.seed)) {
                folds.push_back({named.data.subset(split.train_indices), named.data.subset(split.test_indices)});
            }
            folds_.push_back(std::move(folds));
        }
    }

    std::vector<ExperimentRecord> run(const Task& task) const {
        const auto& fold = folds_[task.dataset][task.fold];
        try {
            if (config_.scenario == Scenario::Alternatives) return run_alternatives(task, fold);
            return {run_single(task, fold)};
        } catch (const std::exception& e) {
            auto record = base_record(task);
            record.status = "error";
            record.error = e.what();
            return {record};
        }
    }

  private:
    ExperimentRecord base_record(const Task& task) const {
        ExperimentRecord r;
        r.dataset = datasets_[task.dataset].id;
        r.fold = task.fold;
        r.method = to_string(task.method);
        r.scenario = to_string(config_.scenario);
        r.k = task.k;
        r.tau_abs = task.tau;
        r.timeout_s = task.timeout;
        return r;
    }

    static void fill_quality(ExperimentRecord& r, const SubgroupDescription& desc, const FoldData& fold) {
        const auto train_b = membership(desc, fold.train);
        const auto test_b = membership(desc, fold.test);
        r.train_nwracc = nwracc(train_b, fold.train.target());
        r.test_nwracc = nwracc(test_b, fold.test.target());
        r.selected_feature_count = count_ones(selected_features(desc, fold.train));
    }

    ExperimentRecord run_single(const Task& task, const FoldData& fold) const {
        auto record = base_record(task);
        const auto& train = fold.train;
        const auto quality = QualityFunction::wracc();
        const auto hook = task.k ? PermissibleFeatures::cardinality(CardinalityConstraint(*task.k))
                                 : PermissibleFeatures{};
        const auto start = std::chrono::steady_clock::now();
        std::optional<SubgroupDescription> desc;

        switch (task.method) {
        case Method::Prim: desc = prim_search(train, quality, config_.prim, hook); break;
        case Method::Beam: {
            BeamConfig beam = config_.beam;
            beam.update_rule = UpdateRule::BeamUpdate;
            desc = beam_search(train, quality, beam, hook);
            break;
        }
        case Method::BestInterval: {
            BeamConfig beam = config_.beam;
            beam.update_rule = UpdateRule::BestInterval;
            desc = beam_search(train, quality, beam, hook);
            break;
        }
        case Method::Mors: desc = mors_search(train, hook); break;
        case Method::Random: {
            RandomConfig rc{config_.random_iters, task_seed(config_.seed, task)};
            desc = random_search(train, quality, rc, hook);
            break;
        }
        case Method::Exact: {
            ExactConfig ec;
            ec.k = task.k;
            ec.candidate_cap = config_.exact_candidate_cap;
            desc = exact_search(train, ec);
            break;
        }
        case Method::Smt: {
            std::optional<CardinalityConstraint> k;
            if (task.k) k = CardinalityConstraint(*task.k);
            const auto problem = encode_subgroup_discovery(train, k);
            const auto outcome = run_solver(problem, config_.solver_command, *task.timeout);
            record.solver_status = to_string(outcome.status);
            if (outcome.model) desc = decode_model(outcome, problem, train);
            break;
        }
        }
        record.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (desc) fill_quality(record, *desc, fold);
        return record;
    }

    std::vector<ExperimentRecord> run_alternatives(const Task& task, const FoldData& fold) const {
        AlternativesOptions options;
        options.method = task.method == Method::Beam  ? AlternativeMethod::Beam
                         : task.method == Method::Smt ? AlternativeMethod::Smt
                                                      : AlternativeMethod::Exact;
        options.a = config_.a;
        options.tau_abs = *task.tau;
        options.k = task.k;
        options.beam = config_.beam;
        options.beam.update_rule = UpdateRule::BeamUpdate;
        options.exact.candidate_cap = config_.exact_candidate_cap;
        options.solver_command = config_.solver_command;
        if (task.timeout) options.solver_timeout_s = *task.timeout;

        const auto entries = find_alternatives(fold.train, options);
        const auto& original = entries.front().description;
        const auto original_train = membership(original, fold.train);
        const auto original_test = membership(original, fold.test);

        std::vector<ExperimentRecord> records;
        for (std::size_t index = 0; index < entries.size(); ++index) {
            const auto& entry = entries[index];
            auto record = base_record(task);
            record.alternative_index = index;
            fill_quality(record, entry.description, fold);
            const auto test_b = membership(entry.description, fold.test);
            record.train_hamming = hamming_similarity(entry.evaluation.membership, original_train);
            record.test_hamming = hamming_similarity(test_b, original_test);
            record.train_jaccard = jaccard_similarity(entry.evaluation.membership, original_train);
            record.test_jaccard = jaccard_similarity(test_b, original_test);
            record.runtime_s = entry.runtime_s;
            if (entry.solver_status) record.solver_status = to_string(*entry.solver_status);
            record.degenerate = entry.degenerate;
            records.push_back(std::move(record));
        }
        return records;
    }

    const ExperimentConfig& config_;
    const std::vector<NamedDataset>& datasets_;
    std::vector<std::vector<FoldData>> folds_;
};

auto sort_key(const ExperimentRecord& r) {
    return std::make_tuple(r.dataset, r.fold, parse_method(r.method), r.k, r.tau_abs, r.timeout_s,
                           r.alternative_index);
}

} // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_experiment(config, load_datasets(config));
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const std::vector<NamedDataset>& datasets) {
    config.validate(false);
    if (datasets.empty()) throw std::invalid_argument("experiment config: no datasets given");
    const Runner runner(config, datasets);
    const auto tasks = plan(config, datasets.size());

    std::vector<std::vector<ExperimentRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) results[t] = runner.run(tasks[t]);
    };
    const std::size_t workers = std::min(config.parallelism, tasks.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<ExperimentRecord> records;
    for (auto& batch : results) {
        for (auto& r : batch) records.push_back(std::move(r));
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
    return records;
}

std::vector<ExperimentRecord> without_runtime(std::vector<ExperimentRecord> records) {
    for (auto& r : records) r.runtime_s.reset();
    return records;
}

} // namespace csd
