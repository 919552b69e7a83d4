#include "csd/alternatives.hpp"
#include "csd/baselines.hpp"
#include "csd/exact_search.hpp"
#include "csd/experiment.hpp"
#include "csd/heuristic_search.hpp"
#include "csd/quality.hpp"
#include "csd/report.hpp"
#include "csd/smt.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace csd;
using nlohmann::ordered_json;

namespace {

struct CommonOptions {
    std::string dataset;
    std::string target = "target";
    std::optional<std::size_t> k;
    std::string solver_cmd = kDefaultSolverCommand;
    double solver_timeout_s = 60.0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--dataset", o.dataset, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    cmd->add_option("--target", o.target, "Name of the binary target column");
    cmd->add_option("--k", o.k, "Maximum number of selected features")->check(CLI::PositiveNumber);
}

void add_solver(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--solver-cmd", o.solver_cmd,
                    "Solver invocation; {file}, {timeout_ms} and {timeout_s} are substituted");
    cmd->add_option("--solver-timeout-s", o.solver_timeout_s, "Solver timeout in seconds")
        ->check(CLI::PositiveNumber);
}

ordered_json description_json(const SubgroupDescription& desc, const Dataset& data) {
    auto parsed = ordered_json::parse(to_json(desc));
    ordered_json out;
    out["lb"] = parsed["lb"];
    out["ub"] = parsed["ub"];
    ordered_json names = ordered_json::array();
    const auto sel = selected_features(desc, data);
    for (std::size_t j = 0; j < sel.size(); ++j) {
        if (sel[j]) names.push_back(data.feature_names()[j]);
    }
    out["selected_features"] = names;
    return out;
}

ordered_json metrics_json(const SubgroupDescription& desc, const Dataset& data) {
    const auto eval = evaluate(desc, data);
    ordered_json out;
    out["members"] = eval.members;
    out["positive_members"] = eval.positive_members;
    out["wracc"] = wracc(eval.membership, data.target());
    out["nwracc"] = nwracc(eval.membership, data.target());
    out["selected_feature_count"] = count_ones(eval.selection);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained subgroup discovery on numeric tabular data"};
    app.require_subcommand(1);

    // discover
    CommonOptions disc;
    std::string method = "BEAM";
    std::uint64_t seed = 0;
    PrimConfig prim;
    std::size_t width = 10;
    std::size_t iters = 1000;
    std::uint64_t cap = 10'000'000;
    std::string smt_out;
    auto* discover = app.add_subcommand("discover", "Run one subgroup search and print the result as JSON");
    add_common(discover, disc);
    add_solver(discover, disc);
    discover->add_option("--method", method, "PRIM, BEAM, BEST_INTERVAL, MORS, RANDOM, EXACT or SMT");
    discover->add_option("--seed", seed, "Seed for RANDOM");
    discover->add_option("--alpha", prim.alpha, "PRIM peeling fraction");
    discover->add_option("--beta0", prim.beta0, "PRIM minimum support");
    discover->add_option("--width", width, "Beam width")->check(CLI::PositiveNumber);
    discover->add_option("--iters", iters, "RANDOM iterations")->check(CLI::PositiveNumber);
    discover->add_option("--cap", cap, "EXACT candidate cap")->check(CLI::PositiveNumber);
    discover->add_option("--smt-out", smt_out, "Also write the SMT problem (SMT method) to this file");

    // alternatives
    CommonOptions alt;
    std::string alt_method = "EXACT";
    std::size_t a = 1, tau = 1, alt_width = 10;
    std::uint64_t alt_cap = 10'000'000;
    auto* alternatives = app.add_subcommand("alternatives", "Find an original subgroup and its alternatives");
    add_common(alternatives, alt);
    add_solver(alternatives, alt);
    alternatives->add_option("--method", alt_method, "BEAM, SMT or EXACT");
    alternatives->add_option("--a", a, "Number of alternatives")->check(CLI::PositiveNumber);
    alternatives->add_option("--tau", tau, "Dissimilarity threshold tau_abs")->check(CLI::PositiveNumber);
    alternatives->add_option("--width", alt_width, "Beam width")->check(CLI::PositiveNumber);
    alternatives->add_option("--cap", alt_cap, "EXACT candidate cap")->check(CLI::PositiveNumber);

    // encode-smt
    CommonOptions enc;
    std::string enc_out;
    auto* encode = app.add_subcommand("encode-smt", "Write the SMT optimization problem for a dataset");
    add_common(encode, enc);
    encode->add_option("--smt-out", enc_out, "Output file (standard output if omitted)");

    // experiment
    std::string config_path, out_path, format;
    bool omit_runtime = false;
    std::optional<std::size_t> parallelism;
    auto* experiment = app.add_subcommand("experiment", "Run an experiment grid from a JSON configuration");
    experiment->add_option("--config", config_path, "Experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    experiment->add_option("--out", out_path, "Results file")->required();
    experiment->add_option("--format", format, "csv or json (default: from the file extension)");
    experiment->add_flag("--omit-runtime", omit_runtime, "Leave runtimes empty for byte-comparable output");
    experiment->add_option("--parallelism", parallelism, "Worker threads (overrides the config)")
        ->check(CLI::PositiveNumber);

    // report
    std::string report_in, report_out, report_format = "csv";
    auto* report = app.add_subcommand("report", "Aggregate results: mean and median per method and parameters");
    report->add_option("--in", report_in, "Results file written by 'experiment'")->required()->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "Summary file (standard output if omitted)");
    report->add_option("--format", report_format, "csv or json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*discover) {
            const auto data = load_csv(disc.dataset, disc.target);
            const auto m = parse_method(method);
            const auto quality = QualityFunction::wracc();
            const auto hook = disc.k ? PermissibleFeatures::cardinality(CardinalityConstraint(*disc.k))
                                     : PermissibleFeatures{};
            ordered_json out;
            out["method"] = to_string(m);
            const auto start = std::chrono::steady_clock::now();
            std::optional<SubgroupDescription> desc;
            switch (m) {
            case Method::Prim: desc = prim_search(data, quality, prim, hook); break;
            case Method::Beam: desc = beam_search(data, quality, {width, UpdateRule::BeamUpdate}, hook); break;
            case Method::BestInterval:
                desc = beam_search(data, quality, {width, UpdateRule::BestInterval}, hook);
                break;
            case Method::Mors: desc = mors_search(data, hook); break;
            case Method::Random: desc = random_search(data, quality, {iters, seed}, hook); break;
            case Method::Exact: {
                ExactConfig config;
                config.k = disc.k;
                config.candidate_cap = cap;
                desc = exact_search(data, config);
                break;
            }
            case Method::Smt: {
                std::optional<CardinalityConstraint> k;
                if (disc.k) k = CardinalityConstraint(*disc.k);
                const auto problem = encode_subgroup_discovery(data, k);
                if (!smt_out.empty()) write_text(smt_out, problem.text);
                const auto outcome = run_solver(problem, disc.solver_cmd, disc.solver_timeout_s);
                out["solver_status"] = to_string(outcome.status);
                if (!outcome.model) throw SolverError("solver returned no model");
                desc = decode_model(outcome, problem, data);
                break;
            }
            }
            out["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            out["description"] = description_json(*desc, data);
            out["train"] = metrics_json(*desc, data);
            std::cout << out.dump(2) << "\n";
        } else if (*alternatives) {
            const auto data = load_csv(alt.dataset, alt.target);
            AlternativesOptions options;
            const auto m = parse_method(alt_method);
            if (m == Method::Beam) {
                options.method = AlternativeMethod::Beam;
            } else if (m == Method::Smt) {
                options.method = AlternativeMethod::Smt;
            } else if (m == Method::Exact) {
                options.method = AlternativeMethod::Exact;
            } else {
                throw std::invalid_argument("alternatives support BEAM, SMT and EXACT only");
            }
            options.a = a;
            options.tau_abs = tau;
            options.k = alt.k;
            options.beam.width = alt_width;
            options.exact.candidate_cap = alt_cap;
            options.solver_command = alt.solver_cmd;
            options.solver_timeout_s = alt.solver_timeout_s;
            ordered_json out = ordered_json::array();
            const auto entries = find_alternatives(data, options);
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const auto& e = entries[i];
                ordered_json item;
                item["alternative_index"] = i;
                item["description"] = description_json(e.description, data);
                item["train"] = metrics_json(e.description, data);
                item["hamming_to_original"] = e.hamming_to_original;
                item["jaccard_to_original"] = e.jaccard_to_original;
                item["degenerate"] = e.degenerate;
                item["runtime_s"] = e.runtime_s;
                if (e.solver_status) item["solver_status"] = to_string(*e.solver_status);
                out.push_back(std::move(item));
            }
            std::cout << out.dump(2) << "\n";
        } else if (*encode) {
            const auto data = load_csv(enc.dataset, enc.target);
            std::optional<CardinalityConstraint> k;
            if (enc.k) k = CardinalityConstraint(*enc.k);
            const auto problem = encode_subgroup_discovery(data, k);
            if (enc_out.empty()) {
                std::cout << problem.text;
            } else {
                write_text(enc_out, problem.text);
            }
        } else if (*experiment) {
            auto config = load_experiment_config(config_path);
            if (parallelism) config.parallelism = *parallelism;
            const auto fmt = format.empty() ? report_format_for(out_path) : parse_report_format(format);
            const auto records = run_experiment(config);
            ReportOptions options;
            options.include_runtime = !omit_runtime;
            emit_report(records, fmt, out_path, options);
            std::size_t failed = 0;
            for (const auto& r : records) failed += r.status == "ok" ? 0 : 1;
            std::cerr << records.size() << " records written to " << out_path;
            if (failed) std::cerr << " (" << failed << " failed tasks)";
            std::cerr << "\n";
        } else if (*report) {
            const auto summary = format_summary(aggregate(read_report(report_in)), parse_report_format(report_format));
            if (report_out.empty()) {
                std::cout << summary;
            } else {
                write_text(report_out, summary);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
