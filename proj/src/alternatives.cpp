#include "csd/alternatives.hpp"

#include "csd/quality.hpp"

#include <chrono>
#include <stdexcept>

namespace csd {

void AlternativesOptions::validate() const {
    if (a < 1) throw std::invalid_argument("number of alternatives a must be at least 1");
    if (tau_abs < 1) throw std::invalid_argument("dissimilarity threshold tau_abs must be at least 1");
    if (k && *k < 1) throw std::invalid_argument("cardinality threshold k must be at least 1");
    beam.validate();
    if (!(solver_timeout_s > 0.0)) throw std::invalid_argument("solver timeout must be positive");
}

namespace {

struct StepResult {
    SubgroupDescription description;
    std::optional<SolverStatus> status;
};

std::optional<CardinalityConstraint> cardinality_of(const AlternativesOptions& options) {
    if (!options.k) return std::nullopt;
    return CardinalityConstraint(*options.k);
}

StepResult solve(const SmtProblem& problem, const Dataset& dataset, const AlternativesOptions& options) {
    auto outcome = run_solver(problem, options.solver_command, options.solver_timeout_s);
    if (!outcome.model) {
        throw SolverError("solver returned no model (status " + to_string(outcome.status) + ")");
    }
    return {decode_model(outcome, problem, dataset), outcome.status};
}

StepResult original_step(const Dataset& dataset, const AlternativesOptions& options) {
    const auto k = cardinality_of(options);
    switch (options.method) {
    case AlternativeMethod::Beam: {
        auto hook = k ? PermissibleFeatures::cardinality(*k) : PermissibleFeatures{};
        return {beam_search(dataset, QualityFunction::wracc(), options.beam, hook), std::nullopt};
    }
    case AlternativeMethod::Exact: {
        ExactConfig config = options.exact;
        config.k = options.k;
        config.objective = QualityFunction::wracc();
        return {exact_search(dataset, config), std::nullopt};
    }
    case AlternativeMethod::Smt:
        return solve(encode_subgroup_discovery(dataset, k), dataset, options);
    }
    throw std::logic_error("unknown alternatives method");
}

StepResult alternative_step(const Dataset& dataset, const AlternativesContext& context,
                            const AlternativesOptions& options) {
    const auto k = cardinality_of(options);
    switch (options.method) {
    case AlternativeMethod::Beam: {
        auto objective = QualityFunction::hamming_to(context.original().membership);
        return {beam_search(dataset, objective, options.beam, PermissibleFeatures::alternatives(context, k)),
                std::nullopt};
    }
    case AlternativeMethod::Exact: {
        ExactConfig config = options.exact;
        config.k = options.k;
        return {exact_alternative(dataset, context, config), std::nullopt};
    }
    case AlternativeMethod::Smt:
        return solve(encode_alternative(dataset, context, k), dataset, options);
    }
    throw std::logic_error("unknown alternatives method");
}

} // namespace

std::vector<AlternativeEntry> find_alternatives(const Dataset& dataset, const AlternativesOptions& options) {
    options.validate();
    std::vector<AlternativeEntry> entries;
    AlternativesContext context(options.tau_abs);

    for (std::size_t index = 0; index <= options.a; ++index) {
        const auto start = std::chrono::steady_clock::now();
        auto step = index == 0 ? original_step(dataset, options) : alternative_step(dataset, context, options);
        const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        auto evaluation = evaluate(step.description, dataset);
        if (options.k && count_ones(evaluation.selection) > *options.k) {
            throw std::logic_error("searcher returned a description violating the cardinality constraint");
        }
        if (index > 0 && !check_dissimilarity(evaluation.selection, context)) {
            throw std::logic_error("searcher returned a description violating the dissimilarity constraint");
        }

        AlternativeEntry entry{step.description, evaluation, 0.0, 1.0, 1.0, false, 0.0, std::nullopt};
        entry.runtime_s = runtime;
        entry.solver_status = step.status;
        if (index == 0) {
            entry.quality = wracc(evaluation.membership, dataset.target());
        } else {
            const auto& original = entries.front().evaluation.membership;
            entry.hamming_to_original = hamming_similarity(evaluation.membership, original);
            entry.jaccard_to_original = jaccard_similarity(evaluation.membership, original);
            entry.quality = entry.hamming_to_original;
        }
        context.add(evaluation.membership, evaluation.selection);
        entries.push_back(std::move(entry));
    }

    const bool degenerate = entries.front().evaluation.selection.empty() ||
                            count_ones(entries.front().evaluation.selection) == 0;
    for (auto& e : entries) e.degenerate = degenerate;
    return entries;
}

} // namespace csd
