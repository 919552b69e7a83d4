#pragma once

#include "csd/constraints.hpp"
#include "csd/dataset.hpp"
#include "csd/exact_search.hpp"
#include "csd/heuristic_search.hpp"
#include "csd/smt.hpp"
#include "csd/subgroup.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace csd {

enum class AlternativeMethod { Beam, Smt, Exact };

struct AlternativesOptions {
    AlternativeMethod method = AlternativeMethod::Exact;
    std::size_t a = 1;
    std::size_t tau_abs = 1;
    std::optional<std::size_t> k;
    BeamConfig beam;
    ExactConfig exact; // its objective is replaced per step
    std::string solver_command = kDefaultSolverCommand;
    double solver_timeout_s = 60.0;

    void validate() const;
};

struct AlternativeEntry {
    SubgroupDescription description;
    SubgroupEvaluation evaluation;
    double quality = 0.0; // WRAcc for the original, Hamming similarity to it afterwards
    double hamming_to_original = 1.0;
    double jaccard_to_original = 1.0;
    /// The original selected no feature, so every constraint was vacuous.
    bool degenerate = false;
    double runtime_s = 0.0;
    std::optional<SolverStatus> solver_status;
};

/// Original subgroup (entry 0) followed by `a` alternatives, each found with
/// all previous entries as existing subgroups.
std::vector<AlternativeEntry> find_alternatives(const Dataset& dataset, const AlternativesOptions& options);

} // namespace csd
