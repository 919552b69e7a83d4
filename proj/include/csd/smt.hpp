#pragma once

#include "csd/constraints.hpp"
#include "csd/dataset.hpp"
#include "csd/subgroup.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace csd {

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SolverNotFound : public SolverError {
  public:
    using SolverError::SolverError;
};

/// Solver output that could not be interpreted; what() includes the raw text.
class SolverOutputError : public SolverError {
  public:
    SolverOutputError(const std::string& reason, std::string output);
    const std::string& output() const { return output_; }

  private:
    std::string output_;
};

struct SmtVariable {
    enum class Role { Lower, Upper, Member, Selected, SelectedLower, SelectedUpper };
    Role role;
    std::size_t index; // feature j, or data object i for Member
};

enum class SmtObjective { WRAcc, Hamming };

struct SmtProblem {
    std::string text;
    std::map<std::string, SmtVariable> variable_map;
    SmtObjective objective_kind = SmtObjective::WRAcc;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool has_selection = false;
    /// Objective as sum_i objective_weights[i] * b_i + objective_offset.
    std::vector<long long> objective_weights;
    long long objective_offset = 0;

    static std::string lower_name(std::size_t j) { return "lb_" + std::to_string(j); }
    static std::string upper_name(std::size_t j) { return "ub_" + std::to_string(j); }
    static std::string member_name(std::size_t i) { return "b_" + std::to_string(i); }
    static std::string selected_name(std::size_t j) { return "s_" + std::to_string(j); }
    static std::string selected_lower_name(std::size_t j) { return "slb_" + std::to_string(j); }
    static std::string selected_upper_name(std::size_t j) { return "sub_" + std::to_string(j); }
};

enum class SolverStatus { Optimal, TimeoutWithModel, TimeoutNoModel, Error };

std::string to_string(SolverStatus status);

using ModelValue = std::variant<bool, double>;

struct SolverOutcome {
    SolverStatus status = SolverStatus::Error;
    std::optional<std::map<std::string, ModelValue>> model;
    /// Scaled objective of the model (m^2 * WRAcc, or m * Hamming similarity),
    /// recomputed from its membership; without a model, the value the solver reported.
    std::optional<double> objective_value;
    std::optional<double> reported_objective; // as printed by the solver, if at all
    double wall_time = 0.0;
    std::string raw_output;
};

/// Decimal literal in fixed notation as the solver-input format expects, e.g. "2.0" or "(- 0.5)".
std::string smt_decimal(double value);

SmtProblem encode_subgroup_discovery(const Dataset& dataset,
                                     std::optional<CardinalityConstraint> k = std::nullopt);

SmtProblem encode_alternative(const Dataset& dataset, const AlternativesContext& context,
                              std::optional<CardinalityConstraint> k = std::nullopt);

inline constexpr const char* kDefaultSolverCommand = "z3 -smt2 -t:{timeout_ms} {file}";

/// Writes the problem to a temporary file and runs `solver_command` on it.
///
/// The command is split on whitespace; the placeholders `{file}`,
/// `{timeout_ms}` and `{timeout_s}` are substituted. Without `{file}` the
/// path is appended as the last argument. The process is killed if it
/// overruns the timeout by more than a grace period.
SolverOutcome run_solver(const SmtProblem& problem, const std::string& solver_command,
                         double timeout_s);

/// Interprets solver output text (exposed for testing the parser without a solver).
SolverOutcome parse_solver_output(const SmtProblem& problem, const std::string& output);

/// Rebuilds the description from the model's membership variables.
///
/// A feature keeps a lower bound only where the solver placed lb_j above the
/// column minimum (likewise for ub_j), so the decoded selection never exceeds
/// the solver's; kept bounds snap to the members' extremes.
SubgroupDescription decode_model(const SolverOutcome& outcome, const SmtProblem& problem,
                                 const Dataset& dataset);

/// Membership vector stored in the model.
BitVector model_membership(const SolverOutcome& outcome, const SmtProblem& problem);

/// True if an optimizing solver is reachable as `z3` on PATH.
bool default_solver_available();

} // namespace csd
