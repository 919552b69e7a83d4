#pragma once

#include "csd/dataset.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace csd {

/// At most `k` selected features.
struct CardinalityConstraint {
    std::size_t k = 1;

    explicit CardinalityConstraint(std::size_t max_features);
};

struct ExistingSubgroup {
    BitVector membership;
    BitVector selection;
    std::size_t selected_count = 0; // k^(l)
};

/// Previously found subgroups (entry 0 is the original) and the
/// dissimilarity threshold alternatives must respect.
class AlternativesContext {
  public:
    explicit AlternativesContext(std::size_t tau_abs);

    void add(BitVector membership, BitVector selection);

    std::size_t tau_abs() const { return tau_abs_; }
    const std::vector<ExistingSubgroup>& existing() const { return existing_; }
    const ExistingSubgroup& original() const { return existing_.at(0); }
    bool empty() const { return existing_.empty(); }
    std::size_t features() const { return existing_.empty() ? 0 : existing_[0].selection.size(); }
    /// How many of subgroup l's features may be selected again: k_l - min(tau, k_l).
    std::size_t reuse_budget(std::size_t l) const;

  private:
    std::size_t tau_abs_;
    std::vector<ExistingSubgroup> existing_;
};

std::vector<std::size_t> permissible_for_cardinality(std::span<const std::uint8_t> current_selection,
                                                     const CardinalityConstraint& constraint);

std::vector<std::size_t> permissible_for_alternatives(
    std::span<const std::uint8_t> current_selection, const AlternativesContext& context,
    const std::optional<CardinalityConstraint>& cardinality);

/// True iff the selection deselects at least min(tau_abs, k_l) features of every existing subgroup.
bool check_dissimilarity(std::span<const std::uint8_t> candidate_selection,
                         const AlternativesContext& context);

/// The get-permissible-feature-indices hook handed to the searchers.
///
/// Given the selection of the candidate being refined, returns the features
/// whose bounds may change without violating the installed constraint.
class PermissibleFeatures {
  public:
    using Function = std::function<std::vector<std::size_t>(std::span<const std::uint8_t>)>;

    /// Unconstrained: every feature is permissible.
    PermissibleFeatures() = default;

    static PermissibleFeatures cardinality(CardinalityConstraint constraint);
    static PermissibleFeatures alternatives(AlternativesContext context,
                                            std::optional<CardinalityConstraint> cardinality = {});
    static PermissibleFeatures custom(Function fn);

    std::vector<std::size_t> operator()(std::span<const std::uint8_t> selection) const;

    /// Whether a complete selection satisfies the installed constraint.
    bool admits(std::span<const std::uint8_t> selection) const;

    const std::optional<CardinalityConstraint>& cardinality_limit() const { return cardinality_; }
    const AlternativesContext* alternatives_context() const { return alternatives_.get(); }
    bool is_custom() const { return static_cast<bool>(custom_); }
    bool is_unconstrained() const { return !cardinality_ && !alternatives_ && !custom_; }

  private:
    std::optional<CardinalityConstraint> cardinality_;
    std::shared_ptr<const AlternativesContext> alternatives_;
    Function custom_;
};

} // namespace csd
