#include "csd/constraints.hpp"

#include "csd/quality.hpp"
#include "csd/subgroup.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace csd {

CardinalityConstraint::CardinalityConstraint(std::size_t max_features) : k(max_features) {
    if (k < 1) throw std::invalid_argument("cardinality threshold k must be at least 1");
}

AlternativesContext::AlternativesContext(std::size_t tau_abs) : tau_abs_(tau_abs) {
    if (tau_abs_ < 1) throw std::invalid_argument("dissimilarity threshold tau_abs must be at least 1");
}

void AlternativesContext::add(BitVector membership, BitVector selection) {
    if (!existing_.empty() && (membership.size() != existing_[0].membership.size() ||
                               selection.size() != existing_[0].selection.size())) {
        throw std::invalid_argument("existing subgroups must share dimensions");
    }
    const std::size_t k = count_ones(selection);
    existing_.push_back({std::move(membership), std::move(selection), k});
}

std::size_t AlternativesContext::reuse_budget(std::size_t l) const {
    const std::size_t k = existing_.at(l).selected_count;
    return k - std::min(tau_abs_, k);
}

std::vector<std::size_t> permissible_for_cardinality(std::span<const std::uint8_t> current_selection,
                                                     const CardinalityConstraint& constraint) {
    const std::size_t selected = count_ones(current_selection);
    if (selected > constraint.k) {
        throw std::logic_error("selection with " + std::to_string(selected) +
                               " features already exceeds k = " + std::to_string(constraint.k));
    }
    std::vector<std::size_t> result;
    for (std::size_t j = 0; j < current_selection.size(); ++j) {
        if (selected < constraint.k || current_selection[j]) result.push_back(j);
    }
    return result;
}

namespace {

std::size_t reused(std::span<const std::uint8_t> selection, const ExistingSubgroup& old) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < selection.size(); ++j) count += (selection[j] && old.selection[j]) ? 1 : 0;
    return count;
}

} // namespace

std::vector<std::size_t> permissible_for_alternatives(
    std::span<const std::uint8_t> current_selection, const AlternativesContext& context,
    const std::optional<CardinalityConstraint>& cardinality) {
    if (!context.empty() && current_selection.size() != context.features()) {
        throw std::invalid_argument("selection length does not match the alternatives context");
    }
    // per existing subgroup: how many more of its features may still be picked
    std::vector<std::size_t> headroom;
    for (std::size_t l = 0; l < context.existing().size(); ++l) {
        const std::size_t used = reused(current_selection, context.existing()[l]);
        const std::size_t budget = context.reuse_budget(l);
        if (used > budget) {
            throw std::logic_error("current selection already violates the dissimilarity constraint");
        }
        headroom.push_back(budget - used);
    }

    std::vector<std::size_t> candidates;
    if (cardinality) {
        candidates = permissible_for_cardinality(current_selection, *cardinality);
    } else {
        candidates.resize(current_selection.size());
        std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    }

    std::vector<std::size_t> result;
    for (auto j : candidates) {
        bool ok = true;
        if (!current_selection[j]) {
            for (std::size_t l = 0; l < context.existing().size() && ok; ++l) {
                if (context.existing()[l].selection[j] && headroom[l] == 0) ok = false;
            }
        }
        if (ok) result.push_back(j);
    }
    return result;
}

bool check_dissimilarity(std::span<const std::uint8_t> candidate_selection,
                         const AlternativesContext& context) {
    for (const auto& old : context.existing()) {
        if (old.selection.size() != candidate_selection.size()) {
            throw std::invalid_argument("selection length does not match the alternatives context");
        }
        if (deselection_dissimilarity(candidate_selection, old.selection) <
            std::min(context.tau_abs(), old.selected_count)) {
            return false;
        }
    }
    return true;
}

PermissibleFeatures PermissibleFeatures::cardinality(CardinalityConstraint constraint) {
    PermissibleFeatures hook;
    hook.cardinality_ = constraint;
    return hook;
}

PermissibleFeatures PermissibleFeatures::alternatives(AlternativesContext context,
                                                      std::optional<CardinalityConstraint> cardinality) {
    PermissibleFeatures hook;
    hook.cardinality_ = cardinality;
    hook.alternatives_ = std::make_shared<const AlternativesContext>(std::move(context));
    return hook;
}

PermissibleFeatures PermissibleFeatures::custom(Function fn) {
    PermissibleFeatures hook;
    hook.custom_ = std::move(fn);
    return hook;
}

std::vector<std::size_t> PermissibleFeatures::operator()(std::span<const std::uint8_t> selection) const {
    if (custom_) {
        auto result = custom_(selection);
        for (auto j : result) {
            if (j >= selection.size()) throw std::out_of_range("hook returned an invalid feature index");
        }
        return result;
    }
    if (alternatives_) return permissible_for_alternatives(selection, *alternatives_, cardinality_);
    if (cardinality_) return permissible_for_cardinality(selection, *cardinality_);
    std::vector<std::size_t> all(selection.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
}

bool PermissibleFeatures::admits(std::span<const std::uint8_t> selection) const {
    if (cardinality_ && count_ones(selection) > cardinality_->k) return false;
    if (alternatives_ && !check_dissimilarity(selection, *alternatives_)) return false;
    return true;
}

} // namespace csd
