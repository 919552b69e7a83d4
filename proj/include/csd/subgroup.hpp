#pragma once

#include "csd/bound.hpp"
#include "csd/dataset.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace csd {

/// Conjunction of per-feature interval conditions lb_j <= x_j <= ub_j.
///
/// Every feature satisfies lb_j <= ub_j, except the empty-subgroup sentinel
/// (lb = +inf, ub = -inf on all features) which admits no data object.
class SubgroupDescription {
  public:
    SubgroupDescription(std::vector<Bound> lower, std::vector<Bound> upper);

    static SubgroupDescription unrestricted(std::size_t features);
    static SubgroupDescription empty_sentinel(std::size_t features);

    std::size_t size() const { return lower_.size(); }
    const std::vector<Bound>& lower() const { return lower_; }
    const std::vector<Bound>& upper() const { return upper_; }
    const Bound& lower(std::size_t j) const { return lower_[j]; }
    const Bound& upper(std::size_t j) const { return upper_[j]; }

    bool is_sentinel() const;
    bool is_unrestricted() const;

    /// Copy with feature j's interval replaced; the result must be a valid interval.
    SubgroupDescription with_interval(std::size_t j, Bound lower, Bound upper) const;

    bool operator==(const SubgroupDescription&) const = default;

  private:
    std::vector<Bound> lower_;
    std::vector<Bound> upper_;
};

/// Lexicographic order on (lower bounds, then upper bounds).
bool lexicographically_less(const SubgroupDescription& a, const SubgroupDescription& b);

struct SubgroupEvaluation {
    BitVector membership;
    BitVector selection;
    std::size_t members = 0;
    std::size_t positive_members = 0;
};

BitVector membership(const SubgroupDescription& desc, const Dataset& dataset);

/// s_j = 1 iff the bounds of feature j exclude at least one data object.
/// The empty sentinel carries no per-feature condition and selects nothing.
BitVector selected_features(const SubgroupDescription& desc, const Dataset& dataset);

std::size_t count_ones(std::span<const std::uint8_t> bits);

SubgroupEvaluation evaluate(const SubgroupDescription& desc, const Dataset& dataset);

/// Non-excluding finite bounds become infinite; the remaining finite bounds
/// snap to the extreme member values. An empty subgroup yields the sentinel.
SubgroupDescription postprocess_bounds(const SubgroupDescription& desc, const Dataset& dataset);

bool is_perfect(std::span<const std::uint8_t> membership, std::span<const std::uint8_t> target);

/// JSON text {"lb": [...], "ub": [...]} with "-inf"/"+inf" string sentinels.
std::string to_json(const SubgroupDescription& desc);
SubgroupDescription description_from_json(const std::string& text);

} // namespace csd
