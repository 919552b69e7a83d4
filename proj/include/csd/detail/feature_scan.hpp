#pragma once

#include "csd/dataset.hpp"
#include "csd/quality.hpp"
#include "csd/subgroup.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace csd::detail {

/// Counts for every candidate interval on one feature, with all other
/// features' bounds held fixed.
///
/// Rows satisfying the other features are bucketed by the rank of their
/// value on feature j; prefix sums then give the counts of any rank
/// interval in O(1).
class FeatureScan {
  public:
    FeatureScan(const Dataset& dataset, const SubgroupDescription& box, std::size_t feature,
                std::span<const std::uint8_t> marks);

    std::size_t feature() const { return feature_; }
    /// Value of unique rank r on this feature.
    double value(std::size_t rank) const { return (*unique_)[rank]; }

    /// Counts for the box with feature j restricted to ranks [lo, hi].
    MembershipCounts counts(std::size_t lo, std::size_t hi) const;
    /// Counts for the unchanged box.
    MembershipCounts current_counts() const;

    /// Ascending ranks of the unique feature-j values among current members.
    const std::vector<std::size_t>& member_ranks() const { return member_ranks_; }
    /// Rank range admitted by the current bounds on j, empty if none.
    std::optional<std::size_t> lower_rank() const { return lower_rank_; }
    std::optional<std::size_t> upper_rank() const { return upper_rank_; }
    /// Rows passing the other features' bounds whose feature-j value has rank r.
    std::size_t rows_at(std::size_t rank) const { return cnt_prefix_[rank + 1] - cnt_prefix_[rank]; }

  private:
    std::size_t feature_;
    std::size_t total_;
    std::size_t marked_total_;
    const std::vector<double>* unique_;
    std::vector<std::size_t> cnt_prefix_;
    std::vector<std::size_t> marked_prefix_;
    std::vector<std::size_t> member_ranks_;
    std::optional<std::size_t> lower_rank_;
    std::optional<std::size_t> upper_rank_;
};

} // namespace csd::detail
