#include "csd/detail/feature_scan.hpp"

#include <algorithm>

namespace csd::detail {

FeatureScan::FeatureScan(const Dataset& dataset, const SubgroupDescription& box,
                         std::size_t feature, std::span<const std::uint8_t> marks)
    : feature_(feature), total_(dataset.rows()), marked_total_(0),
      unique_(&dataset.unique_values(feature)) {
    const std::size_t u = unique_->size();
    std::vector<std::size_t> cnt(u, 0);
    std::vector<std::size_t> marked(u, 0);
    for (auto mark : marks) marked_total_ += mark ? 1 : 0;

    auto ranks = dataset.value_ranks(feature);
    for (std::size_t i = 0; i < dataset.rows(); ++i) {
        bool inside = !box.is_sentinel();
        for (std::size_t j = 0; j < dataset.cols() && inside; ++j) {
            if (j == feature) continue;
            const double x = dataset.at(i, j);
            inside = box.lower(j).as_double() <= x && x <= box.upper(j).as_double();
        }
        if (!inside) continue;
        ++cnt[ranks[i]];
        marked[ranks[i]] += marks[i] ? 1 : 0;
    }

    cnt_prefix_.assign(u + 1, 0);
    marked_prefix_.assign(u + 1, 0);
    for (std::size_t r = 0; r < u; ++r) {
        cnt_prefix_[r + 1] = cnt_prefix_[r] + cnt[r];
        marked_prefix_[r + 1] = marked_prefix_[r] + marked[r];
    }

    if (box.is_sentinel()) return;
    const double lo = box.lower(feature).as_double();
    const double hi = box.upper(feature).as_double();
    auto first = std::lower_bound(unique_->begin(), unique_->end(), lo);
    auto last = std::upper_bound(unique_->begin(), unique_->end(), hi);
    if (first >= last) return;
    lower_rank_ = static_cast<std::size_t>(first - unique_->begin());
    upper_rank_ = static_cast<std::size_t>(last - unique_->begin()) - 1;
    for (std::size_t r = *lower_rank_; r <= *upper_rank_; ++r) {
        if (cnt[r] > 0) member_ranks_.push_back(r);
    }
}

MembershipCounts FeatureScan::counts(std::size_t lo, std::size_t hi) const {
    MembershipCounts c;
    c.total = total_;
    c.marked_total = marked_total_;
    if (lo > hi) return c;
    c.members = cnt_prefix_[hi + 1] - cnt_prefix_[lo];
    c.marked = marked_prefix_[hi + 1] - marked_prefix_[lo];
    return c;
}

MembershipCounts FeatureScan::current_counts() const {
    if (!lower_rank_) return counts(1, 0);
    return counts(*lower_rank_, *upper_rank_);
}

} // namespace csd::detail
