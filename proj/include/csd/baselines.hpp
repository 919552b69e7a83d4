#pragma once

#include "csd/constraints.hpp"
#include "csd/dataset.hpp"
#include "csd/heuristic_search.hpp"
#include "csd/quality.hpp"
#include "csd/subgroup.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace csd {

struct RandomConfig {
    std::size_t n_iters = 1000;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Minimal optimal-recall box: per permissible feature, the extreme values over the positives.
///
/// A cardinality hook switches to the k features with the fewest false
/// positives (see mors_rank_features). Alternatives hooks are rejected.
SubgroupDescription mors_search(const Dataset& dataset, const PermissibleFeatures& hook = {});

/// Indices (ascending) of the k features whose single-feature MORS interval
/// admits the fewest negatives; ties go to the lower index.
std::vector<std::size_t> mors_rank_features(const Dataset& dataset, std::size_t k);

/// Samples n_iters random boxes on the unique-value grid and keeps the best.
///
/// With a hook, features are visited in a random order per iteration and only
/// those still permissible given the features sampled so far receive bounds.
SubgroupDescription random_search(const Dataset& dataset, const QualityFunction& quality,
                                  const RandomConfig& config, const PermissibleFeatures& hook = {},
                                  const SearchObserver* observer = nullptr);

} // namespace csd
