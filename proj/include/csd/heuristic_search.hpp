#pragma once

#include "csd/constraints.hpp"
#include "csd/dataset.hpp"
#include "csd/quality.hpp"
#include "csd/subgroup.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace csd {

struct PrimConfig {
    double alpha = 0.05; // peeling fraction in (0, 1)
    double beta0 = 0.0;  // support threshold in [0, 1]

    void validate() const;
};

enum class UpdateRule { BeamUpdate, BestInterval };

struct BeamConfig {
    std::size_t width = 10;
    UpdateRule update_rule = UpdateRule::BeamUpdate;

    void validate() const;
};

/// Optional instrumentation shared by all searchers.
struct SearchObserver {
    /// Every candidate whose quality the searcher evaluates (before post-processing).
    std::function<void(const SubgroupDescription&, double quality)> on_candidate;
    /// After each main-loop iteration, with the best quality seen so far.
    std::function<void(std::size_t iteration, double best_quality)> on_iteration;
};

/// PRIM peeling: repeatedly tightens one bound, each time by the value one
/// alpha-quantile into the current members, and returns the best box seen.
SubgroupDescription prim_search(const Dataset& dataset, const QualityFunction& quality,
                                const PrimConfig& config, const PermissibleFeatures& hook = {},
                                const SearchObserver* observer = nullptr);

/// Generic beam search with either update procedure.
SubgroupDescription beam_search(const Dataset& dataset, const QualityFunction& quality,
                                const BeamConfig& config, const PermissibleFeatures& hook = {},
                                const SearchObserver* observer = nullptr);

/// Beam state the update procedures act on.
struct BeamState {
    struct Slot {
        SubgroupDescription box;
        double quality;
        bool changed;
    };
    std::vector<SubgroupDescription> beam; // snapshot candidates are generated from
    std::vector<Slot> candidates;          // slots being replaced during this iteration

    BeamState(const Dataset& dataset, const QualityFunction& quality, std::size_t width);

    /// First slot holding the minimum quality.
    std::size_t worst_slot() const;
    /// First slot holding the maximum quality.
    std::size_t best_slot() const;
    bool contains(const SubgroupDescription& box) const;
    /// Replaces the worst slot when strictly better and not a duplicate; returns whether it did.
    bool offer(const SubgroupDescription& box, double quality);
};

/// Tries every unique member value of feature j as a new lower bound, then as a new upper bound.
void beam_update(BeamState& state, std::size_t slot, std::size_t feature, const Dataset& dataset,
                 const QualityFunction& quality, const SearchObserver* observer = nullptr);

/// Single ascending pass over the unique member values of feature j that finds the
/// WRAcc-optimal interval on j, offered to the beam as one candidate.
void best_interval_update(BeamState& state, std::size_t slot, std::size_t feature,
                          const Dataset& dataset, const QualityFunction& quality,
                          const SearchObserver* observer = nullptr);

} // namespace csd
