#include "csd/heuristic_search.hpp"

#include "csd/detail/feature_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace csd {

using detail::FeatureScan;

namespace {

constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

void require_dims(const Dataset& dataset, const QualityFunction& quality) {
    quality.check(dataset);
}

void notify(const SearchObserver* observer, const SubgroupDescription& box, double q) {
    if (observer && observer->on_candidate) observer->on_candidate(box, q);
}

bool wants_candidates(const SearchObserver* observer) {
    return observer && observer->on_candidate;
}

// Nearest-rank position ceil(alpha * count), clamped to [1, count].
std::size_t peel_rank(double alpha, std::size_t count) {
    auto q = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(count) - 1e-9));
    return std::clamp<std::size_t>(q, 1, count);
}

} // namespace

void PrimConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("PRIM alpha must lie in (0, 1)");
    if (!(beta0 >= 0.0 && beta0 <= 1.0)) throw std::invalid_argument("PRIM beta0 must lie in [0, 1]");
}

void BeamConfig::validate() const {
    if (width < 1) throw std::invalid_argument("beam width must be at least 1");
}

SubgroupDescription prim_search(const Dataset& dataset, const QualityFunction& quality,
                                const PrimConfig& config, const PermissibleFeatures& hook,
                                const SearchObserver* observer) {
    config.validate();
    require_dims(dataset, quality);
    const auto marks = quality.marks(dataset);
    const double m = static_cast<double>(dataset.rows());

    auto opt = SubgroupDescription::unrestricted(dataset.cols());
    auto peel = opt;
    auto peel_counts = count_membership(membership(peel, dataset), marks);
    double q_opt = quality.from_counts(peel_counts);

    std::size_t iteration = 0;
    while (static_cast<double>(peel_counts.members) / m > config.beta0 && peel_counts.members > 0) {
        double q_cand = kMinusInfinity;
        std::optional<SubgroupDescription> cand;
        MembershipCounts cand_counts;

        for (auto j : hook(selected_features(peel, dataset))) {
            FeatureScan scan(dataset, peel, j, marks);
            const auto& ranks = scan.member_ranks();
            if (ranks.size() < 2) continue; // peeling j would empty the box

            const std::size_t q = peel_rank(config.alpha, peel_counts.members);

            // lower bound: drop every member at or below the alpha-quantile value
            std::size_t seen = 0;
            std::size_t t = 0;
            for (; t < ranks.size(); ++t) {
                seen += scan.rows_at(ranks[t]);
                if (seen >= q) break;
            }
            if (t + 1 < ranks.size()) {
                auto box = peel.with_interval(j, Bound::finite(scan.value(ranks[t + 1])), peel.upper(j));
                auto c = scan.counts(ranks[t + 1], *scan.upper_rank());
                const double value = quality.from_counts(c);
                notify(observer, box, value);
                if (value > q_cand) {
                    q_cand = value;
                    cand = std::move(box);
                    cand_counts = c;
                }
            }

            // upper bound: symmetric from the top
            seen = 0;
            std::size_t s = ranks.size();
            while (s-- > 0) {
                seen += scan.rows_at(ranks[s]);
                if (seen >= q) break;
            }
            if (s > 0 && s < ranks.size()) {
                auto box = peel.with_interval(j, peel.lower(j), Bound::finite(scan.value(ranks[s - 1])));
                auto c = scan.counts(*scan.lower_rank(), ranks[s - 1]);
                const double value = quality.from_counts(c);
                notify(observer, box, value);
                if (value > q_cand) {
                    q_cand = value;
                    cand = std::move(box);
                    cand_counts = c;
                }
            }
        }

        if (!cand) break;
        peel = std::move(*cand);
        peel_counts = cand_counts;
        if (q_cand > q_opt) {
            q_opt = q_cand;
            opt = peel;
        }
        ++iteration;
        if (observer && observer->on_iteration) observer->on_iteration(iteration, q_opt);
    }
    return postprocess_bounds(opt, dataset);
}

BeamState::BeamState(const Dataset& dataset, const QualityFunction& quality, std::size_t width) {
    auto start = SubgroupDescription::unrestricted(dataset.cols());
    const double q = quality.evaluate(membership(start, dataset), dataset);
    beam.assign(width, start);
    candidates.assign(width, Slot{start, q, true});
}

std::size_t BeamState::worst_slot() const {
    std::size_t worst = 0;
    for (std::size_t l = 1; l < candidates.size(); ++l) {
        if (candidates[l].quality < candidates[worst].quality) worst = l;
    }
    return worst;
}

std::size_t BeamState::best_slot() const {
    std::size_t best = 0;
    for (std::size_t l = 1; l < candidates.size(); ++l) {
        if (candidates[l].quality > candidates[best].quality) best = l;
    }
    return best;
}

bool BeamState::contains(const SubgroupDescription& box) const {
    for (const auto& slot : candidates) {
        if (slot.box == box) return true;
    }
    return false;
}

bool BeamState::offer(const SubgroupDescription& box, double quality) {
    const std::size_t worst = worst_slot();
    if (!(quality > candidates[worst].quality) || contains(box)) return false;
    candidates[worst] = Slot{box, quality, true};
    return true;
}

void beam_update(BeamState& state, std::size_t slot, std::size_t feature, const Dataset& dataset,
                 const QualityFunction& quality, const SearchObserver* observer) {
    const SubgroupDescription box = state.beam.at(slot);
    FeatureScan scan(dataset, box, feature, quality.marks(dataset));
    if (scan.member_ranks().empty()) return;

    for (auto r : scan.member_ranks()) {
        auto cand = box.with_interval(feature, Bound::finite(scan.value(r)), box.upper(feature));
        const double q = quality.from_counts(scan.counts(r, *scan.upper_rank()));
        notify(observer, cand, q);
        state.offer(cand, q);
    }
    for (auto r : scan.member_ranks()) {
        auto cand = box.with_interval(feature, box.lower(feature), Bound::finite(scan.value(r)));
        const double q = quality.from_counts(scan.counts(*scan.lower_rank(), r));
        notify(observer, cand, q);
        state.offer(cand, q);
    }
}

void best_interval_update(BeamState& state, std::size_t slot, std::size_t feature,
                          const Dataset& dataset, const QualityFunction& quality,
                          const SearchObserver* observer) {
    if (quality.kind() != QualityKind::WRAcc) {
        throw std::invalid_argument("Best Interval update requires WRAcc as the quality function");
    }
    const SubgroupDescription box = state.beam.at(slot);
    FeatureScan scan(dataset, box, feature, quality.marks(dataset));
    if (scan.member_ranks().empty()) return;

    const std::size_t upper = *scan.upper_rank();
    double q_opt = quality.from_counts(scan.current_counts());
    std::optional<std::pair<std::size_t, std::size_t>> opt; // ranks (lb, ub); unset = unchanged box
    double q_temp = kMinusInfinity;
    std::size_t lb_temp = 0;
    bool have_temp = false;

    for (auto r : scan.member_ranks()) {
        const double q_lower = quality.from_counts(scan.counts(r, upper));
        if (wants_candidates(observer)) {
            notify(observer, box.with_interval(feature, Bound::finite(scan.value(r)), box.upper(feature)),
                   q_lower);
        }
        if (q_lower > q_temp) {
            lb_temp = r;
            q_temp = q_lower;
            have_temp = true;
        }
        if (!have_temp) continue;
        const double q_pair = quality.from_counts(scan.counts(lb_temp, r));
        if (wants_candidates(observer)) {
            notify(observer,
                   box.with_interval(feature, Bound::finite(scan.value(lb_temp)),
                                     Bound::finite(scan.value(r))),
                   q_pair);
        }
        if (q_pair > q_opt) {
            opt = std::make_pair(lb_temp, r);
            q_opt = q_pair;
        }
    }

    const SubgroupDescription best =
        opt ? box.with_interval(feature, Bound::finite(scan.value(opt->first)),
                                Bound::finite(scan.value(opt->second)))
            : box;
    state.offer(best, q_opt);
}

SubgroupDescription beam_search(const Dataset& dataset, const QualityFunction& quality,
                                const BeamConfig& config, const PermissibleFeatures& hook,
                                const SearchObserver* observer) {
    config.validate();
    require_dims(dataset, quality);
    BeamState state(dataset, quality, config.width);

    std::size_t iteration = 0;
    while (true) {
        std::vector<std::size_t> changed;
        for (std::size_t l = 0; l < state.candidates.size(); ++l) {
            if (state.candidates[l].changed) changed.push_back(l);
        }
        if (changed.empty()) break;

        for (std::size_t l = 0; l < state.candidates.size(); ++l) {
            state.beam[l] = state.candidates[l].box;
            state.candidates[l].changed = false;
        }
        for (auto l : changed) {
            for (auto j : hook(selected_features(state.beam[l], dataset))) {
                if (config.update_rule == UpdateRule::BeamUpdate) {
                    beam_update(state, l, j, dataset, quality, observer);
                } else {
                    best_interval_update(state, l, j, dataset, quality, observer);
                }
            }
        }
        ++iteration;
        if (observer && observer->on_iteration) {
            observer->on_iteration(iteration, state.candidates[state.best_slot()].quality);
        }
    }
    return postprocess_bounds(state.candidates[state.best_slot()].box, dataset);
}

} // namespace csd
