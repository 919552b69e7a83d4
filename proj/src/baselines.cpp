#include "csd/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>

namespace csd {

void RandomConfig::validate() const {
    if (n_iters < 1) throw std::invalid_argument("random search needs n_iters >= 1");
}

namespace {

struct PositiveRange {
    double lo;
    double hi;
};

std::vector<PositiveRange> positive_ranges(const Dataset& dataset) {
    if (dataset.positives() == 0) {
        throw DegenerateTargetError("MORS requires at least one positive data object");
    }
    std::vector<PositiveRange> ranges(dataset.cols(),
                                      {std::numeric_limits<double>::infinity(),
                                       -std::numeric_limits<double>::infinity()});
    const auto& y = dataset.target();
    for (std::size_t j = 0; j < dataset.cols(); ++j) {
        auto col = dataset.column(j);
        for (std::size_t i = 0; i < dataset.rows(); ++i) {
            if (!y[i]) continue;
            ranges[j].lo = std::min(ranges[j].lo, col[i]);
            ranges[j].hi = std::max(ranges[j].hi, col[i]);
        }
    }
    return ranges;
}

} // namespace

std::vector<std::size_t> mors_rank_features(const Dataset& dataset, std::size_t k) {
    if (k < 1) throw std::invalid_argument("cardinality threshold k must be at least 1");
    const auto ranges = positive_ranges(dataset);
    const auto& y = dataset.target();

    std::vector<std::pair<std::size_t, std::size_t>> false_positives; // (count, feature)
    for (std::size_t j = 0; j < dataset.cols(); ++j) {
        auto col = dataset.column(j);
        std::size_t count = 0;
        for (std::size_t i = 0; i < dataset.rows(); ++i) {
            if (!y[i] && col[i] >= ranges[j].lo && col[i] <= ranges[j].hi) ++count;
        }
        false_positives.emplace_back(count, j);
    }
    std::sort(false_positives.begin(), false_positives.end());

    std::vector<std::size_t> chosen;
    for (std::size_t r = 0; r < std::min(k, false_positives.size()); ++r) {
        chosen.push_back(false_positives[r].second);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

SubgroupDescription mors_search(const Dataset& dataset, const PermissibleFeatures& hook) {
    std::vector<std::size_t> features;
    if (hook.alternatives_context()) {
        throw std::invalid_argument("MORS does not support alternatives constraints");
    } else if (hook.is_custom()) {
        features = hook(BitVector(dataset.cols(), 0));
    } else if (hook.cardinality_limit()) {
        features = mors_rank_features(dataset, hook.cardinality_limit()->k);
    } else {
        features.resize(dataset.cols());
        std::iota(features.begin(), features.end(), std::size_t{0});
    }

    const auto ranges = positive_ranges(dataset);
    auto box = SubgroupDescription::unrestricted(dataset.cols());
    for (auto j : features) {
        box = box.with_interval(j, Bound::finite(ranges[j].lo), Bound::finite(ranges[j].hi));
    }
    return postprocess_bounds(box, dataset);
}

SubgroupDescription random_search(const Dataset& dataset, const QualityFunction& quality,
                                  const RandomConfig& config, const PermissibleFeatures& hook,
                                  const SearchObserver* observer) {
    config.validate();
    quality.check(dataset);
    const std::size_t n = dataset.cols();
    std::mt19937_64 rng(config.seed);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::optional<SubgroupDescription> best;
    double best_quality = -std::numeric_limits<double>::infinity();

    for (std::size_t it = 0; it < config.n_iters; ++it) {
        auto box = SubgroupDescription::unrestricted(n);
        BitVector sampled(n, 0);
        if (!hook.is_unconstrained()) std::shuffle(order.begin(), order.end(), rng);

        for (auto j : order) {
            if (!hook.is_unconstrained()) {
                const auto allowed = hook(sampled);
                if (std::find(allowed.begin(), allowed.end(), j) == allowed.end()) continue;
            }
            const auto& values = dataset.unique_values(j);
            std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
            std::size_t a = pick(rng);
            std::size_t b = pick(rng);
            if (a > b) std::swap(a, b);
            box = box.with_interval(j, Bound::finite(values[a]), Bound::finite(values[b]));
            sampled[j] = 1;
        }

        const double q = quality.evaluate(membership(box, dataset), dataset);
        if (observer && observer->on_candidate) observer->on_candidate(box, q);
        if (!best || q > best_quality) {
            best = std::move(box);
            best_quality = q;
        }
        if (observer && observer->on_iteration) observer->on_iteration(it + 1, best_quality);
    }
    return postprocess_bounds(*best, dataset);
}

} // namespace csd
