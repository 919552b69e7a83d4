#include "csd/detail/feature_scan.hpp"
#include "csd/exact_search.hpp"
#include "csd/heuristic_search.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace csd;
using testutil::column_dataset;

namespace {

double train_wracc(const SubgroupDescription& box, const Dataset& d) {
    return wracc(membership(box, d), d.target());
}

} // namespace

TEST_CASE("PRIM hand-executed example") {
    const auto d = column_dataset({1, 2, 3, 4, 5}, {0, 1, 1, 1, 0});
    const auto box = prim_search(d, QualityFunction::wracc(), PrimConfig{0.05, 0.0});
    CHECK(box.lower(0) == 2.0);
    CHECK(box.upper(0) == 4.0);
    CHECK(nwracc(membership(box, d), d.target()) == 1.0);
}

TEST_CASE("PRIM degenerate cases") {
    Dataset none(4, 2, {1, 2, 2, 3, 3, 1, 4, 4}, {0, 0, 0, 0});
    CHECK(prim_search(none, QualityFunction::wracc(), PrimConfig{}).is_unrestricted());
    const auto d = column_dataset({1, 2, 3, 4, 5}, {0, 1, 1, 1, 0});
    CHECK(prim_search(d, QualityFunction::wracc(), PrimConfig{0.05, 1.0}).is_unrestricted());
    CHECK_THROWS(prim_search(d, QualityFunction::wracc(), PrimConfig{0.0, 0.0}));
    CHECK_THROWS(prim_search(d, QualityFunction::wracc(), PrimConfig{0.1, 1.5}));
}

TEST_CASE("beam offers: duplicates and ties are rejected") {
    const auto d = column_dataset({1, 2, 3}, {0, 1, 0});
    BeamState state(d, QualityFunction::wracc(), 2);
    const auto a = SubgroupDescription({Bound::finite(2)}, {Bound::finite(2)});
    CHECK(state.offer(a, 0.2));
    CHECK_FALSE(state.offer(a, 0.2));      // duplicate
    CHECK_FALSE(state.offer(a, 0.3));      // still a duplicate even when better
    const auto b = SubgroupDescription({Bound::finite(2)}, {Bound::finite(3)});
    // the remaining unrestricted slot has quality 0; equal quality is not enough
    CHECK_FALSE(state.offer(b, 0.0));
    CHECK(state.offer(b, 0.1));
    CHECK(state.worst_slot() == 1);
    CHECK(state.best_slot() == 0);
}

TEST_CASE("beam update on a single-valued column tests one candidate per side") {
    Dataset d(3, 2, {5, 1, 5, 2, 5, 3}, {0, 1, 0});
    BeamState state(d, QualityFunction::wracc(), 3);
    std::size_t evaluated = 0;
    SearchObserver obs;
    obs.on_candidate = [&](const SubgroupDescription&, double) { ++evaluated; };
    beam_update(state, 0, 0, d, QualityFunction::wracc(), &obs);
    CHECK(evaluated == 2);
    for (const auto& slot : state.candidates) CHECK(slot.box.is_unrestricted());
}

TEST_CASE("best interval update examples") {
    const auto d = column_dataset({1, 2, 3}, {0, 1, 0});
    BeamState state(d, QualityFunction::wracc(), 1);
    best_interval_update(state, 0, 0, d, QualityFunction::wracc());
    CHECK(state.candidates[0].box.lower(0) == 2.0);
    CHECK(state.candidates[0].box.upper(0) == 2.0);

    Dataset flat(3, 1, {4, 4, 4}, {0, 1, 0});
    BeamState flat_state(flat, QualityFunction::wracc(), 1);
    best_interval_update(flat_state, 0, 0, flat, QualityFunction::wracc());
    CHECK(flat_state.candidates[0].box.is_unrestricted());

    CHECK_THROWS_AS(best_interval_update(state, 0, 0, d, QualityFunction::nwracc()), std::invalid_argument);
}

TEST_CASE("best interval update matches brute force on one feature") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 2 + rng() % 14;
        const auto d = oracle::random_dataset(rng, m, 1, 2 + static_cast<int>(rng() % 6));
        BeamState state(d, QualityFunction::wracc(), 1);
        best_interval_update(state, 0, 0, d, QualityFunction::wracc());
        const auto b = membership(state.candidates[0].box, d);
        CHECK(oracle::wracc_numerator(b, d.target()) == oracle::brute_best_interval(d, 0));
    }
}

TEST_CASE("feature scan agrees with direct membership counting") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        const auto d = oracle::random_dataset(rng, 10, 3, 4);
        auto box = SubgroupDescription::unrestricted(3);
        const auto& u1 = d.unique_values(1);
        box = box.with_interval(1, Bound::finite(u1.front()), Bound::finite(u1[u1.size() / 2]));
        const auto marks = QualityFunction::wracc().marks(d);
        detail::FeatureScan scan(d, box, 0, marks);
        const auto& u0 = d.unique_values(0);
        for (std::size_t lo = 0; lo < u0.size(); ++lo) {
            for (std::size_t hi = lo; hi < u0.size(); ++hi) {
                const auto probe = box.with_interval(0, Bound::finite(u0[lo]), Bound::finite(u0[hi]));
                const auto direct = count_membership(membership(probe, d), marks);
                const auto fast = scan.counts(lo, hi);
                CHECK(fast.members == direct.members);
                CHECK(fast.marked == direct.marked);
                CHECK(fast.total == direct.total);
            }
        }
    }
}

TEST_CASE("perfect single-feature subgroup is found by beam search") {
    Dataset d(6, 2, {1, 9, 2, 3, 3, 1, 4, 7, 5, 5, 6, 2}, {0, 1, 1, 0, 0, 0});
    for (auto rule : {UpdateRule::BeamUpdate, UpdateRule::BestInterval}) {
        BeamConfig cfg;
        cfg.update_rule = rule;
        const auto box = beam_search(d, QualityFunction::wracc(), cfg);
        CHECK(is_perfect(membership(box, d), d.target()));
    }
}

TEST_CASE("beam search versus the exact optimum on small random data") {
    std::mt19937_64 rng(31);
    int equal = 0;
    const int runs = 60;
    for (int t = 0; t < runs; ++t) {
        const auto d = oracle::random_dataset(rng, 12, 2, 4);
        const double exact = train_wracc(exact_search(d, ExactConfig{}), d);
        const double beam = train_wracc(beam_search(d, QualityFunction::wracc(), BeamConfig{}), d);
        CHECK(beam <= exact + 1e-12);
        equal += beam == exact;
    }
    // with width 10 on a 2-feature grid the beam almost always reaches the optimum
    CHECK(equal >= runs * 9 / 10);
}

TEST_CASE("searches terminate and track their best quality") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 30; ++t) {
        const auto d = oracle::random_dataset(rng, 20, 3, 5);
        std::vector<double> trace;
        SearchObserver obs;
        obs.on_iteration = [&](std::size_t, double q) { trace.push_back(q); };
        const auto box = beam_search(d, QualityFunction::wracc(), BeamConfig{4}, {}, &obs);
        REQUIRE_FALSE(trace.empty());
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1]);
        CHECK(train_wracc(box, d) == doctest::Approx(trace.back()).epsilon(1e-12));

        trace.clear();
        const auto peel = prim_search(d, QualityFunction::wracc(), PrimConfig{0.1, 0.0}, {}, &obs);
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1]);
        CHECK(train_wracc(peel, d) >= 0.0);
    }
}

TEST_CASE("heuristic candidates respect the hook") {
    std::mt19937_64 rng(404);
    std::size_t violations = 0;
    for (int t = 0; t < 60; ++t) {
        const auto d = oracle::random_dataset(rng, 15, 4, 4);
        const std::size_t k = 1 + t % 3;
        const auto hook = PermissibleFeatures::cardinality(CardinalityConstraint(k));
        SearchObserver obs;
        obs.on_candidate = [&](const SubgroupDescription& box, double) {
            if (count_ones(selected_features(box, d)) > k) ++violations;
        };
        prim_search(d, QualityFunction::wracc(), PrimConfig{0.1, 0.0}, hook, &obs);
        beam_search(d, QualityFunction::wracc(), BeamConfig{3}, hook, &obs);
        beam_search(d, QualityFunction::wracc(), BeamConfig{3, UpdateRule::BestInterval}, hook, &obs);
        CHECK(count_ones(selected_features(beam_search(d, QualityFunction::wracc(), BeamConfig{3}, hook), d)) <= k);
    }
    CHECK(violations == 0);
}
