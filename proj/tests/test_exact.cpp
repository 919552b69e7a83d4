#include "csd/exact_search.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace csd;
using testutil::column_dataset;

namespace {

ExactConfig with_k(std::optional<std::size_t> k) {
    ExactConfig cfg;
    cfg.k = k;
    return cfg;
}

} // namespace

TEST_CASE("exact search example") {
    const auto d = column_dataset({1, 2, 3}, {0, 1, 0});
    const auto box = exact_search(d, with_k(1));
    CHECK(box.lower(0) == 2.0);
    CHECK(box.upper(0) == 2.0);
    const auto b = membership(box, d);
    CHECK(wracc(b, d.target()) == doctest::Approx(2.0 / 9).epsilon(1e-15));
    CHECK(nwracc(b, d.target()) == 1.0);
}

TEST_CASE("candidate estimate and cap") {
    Dataset d(3, 2, {1, 1, 2, 2, 3, 1}, {0, 1, 0});
    // option counts 6 and 3; restricted ones 5 and 2
    CHECK(estimate_candidates(d, std::nullopt) == 18);
    CHECK(estimate_candidates(d, 1) == 8);
    CHECK(estimate_candidates(d, 2) == 18);

    std::vector<double> x(40);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
    BitVector y(10, 0);
    y[3] = 1;
    Dataset wide(10, 4, x, y);
    ExactConfig cfg;
    cfg.candidate_cap = 1000;
    try {
        exact_search(wide, cfg);
        FAIL("expected the cap to trigger");
    } catch (const CandidateCapExceeded& e) {
        CHECK(e.cap() == 1000);
        CHECK(e.estimate() == 55ull * 55 * 55 * 55);
    }
    ExactConfig zero;
    zero.k = 0;
    CHECK_THROWS(exact_search(d, zero));
}

TEST_CASE("exact search agrees with the naive enumerator") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 100; ++t) {
        const std::size_t m = 3 + rng() % 10;
        const std::size_t n = 1 + rng() % 3;
        const auto d = oracle::random_dataset(rng, m, n, 2 + static_cast<int>(rng() % 3));
        std::optional<std::size_t> k;
        if (t % 2) k = 1 + rng() % n;
        const auto naive = oracle::naive_optimum(
            d, [&](const BitVector& b) { return oracle::wracc_numerator(b, d.target()); }, k);
        const auto box = exact_search(d, with_k(k));
        const auto b = membership(box, d);
        CHECK(oracle::wracc_numerator(b, d.target()) == naive.best);
        CHECK(count_ones(selected_features(box, d)) == naive.fewest_features);
        CHECK(naive.memberships.count(b) == 1);
        CHECK(postprocess_bounds(box, d) == box);
    }
}

TEST_CASE("exact optimum is monotone in k and dominates off-grid boxes") {
    std::mt19937_64 rng(202);
    for (int t = 0; t < 40; ++t) {
        const auto d = oracle::random_dataset(rng, 12, 3, 4);
        double prev = -1.0;
        for (std::size_t k = 1; k <= 3; ++k) {
            const double q = wracc(membership(exact_search(d, with_k(k)), d), d.target());
            CHECK(q >= prev);
            prev = q;
        }
        CHECK(wracc(membership(exact_search(d, with_k(std::nullopt)), d), d.target()) == prev);

        std::uniform_real_distribution<double> real(-0.5, 3.5);
        for (int r = 0; r < 20; ++r) {
            auto box = SubgroupDescription::unrestricted(3);
            for (std::size_t j = 0; j < 3; ++j) {
                double lo = real(rng), hi = real(rng);
                if (lo > hi) std::swap(lo, hi);
                box = box.with_interval(j, Bound::finite(lo), Bound::finite(hi));
            }
            CHECK(wracc(membership(box, d), d.target()) <= prev);
        }
    }
}

TEST_CASE("exact alternative agrees with the naive enumerator") {
    std::mt19937_64 rng(303);
    for (int t = 0; t < 60; ++t) {
        const auto d = oracle::random_dataset(rng, 3 + rng() % 8, 1 + rng() % 3, 3);
        const std::size_t tau = 1 + rng() % 2;
        const auto original = exact_search(d, with_k(2));
        AlternativesContext ctx(tau);
        ctx.add(membership(original, d), selected_features(original, d));
        const auto& ref = ctx.original().membership;
        const auto naive = oracle::naive_optimum(
            d, [&](const BitVector& b) { return oracle::agreement(b, ref); }, 2,
            [&](const BitVector& sel) { return check_dissimilarity(sel, ctx); });
        const auto alt = exact_alternative(d, ctx, with_k(2));
        const auto b = membership(alt, d);
        CHECK(oracle::agreement(b, ref) == naive.best);
        CHECK(check_dissimilarity(selected_features(alt, d), ctx));
        CHECK(naive.memberships.count(b) == 1);
    }
    AlternativesContext empty(1);
    CHECK_THROWS(exact_alternative(column_dataset({1, 2}, {0, 1}), empty, ExactConfig{}));
}

TEST_CASE("duplicated column yields an identical alternative") {
    Dataset d(5, 2, {1, 1, 2, 2, 3, 3, 4, 4, 5, 5}, {0, 1, 1, 0, 0});
    const auto original = exact_search(d, with_k(1));
    const auto sel = selected_features(original, d);
    REQUIRE(count_ones(sel) == 1);
    AlternativesContext ctx(1);
    ctx.add(membership(original, d), sel);
    const auto alt = exact_alternative(d, ctx, with_k(1));
    const auto alt_sel = selected_features(alt, d);
    CHECK(count_ones(alt_sel) == 1);
    CHECK(alt_sel != sel);
    CHECK(membership(alt, d) == membership(original, d));
    CHECK(hamming_similarity(membership(alt, d), membership(original, d)) == 1.0);
}
