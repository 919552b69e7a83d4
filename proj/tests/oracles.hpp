#pragma once
// Independent reference implementations used by the tests. Nothing here
// calls into the search modules; only Dataset and plain loops are used.

#include "csd/dataset.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using csd::BitVector;
using csd::Dataset;

inline Dataset random_dataset(std::mt19937_64& rng, std::size_t m, std::size_t n, int max_unique) {
    std::uniform_int_distribution<int> value(0, max_unique - 1);
    std::bernoulli_distribution coin(0.4);
    std::vector<double> x(m * n);
    for (auto& v : x) v = value(rng);
    BitVector y(m);
    for (auto& t : y) t = coin(rng) ? 1 : 0;
    // both classes must occur
    y[0] = 1;
    y[m - 1] = 0;
    return Dataset(m, n, std::move(x), std::move(y));
}

/// Interval on one feature; nullopt stands for an infinite side.
struct Interval {
    std::optional<double> lo;
    std::optional<double> hi;
};

/// Every interval with endpoints drawn from the column's values or infinity,
/// including redundant ones such as lo = column minimum.
inline std::vector<Interval> all_intervals(const Dataset& d, std::size_t j) {
    std::set<double> values(d.column(j).begin(), d.column(j).end());
    std::vector<std::optional<double>> los{std::nullopt}, his;
    for (double v : values) {
        los.push_back(v);
        his.push_back(v);
    }
    his.push_back(std::nullopt);
    std::vector<Interval> out;
    for (auto lo : los) {
        for (auto hi : his) {
            if (lo && hi && *lo > *hi) continue;
            out.push_back({lo, hi});
        }
    }
    return out;
}

inline bool contains(const Interval& iv, double x) {
    return (!iv.lo || *iv.lo <= x) && (!iv.hi || x <= *iv.hi);
}

inline bool excludes_something(const Dataset& d, std::size_t j, const Interval& iv) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
        if (!contains(iv, d.at(i, j))) return true;
    }
    return false;
}

inline long long wracc_numerator(const BitVector& b, const BitVector& y) {
    long long m = static_cast<long long>(b.size()), mb = 0, mbp = 0, mp = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        mp += y[i];
        mb += b[i];
        mbp += b[i] && y[i];
    }
    return mbp * m - mb * mp;
}

inline long long agreement(const BitVector& a, const BitVector& b) {
    long long c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += a[i] == b[i];
    return c;
}

struct NaiveOptimum {
    long long best = std::numeric_limits<long long>::min();
    std::size_t fewest_features = std::numeric_limits<std::size_t>::max();
    std::set<BitVector> memberships; // all optimal memberships with that feature count
    std::uint64_t evaluated = 0;
};

/// Plain cartesian product over all_intervals of every feature.
/// `score` maps a membership to an integer objective; `feasible` filters
/// by selection. Optional cardinality limit k.
inline NaiveOptimum naive_optimum(const Dataset& d, const std::function<long long(const BitVector&)>& score,
                                  std::optional<std::size_t> k,
                                  const std::function<bool(const BitVector&)>& feasible = {}) {
    const std::size_t n = d.cols();
    std::vector<std::vector<Interval>> options(n);
    for (std::size_t j = 0; j < n; ++j) options[j] = all_intervals(d, j);
    std::vector<std::size_t> pick(n, 0);
    NaiveOptimum result;
    while (true) {
        BitVector sel(n, 0);
        for (std::size_t j = 0; j < n; ++j) sel[j] = excludes_something(d, j, options[j][pick[j]]);
        std::size_t count = 0;
        for (auto s : sel) count += s;
        if ((!k || count <= *k) && (!feasible || feasible(sel))) {
            BitVector b(d.rows(), 1);
            for (std::size_t i = 0; i < d.rows(); ++i) {
                for (std::size_t j = 0; j < n && b[i]; ++j) b[i] = contains(options[j][pick[j]], d.at(i, j));
            }
            ++result.evaluated;
            const long long q = score(b);
            if (q > result.best || (q == result.best && count < result.fewest_features)) {
                result.best = q;
                result.fewest_features = count;
                result.memberships = {b};
            } else if (q == result.best && count == result.fewest_features) {
                result.memberships.insert(b);
            }
        }
        std::size_t j = 0;
        while (j < n && ++pick[j] == options[j].size()) pick[j++] = 0;
        if (j == n) break;
    }
    return result;
}

/// max over lo <= hi of unique values of the WRAcc numerator on a single column.
inline long long brute_best_interval(const Dataset& d, std::size_t j) {
    std::set<double> values(d.column(j).begin(), d.column(j).end());
    long long best = std::numeric_limits<long long>::min();
    for (double lo : values) {
        for (double hi : values) {
            if (lo > hi) continue;
            BitVector b(d.rows());
            for (std::size_t i = 0; i < d.rows(); ++i) b[i] = d.at(i, j) >= lo && d.at(i, j) <= hi;
            best = std::max(best, wracc_numerator(b, d.target()));
        }
    }
    return best;
}

inline BitVector random_bits(std::mt19937_64& rng, std::size_t n, double p = 0.5) {
    std::bernoulli_distribution coin(p);
    BitVector b(n);
    for (auto& v : b) v = coin(rng) ? 1 : 0;
    return b;
}

inline std::size_t popcount(const BitVector& b) {
    std::size_t c = 0;
    for (auto v : b) c += v;
    return c;
}

} // namespace oracle
