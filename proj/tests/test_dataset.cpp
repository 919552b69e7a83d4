#include "csd/dataset.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <numeric>
#include <string>

using namespace csd;
using testutil::TempPath;

TEST_CASE("load_csv reads a small file") {
    TempPath f;
    f.write("f1,f2,y\n1,2,a\n3,4.5,a\n-1,0,b\n");
    const auto d = load_csv(f.path(), "y");
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 2);
    CHECK(d.feature_names() == std::vector<std::string>{"f1", "f2"});
    CHECK(d.at(1, 1) == 4.5);
    CHECK(d.target() == BitVector{0, 0, 1});
    CHECK(d.positives() == 1);
}

TEST_CASE("load_csv accepts the target in any column, blank lines and padding") {
    TempPath f;
    f.write("\xEF\xBB\xBF" "y, a ,b\r\n1, 2 ,3\r\n\r\n0,4,5\r\n0,6,7\r\n");
    const auto d = load_csv(f.path(), "y");
    CHECK(d.rows() == 3);
    CHECK(d.feature_names() == std::vector<std::string>{"a", "b"});
    CHECK(d.target() == BitVector{1, 0, 0});
    CHECK(d.at(2, 0) == 6.0);
}

TEST_CASE("load_csv error contract") {
    TempPath f;
    SUBCASE("non-numeric cell names row and column") {
        f.write("f1,f2,y\n1,2,0\nabc,3,1\n");
        try {
            load_csv(f.path(), "y");
            FAIL("expected an error");
        } catch (const DatasetError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("row 3") != std::string::npos);
            CHECK(msg.find("f1") != std::string::npos);
        }
    }
    SUBCASE("non-finite cell") {
        f.write("f1,y\ninf,0\n1,1\n");
        CHECK_THROWS_AS(load_csv(f.path(), "y"), DatasetError);
    }
    SUBCASE("missing value") {
        f.write("f1,y\n,0\n1,1\n");
        CHECK_THROWS_AS(load_csv(f.path(), "y"), DatasetError);
    }
    SUBCASE("missing target column") {
        f.write("f1,f2\n1,2\n");
        CHECK_THROWS_AS(load_csv(f.path(), "y"), DatasetError);
    }
    SUBCASE("duplicate target column") {
        f.write("y,f1,y\n1,2,1\n0,2,0\n");
        CHECK_THROWS_AS(load_csv(f.path(), "y"), DatasetError);
    }
    SUBCASE("ragged row") {
        f.write("f1,y\n1,0\n2\n");
        CHECK_THROWS_AS(load_csv(f.path(), "y"), DatasetError);
    }
    SUBCASE("header only") {
        f.write("f1,y\n");
        CHECK_THROWS_AS(load_csv(f.path(), "y"), DatasetError);
    }
    SUBCASE("empty file") {
        f.write("");
        CHECK_THROWS_AS(load_csv(f.path(), "y"), DatasetError);
    }
    SUBCASE("single class") {
        f.write("f1,y\n1,a\n2,a\n");
        CHECK_THROWS(load_csv(f.path(), "y"));
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv("/nonexistent/dir/data.csv", "y"), DatasetError);
    }
}

TEST_CASE("encode_target_minority_positive") {
    const std::vector<std::string> a{"a", "a", "a", "b"};
    CHECK(encode_target_minority_positive(a) == BitVector{0, 0, 0, 1});
    const std::vector<std::string> minority_first{"b", "a", "a"};
    CHECK(encode_target_minority_positive(minority_first) == BitVector{1, 0, 0});
    const std::vector<std::string> tie{"1", "0", "1", "0"};
    CHECK(encode_target_minority_positive(tie) == BitVector{1, 0, 1, 0});
    const std::vector<std::string> tie_words{"no", "yes"};
    CHECK(encode_target_minority_positive(tie_words) == BitVector{0, 1});
    const std::vector<std::string> one{"x"};
    CHECK_THROWS(encode_target_minority_positive(one));
    const std::vector<std::string> same{"x", "x"};
    CHECK_THROWS(encode_target_minority_positive(same));
    const std::vector<std::string> three{"x", "y", "z"};
    CHECK_THROWS(encode_target_minority_positive(three));
}

TEST_CASE("dataset validation and derived values") {
    CHECK_THROWS_AS(Dataset(0, 1, {}, {}), DatasetError);
    CHECK_THROWS_AS(Dataset(1, 1, {std::numeric_limits<double>::quiet_NaN()}, {1}), DatasetError);
    CHECK_THROWS_AS(Dataset(1, 1, {1.0}, {2}), DatasetError);
    CHECK_THROWS_AS(Dataset(2, 1, {1.0}, {1, 0}), DatasetError);

    Dataset d(4, 2, {3, 1, 1, 1, 2, 5, 3, 0}, {1, 0, 0, 1});
    CHECK(d.unique_values(0) == std::vector<double>{1, 2, 3});
    CHECK(d.unique_values(1) == std::vector<double>{0, 1, 5});
    CHECK(d.column_min(1) == 0);
    CHECK(d.column_max(0) == 3);
    const auto ranks = d.value_ranks(0);
    CHECK(std::vector<std::uint32_t>(ranks.begin(), ranks.end()) == std::vector<std::uint32_t>{2, 0, 1, 2});
    CHECK(d.feature_names() == std::vector<std::string>{"f0", "f1"});

    const std::vector<std::size_t> rows{3, 1};
    const auto s = d.subset(rows);
    CHECK(s.rows() == 2);
    CHECK(s.at(0, 0) == 3);
    CHECK(s.at(1, 1) == 1);
    CHECK(s.target() == BitVector{1, 0});
}

TEST_CASE("unique values are exactly the column's values, strictly ascending") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const auto d = oracle::random_dataset(rng, 20, 3, 6);
        for (std::size_t j = 0; j < d.cols(); ++j) {
            const auto& u = d.unique_values(j);
            CHECK(std::adjacent_find(u.begin(), u.end(), std::greater_equal<>()) == u.end());
            std::set<double> seen(d.column(j).begin(), d.column(j).end());
            CHECK(std::vector<double>(seen.begin(), seen.end()) == u);
        }
    }
}

TEST_CASE("csv round trip reproduces the dataset") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        std::uniform_real_distribution<double> real(-1e3, 1e3);
        const std::size_t m = 12, n = 3;
        std::vector<double> x(m * n);
        for (auto& v : x) v = real(rng);
        // positives stay the minority so the re-encoding keeps labels
        BitVector y(m, 0);
        for (std::size_t i = 0; i < m; i += 3) y[i] = 1;
        Dataset d(m, n, x, y, {"a", "b", "c"});
        TempPath f;
        write_csv(d, f.path(), "label");
        CHECK(load_csv(f.path(), "label") == d);
    }
}

TEST_CASE("stratified_kfold") {
    std::vector<double> x(10);
    std::iota(x.begin(), x.end(), 0.0);
    BitVector y{1, 0, 1, 0, 1, 0, 1, 0, 0, 0};
    Dataset d(10, 1, x, y);

    const auto folds = stratified_kfold(d, 2, 42);
    REQUIRE(folds.size() == 2);
    for (const auto& f : folds) {
        std::size_t pos = 0;
        for (auto i : f.test_indices) pos += y[i];
        CHECK(pos == 2);
        CHECK(f.test_indices.size() - pos == 3);
    }
    CHECK_THROWS_AS(stratified_kfold(d, 1, 0), DatasetError);
    CHECK_THROWS_AS(stratified_kfold(d, 5, 0), DatasetError);

    const auto again = stratified_kfold(d, 2, 42);
    for (std::size_t f = 0; f < 2; ++f) {
        CHECK(again[f].train_indices == folds[f].train_indices);
        CHECK(again[f].test_indices == folds[f].test_indices);
    }
}

TEST_CASE("stratified_kfold invariants on random inputs") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        std::uniform_int_distribution<std::size_t> size(6, 40);
        const std::size_t m = size(rng);
        auto d = oracle::random_dataset(rng, m, 1, 5);
        const std::size_t pos = d.positives(), neg = m - pos;
        if (std::min(pos, neg) < 2) continue;
        std::uniform_int_distribution<std::size_t> fcount(2, std::min(pos, neg));
        const std::size_t k = fcount(rng);
        const auto folds = stratified_kfold(d, k, rng());
        std::vector<int> seen(m, 0);
        std::size_t min_pos = m, max_pos = 0, min_neg = m, max_neg = 0;
        for (const auto& f : folds) {
            CHECK(f.train_indices.size() + f.test_indices.size() == m);
            CHECK(std::is_sorted(f.test_indices.begin(), f.test_indices.end()));
            std::set<std::size_t> test(f.test_indices.begin(), f.test_indices.end());
            for (auto i : f.train_indices) CHECK(test.count(i) == 0);
            std::size_t p = 0;
            for (auto i : f.test_indices) {
                ++seen[i];
                p += d.target()[i];
            }
            min_pos = std::min(min_pos, p);
            max_pos = std::max(max_pos, p);
            min_neg = std::min(min_neg, f.test_indices.size() - p);
            max_neg = std::max(max_neg, f.test_indices.size() - p);
        }
        for (auto s : seen) CHECK(s == 1);
        CHECK(max_pos - min_pos <= 1);
        CHECK(max_neg - min_neg <= 1);
    }
}
