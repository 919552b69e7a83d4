#include "csd/dataset.hpp"

#include "csd/bound.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace csd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view cell(line.data() + start,
                              (comma == std::string::npos ? line.size() : comma) - start);
        cells.emplace_back(trim(cell));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool parse_finite(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && !text.empty() &&
           std::isfinite(out);
}

} // namespace

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> features, BitVector target,
                 std::vector<std::string> feature_names)
    : rows_(rows), cols_(cols), target_(std::move(target)), names_(std::move(feature_names)) {
    if (rows_ == 0 || cols_ == 0) throw DatasetError("dataset must have at least one row and column");
    if (features.size() != rows_ * cols_) throw DatasetError("feature matrix size mismatch");
    if (target_.size() != rows_) throw DatasetError("target length does not match row count");
    if (names_.empty()) {
        for (std::size_t j = 0; j < cols_; ++j) names_.push_back("f" + std::to_string(j));
    } else if (names_.size() != cols_) {
        throw DatasetError("feature name count does not match column count");
    }
    for (auto label : target_) {
        if (label > 1) throw DatasetError("target must contain only 0 and 1");
        positives_ += label;
    }

    columns_.resize(rows_ * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            double v = features[i * cols_ + j];
            if (!std::isfinite(v)) {
                throw DatasetError("non-finite value at row " + std::to_string(i) + ", column " +
                                   names_[j]);
            }
            columns_[j * rows_ + i] = v;
        }
    }

    unique_.resize(cols_);
    ranks_.resize(rows_ * cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        auto col = column(j);
        std::vector<double> values(col.begin(), col.end());
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t i = 0; i < rows_; ++i) {
            auto it = std::lower_bound(values.begin(), values.end(), col[i]);
            ranks_[j * rows_ + i] = static_cast<std::uint32_t>(it - values.begin());
        }
        unique_[j] = std::move(values);
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<double> features;
    features.reserve(indices.size() * cols_);
    BitVector target;
    target.reserve(indices.size());
    for (auto i : indices) {
        if (i >= rows_) throw DatasetError("subset index out of range");
        for (std::size_t j = 0; j < cols_; ++j) features.push_back(at(i, j));
        target.push_back(target_[i]);
    }
    return Dataset(indices.size(), cols_, std::move(features), std::move(target), names_);
}

bool Dataset::operator==(const Dataset& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && columns_ == other.columns_ &&
           target_ == other.target_ && names_ == other.names_;
}

BitVector encode_target_minority_positive(std::span<const std::string> raw_labels) {
    if (raw_labels.size() < 2) throw DatasetError("target needs at least two labels");
    std::map<std::string, std::size_t> counts;
    for (const auto& label : raw_labels) ++counts[label];
    if (counts.size() != 2) {
        throw DatasetError("target must have exactly two distinct labels, found " +
                           std::to_string(counts.size()));
    }
    // map iterates ascending, so `second` holds the lexicographically larger token
    const auto& [small_token, small_count] = *counts.begin();
    const auto& [large_token, large_count] = *std::next(counts.begin());
    const std::string& positive = small_count < large_count ? small_token : large_token;

    BitVector encoded;
    encoded.reserve(raw_labels.size());
    for (const auto& label : raw_labels) encoded.push_back(label == positive ? 1 : 0);
    return encoded;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset file '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw DatasetError("dataset file '" + path.string() + "' is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    auto header = split_row(line);

    std::size_t target_idx = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] != target_column) continue;
        if (target_idx != header.size()) {
            throw DatasetError("target column '" + target_column + "' appears more than once");
        }
        target_idx = c;
    }
    if (target_idx == header.size()) {
        throw DatasetError("target column '" + target_column + "' not found");
    }
    if (header.size() < 2) throw DatasetError("dataset needs at least one feature column");

    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != target_idx) names.push_back(header[c]);
    }

    std::vector<double> features;
    std::vector<std::string> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != header.size()) {
            throw DatasetError("row " + std::to_string(line_no) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == target_idx) {
                if (cells[c].empty()) {
                    throw DatasetError("missing target at row " + std::to_string(line_no));
                }
                labels.push_back(cells[c]);
                continue;
            }
            double value = 0.0;
            if (!parse_finite(cells[c], value)) {
                throw DatasetError("invalid numeric value '" + cells[c] + "' at row " +
                                   std::to_string(line_no) + ", column '" + header[c] + "'");
            }
            features.push_back(value);
        }
    }
    if (labels.empty()) throw DatasetError("dataset file '" + path.string() + "' has no data rows");

    auto target = encode_target_minority_positive(labels);
    const std::size_t rows = labels.size();
    const std::size_t cols = names.size();
    return Dataset(rows, cols, std::move(features), std::move(target), std::move(names));
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path,
               const std::string& target_column) {
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write '" + path.string() + "'");
    for (const auto& name : dataset.feature_names()) out << name << ',';
    out << target_column << '\n';
    for (std::size_t i = 0; i < dataset.rows(); ++i) {
        for (std::size_t j = 0; j < dataset.cols(); ++j) out << format_double(dataset.at(i, j)) << ',';
        out << static_cast<int>(dataset.target()[i]) << '\n';
    }
    if (!out) throw DatasetError("failed writing '" + path.string() + "'");
}

std::vector<FoldSplit> stratified_kfold(const Dataset& dataset, std::size_t folds,
                                        std::uint64_t seed) {
    const std::size_t pos = dataset.positives();
    const std::size_t neg = dataset.rows() - pos;
    if (folds < 2 || folds > std::min(pos, neg)) {
        throw DatasetError("fold count " + std::to_string(folds) + " must lie in [2, " +
                           std::to_string(std::min(pos, neg)) + "]");
    }

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < dataset.rows(); ++i) by_class[dataset.target()[i]].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> test(folds);
    std::size_t next_fold = 0;
    // positives first, then negatives; dealing continues round-robin across classes
    for (int cls : {1, 0}) {
        auto& rows = by_class[cls];
        std::shuffle(rows.begin(), rows.end(), rng);
        for (auto i : rows) {
            test[next_fold].push_back(i);
            next_fold = (next_fold + 1) % folds;
        }
    }

    std::vector<FoldSplit> splits(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::uint8_t> in_test(dataset.rows(), 0);
        for (auto i : test[f]) in_test[i] = 1;
        std::sort(test[f].begin(), test[f].end());
        splits[f].test_indices = test[f];
        for (std::size_t i = 0; i < dataset.rows(); ++i) {
            if (!in_test[i]) splits[f].train_indices.push_back(i);
        }
    }
    return splits;
}

} // namespace csd
