#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csd {

using BitVector = std::vector<std::uint8_t>;

class DatasetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Immutable numeric feature matrix with a binary target.
///
/// Values are stored column-major; per-column sorted unique values and
/// extremes are computed once at construction.
class Dataset {
  public:
    /// `features` is row-major with rows() * cols() entries.
    Dataset(std::size_t rows, std::size_t cols, std::vector<double> features, BitVector target,
            std::vector<std::string> feature_names = {});

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t positives() const { return positives_; }

    double at(std::size_t row, std::size_t col) const { return columns_[col * rows_ + row]; }
    std::span<const double> column(std::size_t col) const {
        return {columns_.data() + col * rows_, rows_};
    }
    const BitVector& target() const { return target_; }
    const std::vector<std::string>& feature_names() const { return names_; }

    /// Strictly ascending distinct values of a column.
    const std::vector<double>& unique_values(std::size_t col) const { return unique_[col]; }
    /// Position of each row's value within unique_values(col).
    std::span<const std::uint32_t> value_ranks(std::size_t col) const {
        return {ranks_.data() + col * rows_, rows_};
    }
    double column_min(std::size_t col) const { return unique_[col].front(); }
    double column_max(std::size_t col) const { return unique_[col].back(); }

    /// Rows `indices` (in the given order) as a new dataset.
    Dataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const Dataset& other) const;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t positives_ = 0;
    std::vector<double> columns_;
    BitVector target_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> unique_;
    std::vector<std::uint32_t> ranks_;
};

struct FoldSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Minority label -> 1. On a frequency tie the lexicographically larger token is positive.
BitVector encode_target_minority_positive(std::span<const std::string> raw_labels);

/// Reads a comma-separated file with a header row; every column except
/// `target_column` must hold finite numbers.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column);

/// Writes features plus a trailing 0/1 column named `target_column`.
void write_csv(const Dataset& dataset, const std::filesystem::path& path,
               const std::string& target_column = "target");

/// Stratified k-fold split; deterministic given seed.
std::vector<FoldSplit> stratified_kfold(const Dataset& dataset, std::size_t folds,
                                        std::uint64_t seed);

} // namespace csd
