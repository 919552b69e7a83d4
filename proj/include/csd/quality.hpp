#pragma once

#include "csd/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace csd {

class DegenerateTargetError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Membership counts a quality function is evaluated from.
///
/// `marked` is the count of members flagged in the quality's reference
/// vector: the positives for WRAcc/nWRAcc, the original subgroup's
/// members for Hamming similarity.
struct MembershipCounts {
    std::size_t total = 0;       // m
    std::size_t marked_total = 0; // m+ (or |b0|)
    std::size_t members = 0;      // m_b
    std::size_t marked = 0;       // m_b+ (or |b ∧ b0|)
};

double wracc(std::span<const std::uint8_t> membership, std::span<const std::uint8_t> target);
double wracc_max(std::span<const std::uint8_t> target);
double nwracc(std::span<const std::uint8_t> membership, std::span<const std::uint8_t> target);
double hamming_similarity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
/// Two all-zero vectors count as identical (similarity 1).
double jaccard_similarity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
/// Number of features selected in `s_old` but not in `s_new`.
std::size_t deselection_dissimilarity(std::span<const std::uint8_t> s_new,
                                      std::span<const std::uint8_t> s_old);

double wracc_from_counts(const MembershipCounts& c);
double nwracc_from_counts(const MembershipCounts& c);
double hamming_from_counts(const MembershipCounts& c);

enum class QualityKind { WRAcc, NWRAcc, HammingToTarget };

/// Subgroup-quality objective Q. All kinds are functions of MembershipCounts.
class QualityFunction {
  public:
    static QualityFunction wracc() { return QualityFunction(QualityKind::WRAcc, {}); }
    static QualityFunction nwracc() { return QualityFunction(QualityKind::NWRAcc, {}); }
    /// Normalized Hamming similarity to a fixed reference membership.
    static QualityFunction hamming_to(BitVector reference);

    QualityKind kind() const { return kind_; }
    const BitVector& reference() const { return reference_; }

    /// Vector whose ones are counted as `marked`: the target or the reference.
    std::span<const std::uint8_t> marks(const Dataset& dataset) const;

    double from_counts(const MembershipCounts& c) const;
    double evaluate(std::span<const std::uint8_t> membership, const Dataset& dataset) const;
    /// Rejects datasets the objective is undefined on.
    void check(const Dataset& dataset) const;

  private:
    QualityFunction(QualityKind kind, BitVector reference)
        : kind_(kind), reference_(std::move(reference)) {}

    QualityKind kind_;
    BitVector reference_;
};

MembershipCounts count_membership(std::span<const std::uint8_t> membership,
                                  std::span<const std::uint8_t> marks);

} // namespace csd
