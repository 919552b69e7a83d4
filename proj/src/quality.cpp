#include "csd/quality.hpp"

#include <cstdint>

namespace csd {

namespace {

void require_same_length(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("binary vectors differ in length");
}

void require_nonempty(std::span<const std::uint8_t> a) {
    if (a.empty()) throw std::invalid_argument("binary vectors must not be empty");
}

using i64 = std::int64_t;

} // namespace

MembershipCounts count_membership(std::span<const std::uint8_t> membership,
                                  std::span<const std::uint8_t> marks) {
    require_same_length(membership, marks);
    MembershipCounts c;
    c.total = membership.size();
    for (std::size_t i = 0; i < membership.size(); ++i) {
        c.marked_total += marks[i] ? 1 : 0;
        if (!membership[i]) continue;
        ++c.members;
        c.marked += marks[i] ? 1 : 0;
    }
    return c;
}

// (m_b+ * m - m_b * m+) / m^2, total for m_b = 0
double wracc_from_counts(const MembershipCounts& c) {
    const i64 m = static_cast<i64>(c.total);
    const i64 numerator = static_cast<i64>(c.marked) * m - static_cast<i64>(c.members) *
                                                               static_cast<i64>(c.marked_total);
    return static_cast<double>(numerator) / static_cast<double>(m * m);
}

double nwracc_from_counts(const MembershipCounts& c) {
    const i64 m = static_cast<i64>(c.total);
    const i64 pos = static_cast<i64>(c.marked_total);
    if (pos == 0 || pos == m) throw DegenerateTargetError("nWRAcc undefined for a single-class target");
    const i64 numerator = static_cast<i64>(c.marked) * m - pos * static_cast<i64>(c.members);
    return static_cast<double>(numerator) / static_cast<double>(pos * (m - pos));
}

double hamming_from_counts(const MembershipCounts& c) {
    // agreements = members that are marked + non-members that are unmarked
    const i64 agree = static_cast<i64>(c.marked) +
                      (static_cast<i64>(c.total) - static_cast<i64>(c.marked_total)) -
                      (static_cast<i64>(c.members) - static_cast<i64>(c.marked));
    return static_cast<double>(agree) / static_cast<double>(c.total);
}

double wracc(std::span<const std::uint8_t> membership, std::span<const std::uint8_t> target) {
    require_nonempty(membership);
    return wracc_from_counts(count_membership(membership, target));
}

double wracc_max(std::span<const std::uint8_t> target) {
    require_nonempty(target);
    const i64 m = static_cast<i64>(target.size());
    i64 pos = 0;
    for (auto t : target) pos += t ? 1 : 0;
    return static_cast<double>(pos * (m - pos)) / static_cast<double>(m * m);
}

double nwracc(std::span<const std::uint8_t> membership, std::span<const std::uint8_t> target) {
    require_nonempty(membership);
    return nwracc_from_counts(count_membership(membership, target));
}

double hamming_similarity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    require_nonempty(a);
    return hamming_from_counts(count_membership(a, b));
}

double jaccard_similarity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    require_same_length(a, b);
    require_nonempty(a);
    std::size_t both = 0;
    std::size_t either = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        both += (a[i] && b[i]) ? 1 : 0;
        either += (a[i] || b[i]) ? 1 : 0;
    }
    if (either == 0) return 1.0;
    return static_cast<double>(both) / static_cast<double>(either);
}

std::size_t deselection_dissimilarity(std::span<const std::uint8_t> s_new,
                                      std::span<const std::uint8_t> s_old) {
    require_same_length(s_new, s_old);
    std::size_t count = 0;
    for (std::size_t j = 0; j < s_new.size(); ++j) count += (s_old[j] && !s_new[j]) ? 1 : 0;
    return count;
}

QualityFunction QualityFunction::hamming_to(BitVector reference) {
    if (reference.empty()) throw std::invalid_argument("Hamming objective needs a reference membership");
    return QualityFunction(QualityKind::HammingToTarget, std::move(reference));
}

std::span<const std::uint8_t> QualityFunction::marks(const Dataset& dataset) const {
    if (kind_ == QualityKind::HammingToTarget) return reference_;
    return dataset.target();
}

double QualityFunction::from_counts(const MembershipCounts& c) const {
    switch (kind_) {
    case QualityKind::WRAcc: return wracc_from_counts(c);
    case QualityKind::NWRAcc: return nwracc_from_counts(c);
    case QualityKind::HammingToTarget: return hamming_from_counts(c);
    }
    throw std::logic_error("unknown quality kind");
}

double QualityFunction::evaluate(std::span<const std::uint8_t> membership,
                                 const Dataset& dataset) const {
    return from_counts(count_membership(membership, marks(dataset)));
}

void QualityFunction::check(const Dataset& dataset) const {
    if (kind_ == QualityKind::HammingToTarget && reference_.size() != dataset.rows()) {
        throw std::invalid_argument("reference membership length " +
                                    std::to_string(reference_.size()) + " does not match " +
                                    std::to_string(dataset.rows()) + " data objects");
    }
    if (kind_ == QualityKind::NWRAcc &&
        (dataset.positives() == 0 || dataset.positives() == dataset.rows())) {
        throw DegenerateTargetError("nWRAcc undefined for a single-class target");
    }
}

} // namespace csd
