#pragma once

#include "csd/constraints.hpp"
#include "csd/dataset.hpp"
#include "csd/quality.hpp"
#include "csd/subgroup.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace csd {

struct ExactConfig {
    std::optional<std::size_t> k;
    std::uint64_t candidate_cap = 10'000'000;
    QualityFunction objective = QualityFunction::wracc();

    void validate() const;
};

class CandidateCapExceeded : public std::runtime_error {
  public:
    CandidateCapExceeded(std::uint64_t estimate, std::uint64_t cap);
    std::uint64_t estimate() const { return estimate_; }
    std::uint64_t cap() const { return cap_; }

  private:
    std::uint64_t estimate_;
    std::uint64_t cap_;
};

/// Number of grid descriptions with at most k restricted features.
///
/// Feature j with u_j unique values contributes u_j(u_j+1)/2 - 1 restricted
/// intervals; the unrestricted option is the remaining one. Saturates at
/// the uint64 maximum.
std::uint64_t estimate_candidates(const Dataset& dataset, std::optional<std::size_t> k);

/// Global maximizer of config.objective over the unique-value grid.
///
/// Ties go to fewer selected features, then to the lexicographically smaller
/// bound vectors (lower bounds first, then upper bounds).
SubgroupDescription exact_search(const Dataset& dataset, const ExactConfig& config);

/// Maximizes Hamming similarity to the original subgroup's membership
/// subject to the deselection constraints in `context`. config.objective is ignored.
SubgroupDescription exact_alternative(const Dataset& dataset, const AlternativesContext& context,
                                      const ExactConfig& config);

} // namespace csd
