#include "csd/exact_search.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace csd {

void ExactConfig::validate() const {
    if (candidate_cap < 1) throw std::invalid_argument("candidate_cap must be at least 1");
    if (k && *k < 1) throw std::invalid_argument("cardinality threshold k must be at least 1");
}

CandidateCapExceeded::CandidateCapExceeded(std::uint64_t estimate, std::uint64_t cap)
    : std::runtime_error("exact search would enumerate " + std::to_string(estimate) +
                         " candidates, above the cap of " + std::to_string(cap)),
      estimate_(estimate), cap_(cap) {}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kSaturated / b ? kSaturated : a * b;
}

class Enumerator {
  public:
    Enumerator(const Dataset& dataset, const QualityFunction& objective, std::size_t k,
               const AlternativesContext* context)
        : data_(dataset), objective_(objective), marks_(objective.marks(dataset)), k_(k),
          context_(context), lo_(dataset.cols()), hi_(dataset.cols()),
          buffers_(dataset.cols() + 1) {
        if (context_) reuse_.assign(context_->existing().size(), 0);
        for (auto m : marks_) marked_total_ += m ? 1 : 0;
    }

    SubgroupDescription run() {
        auto& rows = buffers_[0];
        rows.resize(data_.rows());
        std::size_t marked = 0;
        for (std::size_t i = 0; i < data_.rows(); ++i) {
            rows[i] = static_cast<std::uint32_t>(i);
            marked += marks_[i] ? 1 : 0;
        }
        descend(0, marked);
        return postprocess_bounds(describe(best_lo_, best_hi_), data_);
    }

  private:
    void descend(std::size_t j, std::size_t marked) {
        const auto& rows = buffers_[j];
        if (j == data_.cols()) {
            offer(rows.size(), marked);
            return;
        }
        const std::size_t top = data_.unique_values(j).size() - 1;

        // unrestricted: rows pass through unchanged
        lo_[j] = 0;
        hi_[j] = top;
        buffers_[j + 1] = rows;
        descend(j + 1, marked);

        if (top == 0 || selected_ == k_ || !reuse_allows(j)) return;
        ++selected_;
        bump_reuse(j, +1);
        const auto ranks = data_.value_ranks(j);
        for (std::size_t lo = 0; lo <= top; ++lo) {
            for (std::size_t hi = lo; hi <= top; ++hi) {
                if (lo == 0 && hi == top) continue;
                lo_[j] = lo;
                hi_[j] = hi;
                auto& next = buffers_[j + 1];
                next.clear();
                std::size_t next_marked = 0;
                for (auto r : rows) {
                    const auto v = ranks[r];
                    if (v >= lo && v <= hi) {
                        next.push_back(r);
                        next_marked += marks_[r] ? 1 : 0;
                    }
                }
                descend(j + 1, next_marked);
            }
        }
        bump_reuse(j, -1);
        --selected_;
    }

    bool reuse_allows(std::size_t j) const {
        if (!context_) return true;
        const auto& existing = context_->existing();
        for (std::size_t l = 0; l < existing.size(); ++l) {
            if (existing[l].selection[j] && reuse_[l] + 1 > context_->reuse_budget(l)) return false;
        }
        return true;
    }

    void bump_reuse(std::size_t j, int delta) {
        if (!context_) return;
        const auto& existing = context_->existing();
        for (std::size_t l = 0; l < existing.size(); ++l) {
            if (existing[l].selection[j]) reuse_[l] += delta;
        }
    }

    void offer(std::size_t members, std::size_t marked) {
        const double q = objective_.from_counts({data_.rows(), marked_total_, members, marked});
        if (have_best_) {
            if (q < best_q_) return;
            if (q == best_q_) {
                if (selected_ > best_selected_) return;
                if (selected_ == best_selected_ && !(lo_ < best_lo_ || (lo_ == best_lo_ && hi_ < best_hi_))) {
                    return;
                }
            }
        }
        have_best_ = true;
        best_q_ = q;
        best_selected_ = selected_;
        best_lo_ = lo_;
        best_hi_ = hi_;
    }

    SubgroupDescription describe(const std::vector<std::size_t>& lo,
                                 const std::vector<std::size_t>& hi) const {
        std::vector<Bound> lower, upper;
        for (std::size_t j = 0; j < data_.cols(); ++j) {
            const auto& values = data_.unique_values(j);
            lower.push_back(lo[j] == 0 ? Bound::neg_inf() : Bound::finite(values[lo[j]]));
            upper.push_back(hi[j] == values.size() - 1 ? Bound::pos_inf() : Bound::finite(values[hi[j]]));
        }
        return SubgroupDescription(std::move(lower), std::move(upper));
    }

    const Dataset& data_;
    const QualityFunction& objective_;
    std::span<const std::uint8_t> marks_;
    std::size_t marked_total_ = 0;
    std::size_t k_;
    const AlternativesContext* context_;

    std::vector<std::size_t> lo_, hi_;
    std::vector<std::vector<std::uint32_t>> buffers_; // rows surviving features < depth
    std::size_t selected_ = 0;
    std::vector<std::size_t> reuse_;

    bool have_best_ = false;
    double best_q_ = 0.0;
    std::size_t best_selected_ = 0;
    std::vector<std::size_t> best_lo_, best_hi_;
};

void require_within_cap(const Dataset& dataset, const ExactConfig& config) {
    const auto estimate = estimate_candidates(dataset, config.k);
    if (estimate > config.candidate_cap) throw CandidateCapExceeded(estimate, config.candidate_cap);
}

} // namespace

std::uint64_t estimate_candidates(const Dataset& dataset, std::optional<std::size_t> k) {
    const std::size_t n = dataset.cols();
    const std::size_t limit = k ? std::min(*k, n) : n;
    // ways[t]: grid descriptions over the features seen so far with exactly t restricted
    std::vector<std::uint64_t> ways(limit + 1, 0);
    ways[0] = 1;
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t u = dataset.unique_values(j).size();
        const std::uint64_t restricted = u * (u + 1) / 2 - 1;
        for (std::size_t t = limit; t >= 1; --t) ways[t] = sat_add(ways[t], sat_mul(ways[t - 1], restricted));
    }
    std::uint64_t total = 0;
    for (auto w : ways) total = sat_add(total, w);
    return total;
}

SubgroupDescription exact_search(const Dataset& dataset, const ExactConfig& config) {
    config.validate();
    config.objective.check(dataset);
    require_within_cap(dataset, config);
    Enumerator search(dataset, config.objective, config.k.value_or(dataset.cols()), nullptr);
    return search.run();
}

SubgroupDescription exact_alternative(const Dataset& dataset, const AlternativesContext& context,
                                      const ExactConfig& config) {
    config.validate();
    if (context.empty()) throw std::invalid_argument("alternatives context holds no original subgroup");
    if (context.features() != dataset.cols() || context.original().membership.size() != dataset.rows()) {
        throw std::invalid_argument("alternatives context does not match the dataset dimensions");
    }
    require_within_cap(dataset, config);
    const auto objective = QualityFunction::hamming_to(context.original().membership);
    Enumerator search(dataset, objective, config.k.value_or(dataset.cols()), &context);
    return search.run();
}

} // namespace csd
