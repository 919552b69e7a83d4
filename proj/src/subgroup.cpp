#include "csd/subgroup.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace csd {

namespace {

void require_dims(const SubgroupDescription& desc, const Dataset& dataset) {
    if (desc.size() != dataset.cols()) {
        throw std::invalid_argument("description has " + std::to_string(desc.size()) +
                                    " features, dataset has " + std::to_string(dataset.cols()));
    }
}

nlohmann::json bound_json(const Bound& b) {
    if (b.is_neg_inf()) return "-inf";
    if (b.is_pos_inf()) return "+inf";
    return b.value();
}

Bound bound_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Bound::parse(j.get<std::string>());
    if (j.is_number()) return Bound::finite(j.get<double>());
    throw std::invalid_argument("bound must be a number or an infinity string");
}

} // namespace

SubgroupDescription::SubgroupDescription(std::vector<Bound> lower, std::vector<Bound> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) {
        throw std::invalid_argument("lower and upper bound vectors differ in length");
    }
    if (is_sentinel()) return;
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!(lower_[j] <= upper_[j]) || lower_[j].is_pos_inf() || upper_[j].is_neg_inf()) {
            throw std::invalid_argument("invalid interval for feature " + std::to_string(j) + ": [" +
                                        lower_[j].to_string() + ", " + upper_[j].to_string() + "]");
        }
    }
}

SubgroupDescription SubgroupDescription::unrestricted(std::size_t features) {
    return {std::vector<Bound>(features, Bound::neg_inf()),
            std::vector<Bound>(features, Bound::pos_inf())};
}

SubgroupDescription SubgroupDescription::empty_sentinel(std::size_t features) {
    return {std::vector<Bound>(features, Bound::pos_inf()),
            std::vector<Bound>(features, Bound::neg_inf())};
}

bool SubgroupDescription::is_sentinel() const {
    if (lower_.empty()) return false;
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!lower_[j].is_pos_inf() || !upper_[j].is_neg_inf()) return false;
    }
    return true;
}

bool SubgroupDescription::is_unrestricted() const {
    for (std::size_t j = 0; j < lower_.size(); ++j) {
        if (!lower_[j].is_neg_inf() || !upper_[j].is_pos_inf()) return false;
    }
    return true;
}

SubgroupDescription SubgroupDescription::with_interval(std::size_t j, Bound lower,
                                                       Bound upper) const {
    auto lo = lower_;
    auto hi = upper_;
    lo.at(j) = lower;
    hi.at(j) = upper;
    return {std::move(lo), std::move(hi)};
}

bool lexicographically_less(const SubgroupDescription& a, const SubgroupDescription& b) {
    auto cmp = [](const Bound& x, const Bound& y) { return x < y; };
    if (a.lower() != b.lower()) {
        return std::lexicographical_compare(a.lower().begin(), a.lower().end(), b.lower().begin(),
                                            b.lower().end(), cmp);
    }
    return std::lexicographical_compare(a.upper().begin(), a.upper().end(), b.upper().begin(),
                                        b.upper().end(), cmp);
}

BitVector membership(const SubgroupDescription& desc, const Dataset& dataset) {
    require_dims(desc, dataset);
    BitVector member(dataset.rows(), desc.is_sentinel() ? 0 : 1);
    if (desc.is_sentinel()) return member;
    for (std::size_t j = 0; j < dataset.cols(); ++j) {
        const double lo = desc.lower(j).as_double();
        const double hi = desc.upper(j).as_double();
        if (desc.lower(j).is_neg_inf() && desc.upper(j).is_pos_inf()) continue;
        auto col = dataset.column(j);
        for (std::size_t i = 0; i < dataset.rows(); ++i) {
            if (col[i] < lo || col[i] > hi) member[i] = 0;
        }
    }
    return member;
}

BitVector selected_features(const SubgroupDescription& desc, const Dataset& dataset) {
    require_dims(desc, dataset);
    BitVector selection(dataset.cols(), 0);
    if (desc.is_sentinel()) return selection;
    for (std::size_t j = 0; j < dataset.cols(); ++j) {
        selection[j] = (desc.lower(j) > dataset.column_min(j) ||
                        desc.upper(j) < dataset.column_max(j))
                           ? 1
                           : 0;
    }
    return selection;
}

std::size_t count_ones(std::span<const std::uint8_t> bits) {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                  [](std::uint8_t b) { return b != 0; }));
}

SubgroupEvaluation evaluate(const SubgroupDescription& desc, const Dataset& dataset) {
    SubgroupEvaluation eval;
    eval.membership = membership(desc, dataset);
    eval.selection = selected_features(desc, dataset);
    for (std::size_t i = 0; i < dataset.rows(); ++i) {
        if (!eval.membership[i]) continue;
        ++eval.members;
        eval.positive_members += dataset.target()[i];
    }
    return eval;
}

SubgroupDescription postprocess_bounds(const SubgroupDescription& desc, const Dataset& dataset) {
    auto member = membership(desc, dataset);
    if (count_ones(member) == 0) return SubgroupDescription::empty_sentinel(dataset.cols());

    std::vector<Bound> lower(desc.lower());
    std::vector<Bound> upper(desc.upper());
    for (std::size_t j = 0; j < dataset.cols(); ++j) {
        const bool keep_lower = lower[j].is_finite() && lower[j] > dataset.column_min(j);
        const bool keep_upper = upper[j].is_finite() && upper[j] < dataset.column_max(j);
        if (!keep_lower && !keep_upper) {
            lower[j] = Bound::neg_inf();
            upper[j] = Bound::pos_inf();
            continue;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        auto col = dataset.column(j);
        for (std::size_t i = 0; i < dataset.rows(); ++i) {
            if (!member[i]) continue;
            lo = std::min(lo, col[i]);
            hi = std::max(hi, col[i]);
        }
        lower[j] = keep_lower ? Bound::finite(lo) : Bound::neg_inf();
        upper[j] = keep_upper ? Bound::finite(hi) : Bound::pos_inf();
    }
    return {std::move(lower), std::move(upper)};
}

bool is_perfect(std::span<const std::uint8_t> member, std::span<const std::uint8_t> target) {
    if (member.size() != target.size()) {
        throw std::invalid_argument("membership and target differ in length");
    }
    return std::equal(member.begin(), member.end(), target.begin());
}

std::string to_json(const SubgroupDescription& desc) {
    nlohmann::json j;
    j["lb"] = nlohmann::json::array();
    j["ub"] = nlohmann::json::array();
    for (std::size_t f = 0; f < desc.size(); ++f) {
        j["lb"].push_back(bound_json(desc.lower(f)));
        j["ub"].push_back(bound_json(desc.upper(f)));
    }
    return j.dump();
}

SubgroupDescription description_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<Bound> lower;
    std::vector<Bound> upper;
    for (const auto& b : j.at("lb")) lower.push_back(bound_from_json(b));
    for (const auto& b : j.at("ub")) upper.push_back(bound_from_json(b));
    return {std::move(lower), std::move(upper)};
}

} // namespace csd
