#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace csd {

/// An extended real used as an interval endpoint: a finite value, -inf or +inf.
class Bound {
  public:
    enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

    constexpr Bound() = default;

    static constexpr Bound neg_inf() { return Bound(Kind::NegInf, 0.0); }
    static constexpr Bound pos_inf() { return Bound(Kind::PosInf, 0.0); }
    static Bound finite(double value) {
        if (!(value > -std::numeric_limits<double>::infinity() &&
              value < std::numeric_limits<double>::infinity())) {
            throw std::invalid_argument("Bound::finite requires a finite value");
        }
        return Bound(Kind::Finite, value);
    }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }

    double value() const {
        if (!is_finite()) throw std::logic_error("Bound::value on an infinite bound");
        return value_;
    }

    /// IEEE view for hot comparison loops; infinities map to +-infinity.
    constexpr double as_double() const {
        switch (kind_) {
        case Kind::NegInf: return -std::numeric_limits<double>::infinity();
        case Kind::PosInf: return std::numeric_limits<double>::infinity();
        default: return value_;
        }
    }

    friend constexpr bool operator==(const Bound& a, const Bound& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
    }

    friend constexpr std::partial_ordering operator<=>(const Bound& a, const Bound& b) {
        if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
        if (a.kind_ != Kind::Finite) return std::partial_ordering::equivalent;
        return a.value_ <=> b.value_;
    }

    friend constexpr std::partial_ordering operator<=>(const Bound& a, double x) {
        return a.as_double() <=> x;
    }
    friend constexpr bool operator==(const Bound& a, double x) {
        return a.is_finite() && a.value_ == x;
    }

    /// "-inf", "+inf" or the shortest round-trip decimal of the value.
    std::string to_string() const;
    /// Inverse of to_string; also accepts "inf"/"-inf"/"+inf" spellings.
    static Bound parse(const std::string& text);

  private:
    constexpr Bound(Kind kind, double value) : kind_(kind), value_(value) {}

    Kind kind_ = Kind::NegInf;
    double value_ = 0.0;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

} // namespace csd
