#include "csd/bound.hpp"

#include <array>
#include <charconv>
#include <system_error>

namespace csd {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf.data(), ptr};
}

std::string Bound::to_string() const {
    switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "+inf";
    default: return format_double(value_);
    }
}

Bound Bound::parse(const std::string& text) {
    if (text == "-inf" || text == "-Infinity") return neg_inf();
    if (text == "+inf" || text == "inf" || text == "Infinity") return pos_inf();
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("cannot parse bound '" + text + "'");
    }
    return finite(value);
}

} // namespace csd
