#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fdl {

// All times, costs and quantities in a factory document carry at most one
// decimal digit.  They are stored as exact integer counts of tenths so that
// schedule arithmetic never drifts: "2833.5" is 28335 tenths, and summing
// per-cut values reproduces the process-level total bit for bit.
template <class Tag>
class Fixed1 {
public:
    constexpr Fixed1() = default;

    static constexpr Fixed1 fromTenths(std::int64_t tenths) { return Fixed1(tenths); }
    static constexpr Fixed1 fromWhole(std::int64_t units) { return Fixed1(units * 10); }

    // Accepts "550", "550.5"; rejects negatives, multiple decimals and
    // anything with more than one fractional digit.
    static std::optional<Fixed1> parse(std::string_view text)
    {
        std::size_t i = 0;
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
            ++i;
        std::size_t end = text.size();
        while (end > i && (text[end - 1] == ' ' || text[end - 1] == '\t'))
            --end;
        if (i == end)
            return std::nullopt;
        std::int64_t whole = 0;
        bool sawDigit = false;
        int digits = 0;
        for (; i < end && text[i] != '.'; ++i) {
            if (text[i] < '0' || text[i] > '9')
                return std::nullopt;
            if (++digits > 15) // keeps whole*10+9 well inside int64
                return std::nullopt;
            whole = whole * 10 + (text[i] - '0');
            sawDigit = true;
        }
        std::int64_t frac = 0;
        if (i < end) { // at '.'
            ++i;
            if (i + 1 != end || text[i] < '0' || text[i] > '9')
                return std::nullopt;
            frac = text[i] - '0';
        }
        if (!sawDigit)
            return std::nullopt;
        return Fixed1(whole * 10 + frac);
    }

    // Always renders with one decimal digit: 5505 tenths -> "550.5".
    std::string str() const
    {
        std::string s = std::to_string(tenths_ / 10);
        s += '.';
        s += static_cast<char>('0' + tenths_ % 10);
        return s;
    }

    constexpr std::int64_t tenths() const { return tenths_; }
    constexpr bool isZero() const { return tenths_ == 0; }

    friend constexpr Fixed1 operator+(Fixed1 a, Fixed1 b) { return Fixed1(a.tenths_ + b.tenths_); }
    friend constexpr Fixed1 operator-(Fixed1 a, Fixed1 b) { return Fixed1(a.tenths_ - b.tenths_); }
    constexpr Fixed1& operator+=(Fixed1 o)
    {
        tenths_ += o.tenths_;
        return *this;
    }
    friend constexpr auto operator<=>(Fixed1, Fixed1) = default;

private:
    explicit constexpr Fixed1(std::int64_t t)
        : tenths_(t)
    {
    }
    std::int64_t tenths_ = 0;
};

// One shared axis for instants and durations: both are tenths of a minute
// measured from the start of manufacturing.
using Time = Fixed1<struct TimeTag>;
using TimePoint = Time;
using Duration = Time;
using Money = Fixed1<struct MoneyTag>;
using Energy = Fixed1<struct EnergyTag>;
using Quantity = Fixed1<struct QuantityTag>; // tenths of a tonne

} // namespace fdl
