#pragma once

#include <compare>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace sars {

// Fixed-point simulation time. One time unit is split into kQuantaPerUnit
// quanta so that sums of delays are exact and traces are reproducible.
class SimTime {
public:
    static constexpr std::int64_t kQuantaPerUnit = 1000;

    constexpr SimTime() = default;

    static constexpr SimTime from_quanta(std::int64_t q) { return SimTime(q); }
    static SimTime from_units(double units) {
        return SimTime(static_cast<std::int64_t>(std::llround(units * kQuantaPerUnit)));
    }
    static constexpr SimTime whole_units(std::int64_t units) { return SimTime(units * kQuantaPerUnit); }
    static constexpr SimTime max() { return SimTime(std::numeric_limits<std::int64_t>::max()); }

    constexpr std::int64_t quanta() const { return q_; }
    constexpr double units() const { return static_cast<double>(q_) / kQuantaPerUnit; }

    // Smallest whole unit >= this instant.
    constexpr SimTime ceil_unit() const {
        std::int64_t whole = q_ / kQuantaPerUnit;
        if (whole * kQuantaPerUnit < q_) ++whole;
        return whole_units(whole);
    }

    constexpr SimTime& operator+=(SimTime o) { q_ += o.q_; return *this; }
    constexpr SimTime& operator-=(SimTime o) { q_ -= o.q_; return *this; }
    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime(a.q_ + b.q_); }
    friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime(a.q_ - b.q_); }
    friend constexpr auto operator<=>(SimTime, SimTime) = default;

    // "12.345" style, always three decimals.
    std::string str() const;

private:
    constexpr explicit SimTime(std::int64_t q) : q_(q) {}
    std::int64_t q_ = 0;
};

inline SimTime max(SimTime a, SimTime b) { return a < b ? b : a; }
inline SimTime min(SimTime a, SimTime b) { return a < b ? a : b; }

} // namespace sars
