#pragma once

// Exact rational arithmetic over 64-bit integers. All intermediate products
// are taken in 128 bits and reduced; a reduced value that no longer fits in
// 64 bits throws OverflowGuard instead of wrapping.

#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <string>

#include "latstat/errors.hpp"

namespace latstat {

namespace detail {

using int128 = __int128;

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace detail

class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(std::int64_t n) : num_(n), den_(1) {}
    Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

    static Rat make(detail::int128 n, detail::int128 d) {
        if (d == 0) throw Error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) return Rat{};
        detail::int128 g = detail::gcd128(n, d);
        n /= g;
        d /= g;
        constexpr detail::int128 lo = INT64_MIN;
        constexpr detail::int128 hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw OverflowGuard("rational overflow: reduced value exceeds 64 bits");
        Rat r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    // Largest integer <= value.
    std::int64_t floor() const {
        if (num_ >= 0) return num_ / den_;
        return -((-num_ + den_ - 1) / den_);
    }

    friend Rat operator-(const Rat& r) { return make(-(detail::int128)r.num_, r.den_); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make((detail::int128)a.num_ * b.den_ + (detail::int128)b.num_ * a.den_,
                    (detail::int128)a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return make((detail::int128)a.num_ * b.den_ - (detail::int128)b.num_ * a.den_,
                    (detail::int128)a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make((detail::int128)a.num_ * b.num_, (detail::int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw Error("rational division by zero");
        return make((detail::int128)a.num_ * b.den_, (detail::int128)a.den_ * b.num_);
    }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (detail::int128)a.num_ * b.den_ < (detail::int128)b.num_ * a.den_;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
        os << r.num_;
        if (r.den_ != 1) os << '/' << r.den_;
        return os;
    }

private:
    std::int64_t num_{0};
    std::int64_t den_{1};
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

} // namespace latstat
