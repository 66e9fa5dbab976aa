#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ds {

// Thrown when a rational operation would overflow int64 after reduction.
struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact rational number with int64 numerator/denominator.
///
/// All schedule times and validity decisions use this type; comparisons are
/// exact, never tolerance-based. Intermediate products go through __int128 and
/// narrowing is checked, which is plenty for desk-scale instances (group
/// parameters are small powers of two, LP-derived values have power-of-two
/// denominators from the binary representation of doubles).
class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(std::int64_t n) : num_(n) {}
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    /// Exact conversion: every finite double is a dyadic rational. Magnitudes
    /// below 2^-62 (far under any meaningful time quantum here) collapse to 0
    /// instead of overflowing the denominator.
    static Rat from_double(double x) {
        if (!std::isfinite(x)) throw overflow_error("non-finite double");
        if (x == 0.0) return Rat(0);
        int exp = 0;
        double m = std::frexp(x, &exp);  // x = m * 2^exp, 0.5 <= |m| < 1
        // 53 doublings make the mantissa integral.
        auto num = static_cast<std::int64_t>(std::ldexp(m, 53));
        exp -= 53;
        while (num % 2 == 0 && exp < 0) {
            num /= 2;
            ++exp;
        }
        if (exp >= 0) {
            if (exp > 9) throw overflow_error("double too large for Rat");
            return Rat(num << exp);
        }
        if (exp < -62) return Rat(0);
        return Rat(num, std::int64_t(1) << -exp);
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Serialized form: "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    static Rat parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }

    bool is_integer() const { return den_ == 1; }

    /// Largest integer <= value.
    std::int64_t floor() const {
        if (num_ >= 0) return num_ / den_;
        return -((-num_ + den_ - 1) / den_);
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + Rat(-b.num_, b.den_); }
    friend Rat operator-(const Rat& a) { return Rat(-a.num_, a.den_); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

private:
    using i128 = __int128;

    static Rat make(i128 n, i128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) throw overflow_error("Rat overflow");
        Rat r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rat zero denominator");
        *this = make(num_, den_);
    }

    std::int64_t num_{0};
    std::int64_t den_{1};
};

}  // namespace ds
