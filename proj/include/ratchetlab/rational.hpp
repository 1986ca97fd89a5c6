#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ratchetlab {

/// Exact rational number with canonical form (reduced, positive denominator).
///
/// Durations and the lattice asymmetry must stay exact: the step-count
/// construction breaks if they are silently rounded to double. Keep values
/// small (int64 numerator/denominator); arithmetic here is deliberately
/// minimal.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;

    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    explicit Rational(std::int64_t n) : num(n), den(1) {}

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }
    bool positive() const { return num > 0; }

    friend bool operator==(const Rational&, const Rational&) = default;

    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
    Rational operator*(std::int64_t k) const { return {num * k, den}; }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
        return {num * o.den, den * o.num};
    }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

/// Parses "p/q" or a plain decimal ("2.4" becomes 12/5 exactly).
/// Scientific notation is rejected; decimals are converted digit-exactly.
Rational parse_rational(const std::string& text);

}  // namespace ratchetlab
