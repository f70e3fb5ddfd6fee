#ifndef RIGIDLAB_SCALAR_HPP
#define RIGIDLAB_SCALAR_HPP

#include <cctype>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "rigidlab/errors.hpp"

namespace rigidlab {

/// A real number that remembers whether it is known exactly.
///
/// Exact scalars carry a GMP rational and a cached double; arithmetic between
/// two exact scalars stays exact. As soon as one operand is a floating value
/// the result is floating. Exact-mode linear algebra refuses floating entries.
class Scalar {
public:
    Scalar() : value_(0.0), exact_(mpq_class(0)) {}
    Scalar(int v) : value_(v), exact_(mpq_class(v)) {}  // NOLINT: integer literals are exact
    Scalar(long v) : value_(static_cast<double>(v)), exact_(mpq_class(v)) {}  // NOLINT

    static Scalar exact(mpq_class q) {
        q.canonicalize();
        Scalar s;
        s.value_ = q.get_d();
        s.exact_ = std::move(q);
        return s;
    }

    static Scalar exact(long num, long den) {
        if (den == 0) throw InvalidInputError("zero denominator");
        return exact(mpq_class(mpz_class(num), mpz_class(den)));
    }

    /// Exact rational equal to the binary value of `v` (finite doubles are dyadic rationals).
    static Scalar exact_from_double(double v) {
        if (!std::isfinite(v)) throw ArithmeticModeError("non-finite value has no rational form");
        return exact(mpq_class(v));
    }

    static Scalar real(double v) {
        Scalar s;
        s.value_ = v;
        s.exact_.reset();
        return s;
    }

    bool is_exact() const noexcept { return exact_.has_value(); }
    double value() const noexcept { return value_; }

    const mpq_class& rational() const {
        if (!exact_) throw ArithmeticModeError("scalar is not an exact rational");
        return *exact_;
    }

    bool is_zero() const { return exact_ ? sgn(*exact_) == 0 : value_ == 0.0; }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return exact(mpq_class(*a.exact_ + *b.exact_));
        return real(a.value_ + b.value_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return exact(mpq_class(*a.exact_ - *b.exact_));
        return real(a.value_ - b.value_);
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return exact(mpq_class(*a.exact_ * *b.exact_));
        return real(a.value_ * b.value_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) {
            if (sgn(*b.exact_) == 0) throw InvalidInputError("division by exact zero");
            return exact(mpq_class(*a.exact_ / *b.exact_));
        }
        return real(a.value_ / b.value_);
    }
    friend Scalar operator-(const Scalar& a) {
        if (a.exact_) return exact(mpq_class(-*a.exact_));
        return real(-a.value_);
    }

    /// Exact comparison when both sides are exact, otherwise on doubles.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
        return a.value_ == b.value_;
    }

    std::string to_string() const {
        if (exact_) return exact_->get_str();
        return std::to_string(value_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
        return os << s.to_string();
    }

private:
    double value_;
    std::optional<mpq_class> exact_;
};

using Vector = std::vector<Scalar>;
using Point = Vector;

inline bool all_exact(const Vector& v) {
    for (const auto& s : v)
        if (!s.is_exact()) return false;
    return true;
}

inline std::vector<double> to_doubles(const Vector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(s.value());
    return out;
}

inline Vector to_reals(const std::vector<double>& v) {
    Vector out;
    out.reserve(v.size());
    for (double x : v) out.push_back(Scalar::real(x));
    return out;
}

/// |a - b| <= tol, evaluated exactly when both are exact. tol = 0 means equality.
inline bool within(const Scalar& a, const Scalar& b, double tol) {
    if (a.is_exact() && b.is_exact()) {
        mpq_class diff = a.rational() - b.rational();
        if (sgn(diff) == 0) return true;
        return abs(diff) <= mpq_class(tol);
    }
    return std::abs(a.value() - b.value()) <= tol;
}

inline Scalar squared_distance(const Point& p, const Point& q) {
    Scalar acc(0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        Scalar diff = p[i] - q[i];
        acc += diff * diff;
    }
    return acc;
}

/// Parses "p/q", an integer, or a decimal such as "-1.25e-3" into an exact rational.
inline Scalar parse_rational(std::string_view text) {
    auto fail = [&]() -> Scalar {
        throw ParseError("not a rational literal: '" + std::string(text) + "'");
    };
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) return fail();

    if (auto slash = s.find('/'); slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            return fail();
        if (den == 0) return fail();
        return Scalar::exact(mpq_class(num, den));
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_digit = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
        digits += s[i];
        seen_digit = true;
    }
    if (i < s.size() && s[i] == '.') {
        for (++i; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
            digits += s[i];
            --scale;
            seen_digit = true;
        }
    }
    if (!seen_digit) return fail();
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        const std::string exponent = s.substr(i);
        if (exponent.empty()) return fail();
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(exponent, &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != exponent.size() || e > 4096 || e < -4096) return fail();
        scale += e;
        i = s.size();
    }
    if (i != s.size()) return fail();

    mpz_class num(digits, 10);
    if (negative) num = -num;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    mpq_class q = scale < 0 ? mpq_class(num, pow10) : mpq_class(num * pow10);
    return Scalar::exact(q);
}

}  // namespace rigidlab

#endif  // RIGIDLAB_SCALAR_HPP
