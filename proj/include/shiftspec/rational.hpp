#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>

#include "shiftspec/errors.hpp"

namespace shiftspec {

// Arbitrary-precision rational, always stored reduced with positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline Rational rational_pow(const Rational& base, long n) {
    if (n == 0) return Rational(1);
    if (base == 0) {
        if (n < 0) throw DivisionByZero("0 cannot be raised to a negative power");
        return Rational(0);
    }
    Rational b = n > 0 ? base : Rational(1) / base;
    unsigned long e = static_cast<unsigned long>(n > 0 ? n : -n);
    Rational acc(1);
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

namespace detail {

// Parses an integer or "p/q" from s[pos..), advancing pos. Accepts a leading sign.
inline Rational parse_rational_at(std::string_view s, std::size_t& pos) {
    auto parse_int = [&](bool sign_ok) -> BigInt {
        bool negative = false;
        if (sign_ok && pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            negative = s[pos] == '-';
            ++pos;
        }
        std::size_t digits = 0;
        BigInt value = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            value = value * 10 + (s[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) throw PreconditionViolation("expected integer in rational literal: '" + std::string(s) + "'");
        return negative ? BigInt(-value) : value;
    };
    BigInt num = parse_int(true);
    BigInt den = 1;
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        den = parse_int(false);
        if (den == 0) throw DivisionByZero("zero denominator in rational literal: '" + std::string(s) + "'");
    }
    return Rational(num, den);
}

inline std::string strip_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

}  // namespace detail

// Parses "p/q" with optional sign; whitespace-insensitive.
inline Rational parse_rational(std::string_view text) {
    std::string s = detail::strip_ws(text);
    std::size_t pos = 0;
    Rational r = detail::parse_rational_at(s, pos);
    if (pos != s.size()) throw PreconditionViolation("trailing characters in rational literal: '" + std::string(text) + "'");
    return r;
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Exact complex number with rational real and imaginary parts.
struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational real) : re(std::move(real)) {}  // NOLINT: implicit by design
    ComplexRational(long real) : re(real) {}                 // NOLINT
    ComplexRational(int real) : re(real) {}                  // NOLINT
    ComplexRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}

    static ComplexRational i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    ComplexRational conj() const { return {re, -im}; }
    Rational abs_sq() const { return re * re + im * im; }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
        Rational d = b.abs_sq();
        if (d == 0) throw DivisionByZero("complex rational division by zero");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    ComplexRational& operator+=(const ComplexRational& o) { return *this = *this + o; }
    ComplexRational& operator-=(const ComplexRational& o) { return *this = *this - o; }
    ComplexRational& operator*=(const ComplexRational& o) { return *this = *this * o; }
    ComplexRational& operator/=(const ComplexRational& o) { return *this = *this / o; }

    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

    ComplexRational pow(long n) const {
        if (n == 0) return ComplexRational(1);
        ComplexRational b = *this;
        if (n < 0) {
            if (is_zero()) throw DivisionByZero("0 cannot be raised to a negative power");
            b = ComplexRational(1) / b;
        }
        unsigned long e = static_cast<unsigned long>(n > 0 ? n : -n);
        ComplexRational acc(1);
        while (e) {
            if (e & 1) acc *= b;
            b *= b;
            e >>= 1;
        }
        return acc;
    }

    std::string str() const {
        if (im == 0) return to_string(re);
        std::string s = to_string(re);
        if (im > 0) s += "+";
        return s + to_string(im) + " i";
    }
};

// Parses "p/q", "p/q+r/s i" or "r/s i" with optional signs; whitespace-insensitive.
inline ComplexRational parse_complex_rational(std::string_view text) {
    std::string s = detail::strip_ws(text);
    if (s.empty()) throw PreconditionViolation("empty rational literal");
    std::size_t pos = 0;
    Rational first = detail::parse_rational_at(s, pos);
    if (pos == s.size()) return ComplexRational(first);
    if (s[pos] == 'i' && pos + 1 == s.size()) return {Rational(0), first};
    if (s[pos] != '+' && s[pos] != '-')
        throw PreconditionViolation("malformed complex rational literal: '" + std::string(text) + "'");
    Rational second = detail::parse_rational_at(s, pos);
    if (!(pos + 1 == s.size() && s[pos] == 'i'))
        throw PreconditionViolation("imaginary part must end with 'i': '" + std::string(text) + "'");
    return {first, second};
}

inline std::ostream& operator<<(std::ostream& os, const ComplexRational& z) { return os << z.str(); }

}  // namespace shiftspec
