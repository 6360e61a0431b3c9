#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "shiftspec/rational.hpp"

namespace shiftspec {

// Coefficients j >= start follow scale * ratio^(j - start).
struct GeometricTail {
    ComplexRational scale;
    ComplexRational ratio;
    std::size_t start = 0;
};

// Formal power series over complex rationals: an exact coefficient prefix plus
// an optional geometric tail. With a tail present the prefix covers exactly
// the degrees below the tail start, so coefficient queries are total.
class PowerSeries {
  public:
    PowerSeries() = default;

    explicit PowerSeries(std::vector<ComplexRational> prefix) : prefix_(std::move(prefix)) {}

    PowerSeries(std::vector<ComplexRational> prefix, GeometricTail tail)
        : prefix_(std::move(prefix)), tail_(std::move(tail)) {
        if (prefix_.size() != tail_->start)
            throw PreconditionViolation("geometric tail must start right after the prefix");
    }

    static PowerSeries zero() { return PowerSeries(); }
    static PowerSeries constant(ComplexRational c) { return PowerSeries({std::move(c)}); }
    static PowerSeries monomial(std::size_t degree, ComplexRational c = ComplexRational(1)) {
        std::vector<ComplexRational> p(degree + 1);
        p[degree] = std::move(c);
        return PowerSeries(std::move(p));
    }

    const std::vector<ComplexRational>& prefix() const { return prefix_; }
    const std::optional<GeometricTail>& tail() const { return tail_; }

    ComplexRational coeff(std::size_t j) const {
        if (j < prefix_.size()) return prefix_[j];
        if (tail_ && !tail_->scale.is_zero())
            return tail_->scale * tail_->ratio.pow(static_cast<long>(j - tail_->start));
        return ComplexRational(0);
    }

    bool is_polynomial() const { return !tail_ || tail_->scale.is_zero(); }

    // Degree of a polynomial series; 0 for the zero series.
    std::size_t degree() const {
        if (!is_polynomial()) throw PreconditionViolation("degree() requires a polynomial series");
        for (std::size_t j = prefix_.size(); j-- > 0;)
            if (!prefix_[j].is_zero()) return j;
        return 0;
    }

    bool is_zero() const {
        if (!is_polynomial()) return false;
        for (const auto& c : prefix_)
            if (!c.is_zero()) return false;
        return true;
    }

    std::vector<ComplexRational> materialize(std::size_t count) const {
        std::vector<ComplexRational> out(count);
        for (std::size_t j = 0; j < count; ++j) out[j] = coeff(j);
        return out;
    }

    // Same series with the prefix extended through degree d; the tail, if any, keeps going.
    PowerSeries with_prefix_through(std::size_t d) const {
        if (d + 1 <= prefix_.size()) return *this;
        std::vector<ComplexRational> p = materialize(d + 1);
        if (tail_ && !tail_->scale.is_zero()) {
            GeometricTail t{tail_->scale * tail_->ratio.pow(static_cast<long>(d + 1 - tail_->start)),
                            tail_->ratio, d + 1};
            return PowerSeries(std::move(p), std::move(t));
        }
        return PowerSeries(std::move(p));
    }

  private:
    std::vector<ComplexRational> prefix_;
    std::optional<GeometricTail> tail_;
};

// Cauchy product, exact through degree d; the result carries no tail.
inline PowerSeries mul_truncated(const PowerSeries& f, const PowerSeries& g, std::size_t d) {
    std::vector<ComplexRational> out(d + 1);
    for (std::size_t j = 0; j <= d; ++j) {
        ComplexRational s(0);
        for (std::size_t k = 0; k <= j; ++k) s += f.coeff(k) * g.coeff(j - k);
        out[j] = s;
    }
    return PowerSeries(std::move(out));
}

// sum_j (z/b)^j as a pure geometric tail.
inline PowerSeries geometric_series(const ComplexRational& b) {
    if (b.is_zero()) throw DivisionByZero("geometric_series requires b != 0");
    return PowerSeries({}, GeometricTail{ComplexRational(1), ComplexRational(1) / b, 0});
}

// Exact Horner evaluation of a polynomial series.
inline ComplexRational poly_eval(const PowerSeries& f, const ComplexRational& w) {
    if (!f.is_polynomial()) throw PreconditionViolation("poly_eval requires a polynomial series");
    ComplexRational acc(0);
    for (std::size_t j = f.prefix().size(); j-- > 0;) acc = acc * w + f.prefix()[j];
    return acc;
}

// For polynomial f of degree n with f(0) != 0, the series with coefficients
// sum_{i<=j} fhat(j-i)/f(0)^i is eventually geometric:
//   coefficient(j) = f(f(0)) / f(0)^j  for j >= n.
inline GeometricTail tail_closed_form(const PowerSeries& f) {
    if (!f.is_polynomial()) throw PreconditionViolation("tail_closed_form requires a polynomial");
    ComplexRational f0 = f.coeff(0);
    if (f0.is_zero()) throw PreconditionViolation("tail_closed_form requires f(0) != 0");
    std::size_t n = f.degree();
    ComplexRational q = ComplexRational(1) / f0;
    ComplexRational s = poly_eval(f, f0) * q.pow(static_cast<long>(n));
    return GeometricTail{std::move(s), std::move(q), n};
}

// Series with coefficients h0hat(j) = sum_{i<=j} fhat(j-i)/c^i, computed via the
// recursion h0hat(j) = fhat(j) + h0hat(j-1)/c. For polynomial f the closed
// geometric tail (scale f(c)/c^n, ratio 1/c) is attached from degree n on; for
// non-polynomial f only the exact prefix through degree d is produced.
inline PowerSeries h0_series(const PowerSeries& f, const ComplexRational& c, std::size_t d) {
    if (c.is_zero()) throw DivisionByZero("h0_series requires c != 0");
    ComplexRational inv_c = ComplexRational(1) / c;
    auto prefix_through = [&](std::size_t last) {
        std::vector<ComplexRational> p(last + 1);
        ComplexRational prev(0);
        for (std::size_t j = 0; j <= last; ++j) {
            p[j] = f.coeff(j) + prev * inv_c;
            prev = p[j];
        }
        return p;
    };
    if (f.is_polynomial()) {
        std::size_t n = f.degree();
        ComplexRational scale = poly_eval(f, c) * inv_c.pow(static_cast<long>(n));
        if (n == 0) return PowerSeries({}, GeometricTail{std::move(scale), inv_c, 0});
        return PowerSeries(prefix_through(n - 1), GeometricTail{std::move(scale), inv_c, n});
    }
    return PowerSeries(prefix_through(d));
}

inline PowerSeries add(const PowerSeries& a, const PowerSeries& b, std::size_t d) {
    std::vector<ComplexRational> out(d + 1);
    for (std::size_t j = 0; j <= d; ++j) out[j] = a.coeff(j) + b.coeff(j);
    return PowerSeries(std::move(out));
}

inline PowerSeries scale(const PowerSeries& a, const ComplexRational& s) {
    std::vector<ComplexRational> p = a.prefix();
    for (auto& c : p) c *= s;
    if (a.tail()) return PowerSeries(std::move(p), GeometricTail{a.tail()->scale * s, a.tail()->ratio, a.tail()->start});
    return PowerSeries(std::move(p));
}

}  // namespace shiftspec
