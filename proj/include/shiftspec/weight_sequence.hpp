#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftspec/power_series.hpp"
#include "shiftspec/rational.hpp"

namespace shiftspec {

enum class SpaceKind { hardy, bergman, dirichlet, custom };

inline const char* to_string(SpaceKind k) {
    switch (k) {
        case SpaceKind::hardy: return "hardy";
        case SpaceKind::bergman: return "bergman";
        case SpaceKind::dirichlet: return "dirichlet";
        case SpaceKind::custom: return "custom";
    }
    return "?";
}

// Diagonal-kernel data: a_j > 0 with a_0 = 1, ||z^j||^2 = 1/a_j, shift weights
// w_j = sqrt(a_j / a_{j+1}). rho_min/rho_max bound the ratios a_j/a_{j+1};
// rho_max < inf makes M_z bounded, rho_min > 0 makes it bounded below.
class WeightSequence {
  public:
    static WeightSequence hardy() { return WeightSequence(SpaceKind::hardy, {}, Rational(1), Rational(1)); }
    static WeightSequence bergman() {
        return WeightSequence(SpaceKind::bergman, {}, Rational(1, 2), Rational(1));
    }
    static WeightSequence dirichlet() {
        return WeightSequence(SpaceKind::dirichlet, {}, Rational(1), Rational(2));
    }
    // Table of a_0..a_k; beyond the table the last ratio continues geometrically.
    static WeightSequence custom(std::vector<Rational> table, Rational rho_min, Rational rho_max) {
        return WeightSequence(SpaceKind::custom, std::move(table), std::move(rho_min), std::move(rho_max));
    }

    SpaceKind kind() const { return kind_; }
    bool named() const { return kind_ != SpaceKind::custom; }
    const Rational& rho_min() const { return rho_min_; }
    const Rational& rho_max() const { return rho_max_; }
    const std::vector<Rational>& table() const { return table_; }

    Rational weight(std::size_t j) const {
        switch (kind_) {
            case SpaceKind::hardy: return Rational(1);
            case SpaceKind::bergman: return Rational(j + 1);
            case SpaceKind::dirichlet: return Rational(1, j + 1);
            case SpaceKind::custom: break;
        }
        if (j < table_.size()) return table_[j];
        // geometric continuation by the last tabulated ratio a_{k}/a_{k-1}
        Rational growth = table_.size() >= 2 ? table_.back() / table_[table_.size() - 2] : Rational(1);
        return table_.back() * rational_pow(growth, static_cast<long>(j - (table_.size() - 1)));
    }

    // a_j / a_{j+1} = w_j^2
    Rational ratio(std::size_t j) const { return weight(j) / weight(j + 1); }

    double shift_weight(std::size_t j) const { return std::sqrt(to_double(ratio(j))); }

    // sqrt(a_j) as double, used by the orthonormal-basis float layer.
    double sqrt_weight(std::size_t j) const { return std::sqrt(to_double(weight(j))); }

  private:
    WeightSequence(SpaceKind kind, std::vector<Rational> table, Rational rho_min, Rational rho_max)
        : kind_(kind), table_(std::move(table)), rho_min_(std::move(rho_min)), rho_max_(std::move(rho_max)) {
        validate();
    }

    void validate() const {
        if (rho_min_ <= 0 || rho_max_ < rho_min_)
            throw InvalidSpace("ratio bounds must satisfy 0 < rho_min <= rho_max");
        if (kind_ == SpaceKind::custom) {
            if (table_.empty()) throw InvalidSpace("custom space needs a weight table");
            if (table_[0] != 1) throw InvalidSpace("a_0 must equal 1");
            for (std::size_t j = 0; j < table_.size(); ++j)
                if (table_[j] <= 0) throw InvalidSpace("weights must be positive (a_" + std::to_string(j) + ")");
            // the continuation beyond the table is geometric, so a few extra
            // samples pin its ratio as well
            std::size_t sample = std::min<std::size_t>(table_.size() + 4, kSampleLimit);
            for (std::size_t j = 0; j < sample; ++j) {
                Rational r = ratio(j);
                if (r < rho_min_ || r > rho_max_)
                    throw InvalidSpace("ratio a_" + std::to_string(j) + "/a_" + std::to_string(j + 1) +
                                       " outside declared [rho_min, rho_max]");
            }
        } else {
            // named spaces carry fixed bounds; spot-check rather than assume
            for (std::size_t j = 0; j <= 64; ++j) {
                Rational r = ratio(j);
                if (weight(j) <= 0 || r < rho_min_ || r > rho_max_)
                    throw InvalidSpace("named space violates its ratio bounds");
            }
            if (weight(0) != 1) throw InvalidSpace("a_0 must equal 1");
        }
    }

    static constexpr std::size_t kSampleLimit = 4096;

    SpaceKind kind_;
    std::vector<Rational> table_;
    Rational rho_min_;
    Rational rho_max_;
};

inline WeightSequence make_space(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::hardy: return WeightSequence::hardy();
        case SpaceKind::bergman: return WeightSequence::bergman();
        case SpaceKind::dirichlet: return WeightSequence::dirichlet();
        case SpaceKind::custom: throw InvalidSpace("custom space requires a table and ratio bounds");
    }
    throw InvalidSpace("unknown space kind");
}

enum class Membership { member, non_member, inconclusive };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::member: return "member";
        case Membership::non_member: return "non-member";
        case Membership::inconclusive: return "inconclusive";
    }
    return "?";
}

struct MembershipVerdict {
    Membership status = Membership::inconclusive;
    std::optional<Rational> norm_sq_exact;  // exact squared norm when available
    std::optional<double> norm_sq;          // float estimate when finite
    std::string reason;
};

struct NormSquared {
    std::optional<Rational> exact;  // set when the total is a closed form
    double value = 0.0;             // partial sum (plus exact tail when available)
    double tail_bound = 0.0;        // bound on the omitted mass
};

namespace detail {

// Exact partial sum  sum_{j<=d} |hhat(j)|^2 / a_j.
inline Rational norm_sq_partial(const PowerSeries& h, const WeightSequence& space, std::size_t d) {
    Rational sum(0);
    for (std::size_t j = 0; j <= d; ++j) {
        ComplexRational c = h.coeff(j);
        if (!c.is_zero()) sum += c.abs_sq() / space.weight(j);
    }
    return sum;
}

// Pure classification of sum |hhat(j)|^2/a_j from the tail model; no norms.
// The term ratio is |q|^2 a_j/a_{j+1}, bounded by [|q|^2 rho_min, |q|^2 rho_max].
inline Membership classify_tail(const PowerSeries& h, const WeightSequence& space, std::string* why) {
    auto set_why = [&](const std::string& s) {
        if (why) *why = s;
    };
    if (h.is_polynomial()) {
        set_why("finite sum");
        return Membership::member;
    }
    Rational t = h.tail()->ratio.abs_sq();
    if (t * space.rho_max() < 1) {
        set_why("ratio test: term ratio <= |q|^2 rho_max = " + to_string(t * space.rho_max()) + " < 1");
        return Membership::member;
    }
    if (t * space.rho_min() > 1) {
        set_why("ratio test: term ratio >= |q|^2 rho_min = " + to_string(t * space.rho_min()) + " > 1");
        return Membership::non_member;
    }
    if (space.named()) {
        if (t < 1) {
            set_why("comparison: a_j within polynomial factors of 1, sum |q|^{2j}/a_j converges for |q| < 1");
            return Membership::member;
        }
        set_why("comparison: terms |q|^{2j}/a_j do not tend to 0 for |q| >= 1 on this space");
        return Membership::non_member;
    }
    set_why("|q|^2 inside the declared ratio band of a custom space");
    return Membership::inconclusive;
}

}  // namespace detail

// ||h||^2 = sum_j |hhat(j)|^2 / a_j. Polynomials sum exactly on any space; a
// geometric tail sums exactly on the Hardy space when |q| < 1. Otherwise the
// partial sum through degree d is returned with a tail bound. A tail the
// classifier rejects (|q| >= 1, nonzero scale, non-member) signals Divergent.
inline NormSquared norm_sq(const PowerSeries& h, const WeightSequence& space, std::size_t d) {
    NormSquared out;
    if (h.is_polynomial()) {
        std::size_t last = h.prefix().empty() ? 0 : h.prefix().size() - 1;
        Rational total = detail::norm_sq_partial(h, space, std::max(d, last));
        out.exact = total;
        out.value = to_double(total);
        return out;
    }
    const GeometricTail& tail = *h.tail();
    Rational t = tail.ratio.abs_sq();
    Rational s2 = tail.scale.abs_sq();
    if (t >= 1 && detail::classify_tail(h, space, nullptr) == Membership::non_member)
        throw Divergent("geometric tail with |q| >= 1 diverges on this space");
    std::size_t start = std::max(d + 1, tail.start);
    if (space.kind() == SpaceKind::hardy && t < 1) {
        // exact: sum_{j>=start} s2 t^{j-n0} = s2 t^{start-n0} / (1-t)
        Rational head = detail::norm_sq_partial(h, space, start - 1);
        Rational tail_sum = s2 * rational_pow(t, static_cast<long>(start - tail.start)) / (1 - t);
        out.exact = head + tail_sum;
        out.value = to_double(*out.exact);
        return out;
    }
    Rational partial = detail::norm_sq_partial(h, space, d);
    out.value = to_double(partial);
    // 1/a_j <= rho_max^{j-d} / a_d for j > d, so the omitted mass is geometric
    // whenever t * rho_max < 1.
    Rational growth = t * space.rho_max();
    if (growth < 1) {
        std::size_t j0 = std::max(d + 1, tail.start);
        Rational first = s2 * rational_pow(t, static_cast<long>(j0 - tail.start)) / space.weight(d) *
                         rational_pow(space.rho_max(), static_cast<long>(j0 - d));
        out.tail_bound = to_double(first / (1 - growth));
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
    }
    return out;
}

// Decides convergence of sum |hhat(j)|^2/a_j from the tail model; members get
// their norm reported (exact where a closed form exists).
inline MembershipVerdict membership(const PowerSeries& h, const WeightSequence& space) {
    MembershipVerdict v;
    v.status = detail::classify_tail(h, space, &v.reason);
    if (v.status == Membership::member) {
        NormSquared n = norm_sq(h, space, 512);
        v.norm_sq_exact = n.exact;
        v.norm_sq = n.exact ? to_double(*n.exact) : n.value + n.tail_bound;
    }
    return v;
}

// Membership of 1/(b - z) = sum b^{-(j+1)} z^j.
inline MembershipVerdict resolvent_membership(const ComplexRational& b, const WeightSequence& space) {
    if (b.is_zero()) throw DivisionByZero("resolvent_membership requires b != 0");
    ComplexRational inv = ComplexRational(1) / b;
    PowerSeries series({}, GeometricTail{inv, inv, 0});
    return membership(series, space);
}

// e_n = a_n z^n satisfies <h, e_n> = hhat(n) under the diagonal Gram.
inline PowerSeries dual_basis_vector(const WeightSequence& space, std::size_t n) {
    return PowerSeries::monomial(n, ComplexRational(space.weight(n)));
}

}  // namespace shiftspec
