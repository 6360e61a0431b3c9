#include <catch2/catch_amalgamated.hpp>

#include "shiftspec/weight_sequence.hpp"

using namespace shiftspec;

namespace {

PowerSeries scaled_geometric(const ComplexRational& b) {
    // 1/(b - z) = sum b^{-(j+1)} z^j
    ComplexRational inv = ComplexRational(1) / b;
    return PowerSeries({}, GeometricTail{inv, inv, 0});
}

}  // namespace

TEST_CASE("named spaces carry the expected weights and shift weights") {
    WeightSequence hardy = WeightSequence::hardy();
    WeightSequence bergman = WeightSequence::bergman();
    WeightSequence dirichlet = WeightSequence::dirichlet();

    CHECK(hardy.weight(5) == 1);
    CHECK(hardy.shift_weight(3) == Catch::Approx(1.0));

    CHECK(bergman.weight(5) == 6);
    CHECK(bergman.shift_weight(0) == Catch::Approx(std::sqrt(0.5)));

    CHECK(dirichlet.weight(5) == Rational(1, 6));
    CHECK(dirichlet.shift_weight(0) == Catch::Approx(std::sqrt(2.0)));

    CHECK(hardy.weight(0) == 1);
    CHECK(bergman.weight(0) == 1);
    CHECK(dirichlet.weight(0) == 1);
}

TEST_CASE("custom spaces validate the axioms") {
    CHECK_THROWS_AS(WeightSequence::custom({Rational(2)}, Rational(1, 2), Rational(2)), InvalidSpace);
    CHECK_THROWS_AS(WeightSequence::custom({Rational(1), Rational(-1)}, Rational(1, 2), Rational(2)),
                    InvalidSpace);
    CHECK_THROWS_AS(WeightSequence::custom({Rational(1), Rational(100)}, Rational(1, 2), Rational(2)),
                    InvalidSpace);
    WeightSequence ok = WeightSequence::custom({Rational(1), Rational(2)}, Rational(1, 2), Rational(1));
    CHECK(ok.weight(4) == 16);  // last-ratio continuation doubles forever
    CHECK(ok.ratio(10) == Rational(1, 2));
}

TEST_CASE("monomial norms follow the Gram structure") {
    WeightSequence bergman = WeightSequence::bergman();
    for (std::size_t j : {0ul, 1ul, 5ul, 17ul}) {
        NormSquared n = norm_sq(PowerSeries::monomial(j), bergman, j + 2);
        REQUIRE(n.exact.has_value());
        CHECK(*n.exact == Rational(1) / bergman.weight(j));
    }
}

TEST_CASE("norms of geometric series") {
    WeightSequence hardy = WeightSequence::hardy();
    NormSquared unit = norm_sq(PowerSeries::constant(ComplexRational(1)), hardy, 4);
    REQUIRE(unit.exact.has_value());
    CHECK(*unit.exact == 1);

    // 1/(2-z): coefficients 2^{-(j+1)}, Hardy norm^2 = 1/3
    NormSquared res = norm_sq(scaled_geometric(ComplexRational(2)), hardy, 16);
    REQUIRE(res.exact.has_value());
    CHECK(*res.exact == Rational(1, 3));

    // h0 for f=2: coefficients 2^{1-j}, Hardy norm^2 = 16/3
    PowerSeries h0 = h0_series(PowerSeries::constant(ComplexRational(2)), ComplexRational(2), 8);
    NormSquared nh = norm_sq(h0, hardy, 16);
    REQUIRE(nh.exact.has_value());
    CHECK(*nh.exact == Rational(16, 3));
}

TEST_CASE("norm of a divergent tail signals Divergent") {
    WeightSequence hardy = WeightSequence::hardy();
    PowerSeries flat({}, GeometricTail{ComplexRational(1), ComplexRational(1), 0});
    CHECK_THROWS_AS(norm_sq(flat, hardy, 64), Divergent);
}

TEST_CASE("membership classification") {
    WeightSequence hardy = WeightSequence::hardy();
    WeightSequence bergman = WeightSequence::bergman();
    WeightSequence dirichlet = WeightSequence::dirichlet();

    PowerSeries half_tail({}, GeometricTail{ComplexRational(1), ComplexRational(Rational(1, 2)), 0});
    CHECK(membership(half_tail, hardy).status == Membership::member);
    CHECK(membership(half_tail, bergman).status == Membership::member);

    PowerSeries flat({}, GeometricTail{ComplexRational(1), ComplexRational(1), 0});
    CHECK(membership(flat, hardy).status == Membership::non_member);

    PowerSeries polynomial({ComplexRational(4), ComplexRational(0), ComplexRational(1)});
    CHECK(membership(polynomial, dirichlet).status == Membership::member);
}

TEST_CASE("resolvent membership on the named spaces") {
    WeightSequence hardy = WeightSequence::hardy();
    WeightSequence bergman = WeightSequence::bergman();
    WeightSequence dirichlet = WeightSequence::dirichlet();

    MembershipVerdict v = resolvent_membership(ComplexRational(2), hardy);
    CHECK(v.status == Membership::member);
    REQUIRE(v.norm_sq_exact.has_value());
    CHECK(*v.norm_sq_exact == Rational(1, 3));

    MembershipVerdict harmonic = resolvent_membership(ComplexRational(1), bergman);
    CHECK(harmonic.status == Membership::non_member);
    CHECK_FALSE(harmonic.reason.empty());  // divergence witness reported
    MembershipVerdict blowup = resolvent_membership(ComplexRational(Rational(1, 2)), dirichlet);
    CHECK(blowup.status == Membership::non_member);
    CHECK(blowup.reason.find("> 1") != std::string::npos);
    CHECK_THROWS_AS(resolvent_membership(ComplexRational(0), hardy), DivisionByZero);
}

TEST_CASE("membership of scaled geometric series matches |b| > 1 on every named space") {
    std::vector<WeightSequence> spaces = {WeightSequence::hardy(), WeightSequence::bergman(),
                                          WeightSequence::dirichlet()};
    std::vector<Rational> bs = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
    for (const auto& space : spaces)
        for (const auto& b : bs) {
            Membership got = membership(scaled_geometric(ComplexRational(b)), space).status;
            Membership want = b > 1 ? Membership::member : Membership::non_member;
            INFO(to_string(space.kind()) << " b=" << to_string(b));
            CHECK(got == want);
        }
}

TEST_CASE("custom spaces leave the boundary band inconclusive") {
    WeightSequence custom = WeightSequence::custom({Rational(1), Rational(2), Rational(9, 2)},
                                                   Rational(2, 5), Rational(1, 2));
    // |q|^2 = 9/4 sits between 1/rho_max = 2 and 1/rho_min = 5/2
    PowerSeries h({}, GeometricTail{ComplexRational(1), ComplexRational(Rational(3, 2)), 0});
    CHECK(membership(h, custom).status == Membership::inconclusive);
    // outside the band the ratio test still decides
    PowerSeries small({}, GeometricTail{ComplexRational(1), ComplexRational(1), 0});
    CHECK(membership(small, custom).status == Membership::member);  // |q|^2 rho_max = 1/2 < 1
    PowerSeries big({}, GeometricTail{ComplexRational(1), ComplexRational(2), 0});
    CHECK(membership(big, custom).status == Membership::non_member);  // |q|^2 rho_min = 8/5 > 1
}

TEST_CASE("partial sums grow for non-members and stabilize for members") {
    WeightSequence bergman = WeightSequence::bergman();
    PowerSeries harmonic = scaled_geometric(ComplexRational(1));  // sum 1/(j+1) on Bergman
    Rational at_1024 = detail::norm_sq_partial(harmonic, bergman, 1024);
    Rational at_4096 = detail::norm_sq_partial(harmonic, bergman, 4096);
    CHECK(at_4096 > at_1024 + Rational(1, 2));

    PowerSeries member = scaled_geometric(ComplexRational(2));
    Rational m_64 = detail::norm_sq_partial(member, bergman, 64);
    Rational m_4096 = detail::norm_sq_partial(member, bergman, 4096);
    CHECK(m_4096 >= m_64);
    CHECK(to_double(m_4096 - m_64) < 1e-12);
}

TEST_CASE("dual basis vectors pick out coefficients") {
    WeightSequence dirichlet = WeightSequence::dirichlet();
    PowerSeries e3 = dual_basis_vector(dirichlet, 3);
    PowerSeries h({ComplexRational(5), ComplexRational(0), ComplexRational(0), ComplexRational(Rational(7, 2))});
    // <h, e_3> = hhat(3)
    ComplexRational ip(0);
    for (std::size_t j = 0; j <= 3; ++j)
        ip += h.coeff(j) * e3.coeff(j).conj() / ComplexRational(dirichlet.weight(j));
    CHECK(ip == ComplexRational(Rational(7, 2)));
}
