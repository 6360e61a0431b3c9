#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <random>

#include "shiftspec/oracles.hpp"
#include "shiftspec/spectral.hpp"

using namespace shiftspec;

namespace {

PowerSeries poly(std::initializer_list<ComplexRational> cs) {
    return PowerSeries(std::vector<ComplexRational>(cs));
}

const PowerSeries kOne = PowerSeries::constant(ComplexRational(1));

std::vector<ComplexRational> random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<ComplexRational> v(n);
    for (auto& c : v) c = ComplexRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    return v;
}

}  // namespace

TEST_CASE("shift matrices") {
    TruncatedOperator hardy = shift_matrix(WeightSequence::hardy(), 4);
    CHECK(hardy.rows() == 5);
    CHECK(hardy.cols() == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(hardy.mat.at(j + 1, j) == ComplexRational(1));

    // orthonormal-basis subdiagonals carry w_j = sqrt(a_j / a_{j+1})
    PerturbedShift bergman{WeightSequence::bergman(), PowerSeries::zero(), ComplexRational(0)};
    CHECK(assemble_rect(bergman, 4)(1, 0).real() == Catch::Approx(std::sqrt(0.5)));
    PerturbedShift dirichlet{WeightSequence::dirichlet(), PowerSeries::zero(), ComplexRational(0)};
    CHECK(assemble_rect(dirichlet, 4)(1, 0).real() == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("rank-one matrices use the diagonal Gram") {
    WeightSequence hardy = WeightSequence::hardy();
    TruncatedOperator a = rank_one_matrix(kOne, kOne, hardy, 4, 4);
    CHECK(a.mat.at(0, 0) == ComplexRational(1));
    for (std::size_t j = 1; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) CHECK(a.mat.at(i, j).is_zero());

    TruncatedOperator b = rank_one_matrix(poly({ComplexRational(3), ComplexRational(-1)}), kOne, hardy, 4, 4);
    CHECK(b.mat.at(0, 0) == ComplexRational(3));
    CHECK(b.mat.at(1, 0) == ComplexRational(-1));

    // Bergman, g = z, f = 1: column 1 equals 1/a_1 = 1/2 times the f column
    TruncatedOperator c = rank_one_matrix(kOne, PowerSeries::monomial(1), WeightSequence::bergman(), 4, 4);
    CHECK(c.mat.at(0, 1) == ComplexRational(Rational(1, 2)));
    CHECK(c.mat.at(1, 1).is_zero());
    CHECK(c.mat.at(0, 0).is_zero());
}

TEST_CASE("adjoint against the diagonal Gram") {
    for (const auto& space : {WeightSequence::hardy(), WeightSequence::bergman(), WeightSequence::dirichlet()}) {
        TruncatedOperator t = shift_matrix(space, 6);
        TruncatedOperator t_star = adjoint(t);
        // M_z* 1 = 0
        std::vector<ComplexRational> e0(7);
        e0[0] = ComplexRational(1);
        for (const auto& c : t_star.mat.apply(e0)) CHECK(c.is_zero());
        // M_z* z^k = (a_{k-1}/a_k) z^{k-1}
        for (std::size_t k = 1; k <= 5; ++k) {
            std::vector<ComplexRational> ek(7);
            ek[k] = ComplexRational(1);
            std::vector<ComplexRational> img = t_star.mat.apply(ek);
            for (std::size_t j = 0; j < img.size(); ++j) {
                if (j == k - 1)
                    CHECK(img[j] == ComplexRational(space.weight(k - 1) / space.weight(k)));
                else
                    CHECK(img[j].is_zero());
            }
        }
    }
    // Hardy: M_z* z = 1
    TruncatedOperator h = adjoint(shift_matrix(WeightSequence::hardy(), 4));
    CHECK(h.mat.at(0, 1) == ComplexRational(1));
}

TEST_CASE("adjoint is an involution and moves across the pairing") {
    std::mt19937_64 rng(11);
    WeightSequence bergman = WeightSequence::bergman();
    TruncatedOperator s = perturbed_matrix(bergman, poly({ComplexRational(1), ComplexRational(Rational(1, 3))}),
                                           kOne, 7, 6);
    TruncatedOperator s_star = adjoint(s);
    CHECK(adjoint(s_star).mat == s.mat);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<ComplexRational> x = random_vector(rng, 6), y = random_vector(rng, 7);
        CHECK(inner(bergman, s.mat.apply(x), y) == inner(bergman, x, s_star.mat.apply(y)));
    }
}

TEST_CASE("monomial and orthonormal representations are conjugate by diag(sqrt a)") {
    WeightSequence dirichlet = WeightSequence::dirichlet();
    PowerSeries f = poly({ComplexRational(Rational(1, 2)), ComplexRational(-1)});
    std::size_t n = 8;
    TruncatedOperator exact = perturbed_matrix(dirichlet, f, kOne, n + 2, n);
    PerturbedShift op{dirichlet, f, ComplexRational(1)};
    MatrixXc ortho = assemble_rect(op, n);
    for (std::size_t i = 0; i < n + 2; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex expected = exact.mat.at(i, j).to_complex() * dirichlet.sqrt_weight(j) /
                               dirichlet.sqrt_weight(i);
            CHECK(std::abs(ortho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - expected) <=
                  1e-12 * std::max(1.0, std::abs(expected)));
        }
}

TEST_CASE("power formula equals the direct n-fold application") {
    // base case n = 1
    WeightSequence hardy = WeightSequence::hardy();
    PowerSeries f = poly({ComplexRational(3), ComplexRational(-1)});
    TruncatedOperator base = power_formula(hardy, f, kOne, 1, 6);
    TruncatedOperator direct1 = power_direct(hardy, f, kOne, 1, 6, base.rows());
    CHECK(base.mat == direct1.mat);

    TruncatedOperator p2 = power_formula(hardy, f, kOne, 2, 6);
    CHECK(p2.mat == power_direct(hardy, f, kOne, 2, 6, p2.rows()).mat);

    // zero coupling: (T + z (x) 1)^3 keeps only the j = n-1 term
    TruncatedOperator p3 = power_formula(hardy, PowerSeries::monomial(1), kOne, 3, 6);
    CHECK(p3.mat == power_direct(hardy, PowerSeries::monomial(1), kOne, 3, 6, p3.rows()).mat);

    std::mt19937_64 seed_src(99);
    for (const auto& space : {WeightSequence::hardy(), WeightSequence::bergman(), WeightSequence::dirichlet()})
        for (std::size_t n : {1ul, 2ul, 4ul, 8ul})
            for (std::size_t cols : {4ul, 8ul, 16ul}) {
                std::vector<ComplexRational> cs(4);
                std::uniform_int_distribution<int> num(-4, 4);
                for (auto& c : cs) c = ComplexRational(Rational(num(seed_src), 3), Rational(num(seed_src), 2));
                PowerSeries rf(std::move(cs));
                if (rf.is_zero()) continue;
                TruncatedOperator lhs = power_formula(space, rf, kOne, n, cols);
                TruncatedOperator rhs = power_direct(space, rf, kOne, n, cols, lhs.rows());
                REQUIRE(lhs.mat == rhs.mat);
            }
}

TEST_CASE("power formula rejects g outside ker M_z*") {
    CHECK_THROWS_AS(power_formula(WeightSequence::hardy(), kOne, PowerSeries::monomial(1), 2, 6),
                    PreconditionViolation);
}

TEST_CASE("the constant-g hypothesis is necessary") {
    // With g = z (so M_z* g != 0) the expansion's right-hand side and the true
    // square differ already in column 0.
    WeightSequence hardy = WeightSequence::hardy();
    PowerSeries g = PowerSeries::monomial(1);
    std::size_t cols = 6, rows = 9;
    // right-hand side assembled by hand: T^2 + sum_j <f,g>^{1-j} (z^j f)(x)g, f = 1
    ExactMatrix rhs(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) rhs.at(j + 2, j) = ComplexRational(1);
    ComplexRational c = inner(hardy, kOne.materialize(2), g.materialize(2));  // <1, z> = 0
    REQUIRE(c.is_zero());
    TruncatedOperator tails = rank_one_matrix(PowerSeries::monomial(1), g, hardy, rows, cols);  // (z*1)(x)z
    rhs = rhs + tails.mat;
    TruncatedOperator direct = power_direct(hardy, kOne, g, 2, cols, rows);
    bool differs = false;
    for (std::size_t i = 0; i < rows && !differs; ++i)
        for (std::size_t j = 0; j < cols && !differs; ++j) differs = !(rhs.at(i, j) == direct.mat.at(i, j));
    CHECK(differs);
}

TEST_CASE("2-cyclicity identity vanishes exactly") {
    PowerSeries xi2 = poly({ComplexRational(0), ComplexRational(1), ComplexRational(1)});  // z + z^2
    // n = 1 reduces to the definition of S
    for (const auto& c : two_cyclic_identity(xi2, poly({ComplexRational(2), ComplexRational(5)}), kOne,
                                             WeightSequence::hardy(), 1))
        CHECK(c.is_zero());
    for (const auto& c : two_cyclic_identity(xi2, PowerSeries::constant(ComplexRational(2)), kOne,
                                             WeightSequence::hardy(), 4))
        CHECK(c.is_zero());
    for (const auto& c : two_cyclic_identity(kOne, poly({ComplexRational(Rational(1, 2)), ComplexRational(-1)}),
                                             kOne, WeightSequence::bergman(), 3))
        CHECK(c.is_zero());
}

TEST_CASE("Cauchy dual of the shift") {
    TruncatedOperator hardy = cauchy_dual(WeightSequence::hardy(), 5);
    CHECK(hardy.mat == shift_matrix(WeightSequence::hardy(), 5).mat);

    TruncatedOperator bergman = cauchy_dual(WeightSequence::bergman(), 5);
    CHECK(bergman.mat.at(1, 0) == ComplexRational(2));  // T' 1 = 2z

    TruncatedOperator dirichlet = cauchy_dual(WeightSequence::dirichlet(), 5);
    CHECK(dirichlet.mat.at(1, 0) == ComplexRational(Rational(1, 2)));  // T' 1 = z/2

    // (T')* T' = (T*T)^{-1} on the truncation
    for (const auto& space : {WeightSequence::bergman(), WeightSequence::dirichlet()}) {
        TruncatedOperator dual = cauchy_dual(space, 6);
        ExactMatrix gram = adjoint(dual).mat * dual.mat;
        for (std::size_t k = 0; k < 6; ++k)
            for (std::size_t j = 0; j < 6; ++j) {
                if (k == j)
                    CHECK(gram.at(k, k) == ComplexRational(space.weight(k + 1) / space.weight(k)));
                else
                    CHECK(gram.at(k, j).is_zero());
            }
    }
}

TEST_CASE("perturbed Cauchy dual formula") {
    WeightSequence hardy = WeightSequence::hardy();
    // g = 0 reduces to T'
    CHECK(cauchy_dual_perturbed(hardy, kOne, PowerSeries::zero(), 6).mat == cauchy_dual(hardy, 6).mat);

    // Hardy, f = g = 1: T' + (1/2)(1 - z)(x)1
    TruncatedOperator got = cauchy_dual_perturbed(hardy, kOne, kOne, 6);
    ExactMatrix want = cauchy_dual(hardy, 6).mat +
                       rank_one_matrix(poly({ComplexRational(1), ComplexRational(-1)}), kOne, hardy, 7, 6)
                           .mat.scaled(ComplexRational(Rational(1, 2)));
    CHECK(got.mat == want);

    // equals the direct S (S*S)^{-1} on the interior block
    for (const auto& space : {WeightSequence::hardy(), WeightSequence::bergman(), WeightSequence::dirichlet()})
        for (const auto& g : {PowerSeries::zero(), kOne, PowerSeries::monomial(1),
                              poly({ComplexRational(1), ComplexRational(Rational(1, 2))})}) {
            TruncatedOperator lhs = cauchy_dual_perturbed(space, kOne, g, 16);
            TruncatedOperator rhs = cauchy_dual_direct(space, kOne, g, 16);
            for (std::size_t i = 0; i + 3 <= 16; ++i)
                for (std::size_t j = 0; j + 3 <= 16; ++j) REQUIRE(lhs.mat.at(i, j) == rhs.mat.at(i, j));
        }

    CHECK_THROWS_AS(cauchy_dual_perturbed(hardy, PowerSeries::constant(ComplexRational(2)), kOne, 6),
                    PreconditionViolation);
    CHECK_THROWS_AS(cauchy_dual_perturbed(hardy, PowerSeries::monomial(1), kOne, 6), PreconditionViolation);
}

TEST_CASE("kernel condition holds on the diagonal model spaces") {
    CHECK(kernel_condition_check(WeightSequence::hardy()));
    CHECK(kernel_condition_check(WeightSequence::bergman()));
    CHECK(kernel_condition_check(WeightSequence::dirichlet()));
}

TEST_CASE("matrix CSV export") {
    TruncatedOperator op = perturbed_matrix(WeightSequence::bergman(),
                                            poly({ComplexRational(Rational(1, 2)), ComplexRational(0, 1)}),
                                            kOne, 3, 2);
    std::string path = "op_export_test.csv";
    write_matrix_csv(op, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "\"1/2,0\",\"0,0\"");  // row 0: f(0) in column 0
    std::getline(in, line);
    CHECK(line == "\"1,1\",\"0,0\"");    // row 1: shift + i from f
    std::getline(in, line);
    CHECK(line == "\"0,0\",\"1,0\"");
    std::remove(path.c_str());
}
