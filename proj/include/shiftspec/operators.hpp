#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "shiftspec/exact_matrix.hpp"
#include "shiftspec/power_series.hpp"
#include "shiftspec/weight_sequence.hpp"

namespace shiftspec {

enum class OperatorStructure { shift_banded, banded_plus_rank_one, dense };

// Rectangular truncation of an operator span{z^0..z^{N-1}} -> span{z^0..z^{M-1}},
// entries exact in the monomial basis with Gram diag(1/a_j).
struct TruncatedOperator {
    ExactMatrix mat;
    WeightSequence space;
    OperatorStructure structure = OperatorStructure::dense;

    std::size_t rows() const { return mat.rows(); }
    std::size_t cols() const { return mat.cols(); }
};

// <u, v> = sum_j u_j conj(v_j) / a_j on coefficient vectors.
inline ComplexRational inner(const WeightSequence& space, const std::vector<ComplexRational>& u,
                             const std::vector<ComplexRational>& v) {
    ComplexRational s(0);
    std::size_t n = std::min(u.size(), v.size());
    for (std::size_t j = 0; j < n; ++j)
        if (!u[j].is_zero() && !v[j].is_zero()) s += u[j] * v[j].conj() / ComplexRational(space.weight(j));
    return s;
}

inline ComplexRational inner(const WeightSequence& space, const PowerSeries& u, const PowerSeries& v,
                             std::size_t through) {
    return inner(space, u.materialize(through + 1), v.materialize(through + 1));
}

// <f, gamma*1> = conj(gamma) fhat(0); exact for any series.
inline ComplexRational pairing_with_constant(const PowerSeries& f, const ComplexRational& gamma) {
    return f.coeff(0) * gamma.conj();
}

// M_z on span_N: (N+1) x N with subdiagonal ones in the monomial basis.
inline TruncatedOperator shift_matrix(const WeightSequence& space, std::size_t n) {
    if (n < 1) throw PreconditionViolation("shift_matrix requires N >= 1");
    ExactMatrix m(n + 1, n);
    for (std::size_t j = 0; j < n; ++j) m.at(j + 1, j) = ComplexRational(1);
    return {std::move(m), space, OperatorStructure::shift_banded};
}

// f (x) g: column j holds <z^j, g> * fhat = conj(ghat(j))/a_j * fhat, truncated to M rows.
inline TruncatedOperator rank_one_matrix(const PowerSeries& f, const PowerSeries& g,
                                         const WeightSequence& space, std::size_t m, std::size_t n) {
    ExactMatrix out(m, n);
    std::vector<ComplexRational> fc = f.materialize(m);
    for (std::size_t j = 0; j < n; ++j) {
        ComplexRational gj = g.coeff(j);
        if (gj.is_zero()) continue;
        ComplexRational w = gj.conj() / ComplexRational(space.weight(j));
        for (std::size_t i = 0; i < m; ++i)
            if (!fc[i].is_zero()) out.at(i, j) = w * fc[i];
    }
    return {std::move(out), space, OperatorStructure::banded_plus_rank_one};
}

// M_z + f (x) g on span_N, rows M.
inline TruncatedOperator perturbed_matrix(const WeightSequence& space, const PowerSeries& f,
                                          const PowerSeries& g, std::size_t m, std::size_t n) {
    TruncatedOperator op = rank_one_matrix(f, g, space, m, n);
    for (std::size_t j = 0; j + 1 < m && j < n; ++j) op.mat.at(j + 1, j) += ComplexRational(1);
    op.structure = OperatorStructure::banded_plus_rank_one;
    return op;
}

// Adjoint w.r.t. the Gram diag(1/a_j): A*[i][j] = (a_i / a_j) conj(A[j][i]).
inline TruncatedOperator adjoint(const TruncatedOperator& a) {
    ExactMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        Rational ai = a.space.weight(i);
        for (std::size_t j = 0; j < a.rows(); ++j) {
            const ComplexRational& v = a.mat.at(j, i);
            if (!v.is_zero()) out.at(i, j) = v.conj() * ComplexRational(ai / a.space.weight(j));
        }
    }
    return {std::move(out), a.space, OperatorStructure::dense};
}

// One exact application of M_z + f (x) g to a coefficient vector; the output
// is long enough that nothing is truncated.
inline std::vector<ComplexRational> apply_perturbed(const WeightSequence& space, const PowerSeries& f,
                                                    const PowerSeries& g,
                                                    const std::vector<ComplexRational>& h) {
    if (!f.is_polynomial()) throw PreconditionViolation("exact application needs polynomial f");
    std::size_t f_len = f.degree() + 1;
    std::size_t out_len = std::max(h.size() + 1, f_len);
    std::vector<ComplexRational> out(out_len);
    for (std::size_t j = 0; j < h.size(); ++j) out[j + 1] = h[j];
    ComplexRational hg = inner(space, h, g.materialize(h.size()));
    if (!hg.is_zero())
        for (std::size_t i = 0; i < f_len; ++i) out[i] += hg * f.coeff(i);
    return out;
}

// (M_z + f (x) g)^n = M_z^n + sum_{j<n} <f,g>^{n-1-j} (z^j f) (x) g, valid when
// g is a constant (so that M_z* g = 0). Output rows N + n + deg f track degrees
// exactly. Assembled from the right-hand side, not by multiplying truncations.
inline TruncatedOperator power_formula(const WeightSequence& space, const PowerSeries& f,
                                       const PowerSeries& g, std::size_t n, std::size_t cols) {
    if (n < 1) throw PreconditionViolation("power_formula requires n >= 1");
    if (!g.is_polynomial() || g.degree() != 0)
        throw PreconditionViolation("power_formula requires g in ker M_z*, i.e. a constant");
    if (!f.is_polynomial()) throw PreconditionViolation("power_formula requires polynomial f");
    std::size_t deg_f = f.degree();
    std::size_t rows = cols + n + deg_f;
    ExactMatrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) m.at(j + n, j) = ComplexRational(1);  // M_z^n
    ComplexRational c = pairing_with_constant(f, g.coeff(0));
    ComplexRational gbar = g.coeff(0).conj();  // <z^0, g>/a_0
    for (std::size_t j = 0; j < n; ++j) {
        ComplexRational factor = c.pow(static_cast<long>(n - 1 - j)) * gbar;
        if (factor.is_zero()) continue;
        for (std::size_t i = 0; i <= deg_f; ++i) {
            ComplexRational fi = f.coeff(i);
            if (!fi.is_zero()) m.at(i + j, 0) += factor * fi;
        }
    }
    return {std::move(m), space, OperatorStructure::banded_plus_rank_one};
}

// Residual of the 2-cyclicity identity M_z^n xi = S^n xi - <xi,g> S^{n-1} f,
// computed exactly; the contract is an all-zero vector.
inline std::vector<ComplexRational> two_cyclic_identity(const PowerSeries& xi, const PowerSeries& f,
                                                        const PowerSeries& g, const WeightSequence& space,
                                                        std::size_t n) {
    if (n < 1) throw PreconditionViolation("two_cyclic_identity requires n >= 1");
    if (!g.is_polynomial() || g.degree() != 0)
        throw PreconditionViolation("two_cyclic_identity requires constant g");
    std::size_t xi_len = xi.is_polynomial() ? xi.degree() + 1 : xi.prefix().size();
    std::vector<ComplexRational> s_pow = xi.materialize(xi_len);
    for (std::size_t k = 0; k < n; ++k) s_pow = apply_perturbed(space, f, g, s_pow);
    std::vector<ComplexRational> s_f = f.materialize(f.degree() + 1);
    for (std::size_t k = 0; k + 1 < n; ++k) s_f = apply_perturbed(space, f, g, s_f);
    ComplexRational xi_g = xi.coeff(0) * g.coeff(0).conj();
    std::size_t len = std::max(s_pow.size(), std::max(s_f.size(), xi_len + n));
    std::vector<ComplexRational> res(len);
    for (std::size_t j = 0; j < xi_len; ++j) res[j + n] = xi.coeff(j);  // M_z^n xi
    for (std::size_t j = 0; j < s_pow.size(); ++j) res[j] -= s_pow[j];
    for (std::size_t j = 0; j < s_f.size(); ++j) res[j] += xi_g * s_f[j];
    return res;
}

// Cauchy dual T' = T (T*T)^{-1} of the shift: z^k -> (a_{k+1}/a_k) z^{k+1}.
inline TruncatedOperator cauchy_dual(const WeightSequence& space, std::size_t n) {
    if (space.rho_min() <= 0) throw InvalidSpace("cauchy_dual requires a left-invertible shift");
    ExactMatrix m(n + 1, n);
    for (std::size_t k = 0; k < n; ++k)
        m.at(k + 1, k) = ComplexRational(space.weight(k + 1) / space.weight(k));
    return {std::move(m), space, OperatorStructure::shift_banded};
}

// (T + f (x) g)' = T' + (1 + ||T'g||^2)^{-1} (f - T'g) (x) (T*T)^{-1} g, for
// f in ker T* of unit norm and polynomial g. Assembled exactly on (N+1) x N.
inline TruncatedOperator cauchy_dual_perturbed(const WeightSequence& space, const PowerSeries& f,
                                               const PowerSeries& g, std::size_t n) {
    if (!f.is_polynomial() || f.degree() != 0)
        throw PreconditionViolation("cauchy_dual_perturbed requires f in ker T* (a constant)");
    if (f.coeff(0).abs_sq() != 1) throw PreconditionViolation("cauchy_dual_perturbed requires ||f|| = 1");
    if (!g.is_polynomial()) throw PreconditionViolation("cauchy_dual_perturbed requires polynomial g");
    TruncatedOperator dual = cauchy_dual(space, n);
    if (g.is_zero()) return dual;
    std::size_t deg_g = g.degree();
    // T'g and (T*T)^{-1} g: z^k -> (a_{k+1}/a_k) z^{k+1} resp. (a_{k+1}/a_k) z^k
    std::vector<ComplexRational> tg(deg_g + 2), tt_inv_g(deg_g + 1);
    for (std::size_t k = 0; k <= deg_g; ++k) {
        ComplexRational ratio_inv(space.weight(k + 1) / space.weight(k));
        tg[k + 1] = ratio_inv * g.coeff(k);
        tt_inv_g[k] = ratio_inv * g.coeff(k);
    }
    Rational tg_norm_sq(0);
    for (std::size_t j = 0; j < tg.size(); ++j)
        if (!tg[j].is_zero()) tg_norm_sq += tg[j].abs_sq() / space.weight(j);
    ComplexRational denom(Rational(1) + tg_norm_sq);
    std::vector<ComplexRational> left(tg.size());
    left[0] = f.coeff(0);
    for (std::size_t j = 0; j < tg.size(); ++j) left[j] -= tg[j];
    TruncatedOperator correction =
        rank_one_matrix(PowerSeries(std::move(left)), PowerSeries(std::move(tt_inv_g)), space, n + 1, n);
    dual.mat = dual.mat + correction.mat.scaled(ComplexRational(1) / denom);
    dual.structure = OperatorStructure::banded_plus_rank_one;
    return dual;
}

// Checks M_z* M_z (ker M_z*) is contained in ker M_z* by computing M_z* M_z 1.
inline bool kernel_condition_check(const WeightSequence& space) {
    TruncatedOperator t = shift_matrix(space, 4);
    std::vector<ComplexRational> e0(4);
    e0[0] = ComplexRational(1);
    std::vector<ComplexRational> v = adjoint(t).mat.apply(t.mat.apply(e0));
    for (std::size_t j = 1; j < v.size(); ++j)
        if (!v[j].is_zero()) return false;
    return !v[0].is_zero();
}

// Row-major CSV with "re,im" cells, for debugging.
inline void write_matrix_csv(const TruncatedOperator& op, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    for (std::size_t i = 0; i < op.rows(); ++i) {
        for (std::size_t j = 0; j < op.cols(); ++j) {
            if (j) out << ',';
            const ComplexRational& v = op.mat.at(i, j);
            out << '"' << to_string(v.re) << ',' << to_string(v.im) << '"';
        }
        out << '\n';
    }
}

}  // namespace shiftspec
