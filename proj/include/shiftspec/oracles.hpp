#pragma once

#include <vector>

#include "shiftspec/operators.hpp"

namespace shiftspec {

// Brute-force cross-check routines. These deliberately avoid the closed-form
// assembly paths they are compared against: powers are n-fold exact
// applications, and the perturbed Cauchy dual is S (S*S)^{-1} with a generic
// rational inverse. Used by the `oracle` subcommand and the test suites.

// Columns of (M_z + f (x) g)^n on span_N via repeated exact application.
inline TruncatedOperator power_direct(const WeightSequence& space, const PowerSeries& f,
                                      const PowerSeries& g, std::size_t n, std::size_t cols,
                                      std::size_t rows) {
    ExactMatrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<ComplexRational> v(j + 1);
        v[j] = ComplexRational(1);
        for (std::size_t k = 0; k < n; ++k) v = apply_perturbed(space, f, g, v);
        if (v.size() > rows) {
            for (std::size_t i = rows; i < v.size(); ++i)
                if (!v[i].is_zero()) throw PreconditionViolation("power_direct rows too small");
            v.resize(rows);
        }
        for (std::size_t i = 0; i < v.size(); ++i) out.at(i, j) = v[i];
    }
    return {std::move(out), space, OperatorStructure::dense};
}

// S (S*S)^{-1} computed head-on: exact rectangular S, exact Gram product,
// exact inverse. For polynomial g the N x N inverse agrees with the
// compression of the true inverse as long as N exceeds deg g.
inline TruncatedOperator cauchy_dual_direct(const WeightSequence& space, const PowerSeries& f,
                                            const PowerSeries& g, std::size_t n) {
    TruncatedOperator s = perturbed_matrix(space, f, g, n + 1, n);
    ExactMatrix gram = adjoint(s).mat * s.mat;
    ExactMatrix dual = s.mat * inverse(gram);
    return {std::move(dual), space, OperatorStructure::dense};
}

}  // namespace shiftspec
