#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftspec/oracles.hpp"
#include "shiftspec/spectral.hpp"

namespace shiftspec {

using Json = nlohmann::ordered_json;

enum class AnalyticityBranch { zero_at_origin, h0_non_member, h0_member, inconclusive };

// Classification of M_z + f (x) (gamma*1): the operator is analytic exactly
// when f(0) = 0, or the h0 series fails to belong to the space.
struct AnalyticityVerdict {
    bool analytic = false;  // meaningful only when conclusive()
    AnalyticityBranch branch = AnalyticityBranch::inconclusive;
    std::optional<PowerSeries> h0;
    MembershipVerdict membership;

    bool conclusive() const { return branch != AnalyticityBranch::inconclusive; }
};

inline AnalyticityVerdict analyticity_verdict(const PowerSeries& f, const ComplexRational& gamma,
                                              const WeightSequence& space) {
    if (!f.is_polynomial()) throw PreconditionViolation("analyticity_verdict requires polynomial f");
    AnalyticityVerdict v;
    ComplexRational c = pairing_with_constant(f, gamma);
    if (c.is_zero()) {
        // f(0) = 0 (or gamma = 0): the perturbed operator is analytic.
        v.analytic = true;
        v.branch = AnalyticityBranch::zero_at_origin;
        return v;
    }
    PowerSeries h0 = h0_series(f, c, 64);
    v.h0 = h0;
    v.membership = membership(h0, space);
    switch (v.membership.status) {
        case Membership::member:
            v.analytic = false;
            v.branch = AnalyticityBranch::h0_member;
            break;
        case Membership::non_member:
            v.analytic = true;
            v.branch = AnalyticityBranch::h0_non_member;
            break;
        case Membership::inconclusive:
            v.branch = AnalyticityBranch::inconclusive;
            break;
    }
    return v;
}

inline AnalyticityVerdict analyticity_verdict(const PowerSeries& f, const WeightSequence& space) {
    return analyticity_verdict(f, ComplexRational(1), space);
}

struct EigenPair {
    ComplexRational value;
    PowerSeries vector;
};

struct PointSpectrumPrediction {
    std::vector<EigenPair> eigens;
    bool inconclusive = false;
};

// Point spectrum of M_z + f (x) (gamma*1), g in ker M_z*. Nonzero eigenvalues
// can only be <f,g> with eigenfunction h0 (when h0 lies in the space); 0 is an
// eigenvalue only when f(0) = 0 and conj(gamma) f'(0) = -1, with eigenfunction
// f/z. Both facts follow from solving (M_z + f (x) g) h = lambda h
// coefficientwise.
inline PointSpectrumPrediction predict_point_spectrum(const PowerSeries& f, const ComplexRational& gamma,
                                                      const WeightSequence& space) {
    if (!f.is_polynomial()) throw PreconditionViolation("predict_point_spectrum requires polynomial f");
    PointSpectrumPrediction out;
    ComplexRational c = pairing_with_constant(f, gamma);
    if (c.is_zero()) {
        if (!gamma.is_zero() && f.coeff(0).is_zero() && gamma.conj() * f.coeff(1) == ComplexRational(-1)) {
            std::size_t deg = f.is_zero() ? 0 : f.degree();
            std::vector<ComplexRational> shifted(deg);  // f/z
            for (std::size_t j = 1; j <= deg; ++j) shifted[j - 1] = f.coeff(j);
            PowerSeries vec(std::move(shifted));
            ComplexRational lead = vec.coeff(0);
            for (std::size_t j = 0; lead.is_zero() && j < deg; ++j) lead = vec.coeff(j);
            if (!lead.is_zero()) vec = scale(vec, ComplexRational(1) / lead);
            out.eigens.push_back({ComplexRational(0), std::move(vec)});
        }
        return out;
    }
    AnalyticityVerdict v = analyticity_verdict(f, gamma, space);
    if (!v.conclusive()) {
        out.inconclusive = true;
        return out;
    }
    if (v.branch == AnalyticityBranch::h0_member) out.eigens.push_back({c, *v.h0});
    return out;
}

struct LeftSpectrumPrediction {
    const SpectralScan* base = nullptr;           // mask of the unperturbed scan
    std::optional<Complex> added_point;           // <f,g> when it is an eigenvalue
    bool inconclusive = false;
};

// sigma_l(S) = sigma_l(M_z) plus possibly the coupling point: the base mask,
// with the node nearest <f,g> added exactly when the point spectrum is
// nonempty there.
inline LeftSpectrumPrediction predict_left_spectrum(const PowerSeries& f, const ComplexRational& gamma,
                                                    const WeightSequence& space, const SpectralScan& base) {
    LeftSpectrumPrediction pred;
    pred.base = &base;
    PointSpectrumPrediction p = predict_point_spectrum(f, gamma, space);
    pred.inconclusive = p.inconclusive;
    if (!p.eigens.empty()) pred.added_point = p.eigens.front().value.to_complex();
    return pred;
}

inline double predict_spectral_radius(const PowerSeries& f, const ComplexRational& gamma, double r_base) {
    return std::max(r_base, std::sqrt(to_double(pairing_with_constant(f, gamma).abs_sq())));
}

// ker S* for S = M_z + f (x) 1 on a diagonal space, from the closed form:
// f(0) = 0, f'(0) = -1  ->  span{1, a_1 z}
// f(0) = 0, otherwise   ->  span{1}
// f(0) != 0             ->  span{(1 + conj(f'(0))) 1 - conj(f(0)) a_1 z}
inline std::vector<PowerSeries> predict_adjoint_kernel(const PowerSeries& f, const ComplexRational& gamma,
                                                       const WeightSequence& space) {
    PowerSeries f_eff = scale(f, gamma.conj());
    ComplexRational f0 = f_eff.coeff(0);
    ComplexRational f1 = f_eff.coeff(1);
    ComplexRational a1(space.weight(1));
    if (f0.is_zero()) {
        if (f1 == ComplexRational(-1))
            return {PowerSeries::constant(ComplexRational(1)), PowerSeries::monomial(1, a1)};
        return {PowerSeries::constant(ComplexRational(1))};
    }
    std::vector<ComplexRational> coeffs(2);
    coeffs[0] = ComplexRational(1) + f1.conj();
    coeffs[1] = -f0.conj() * a1;
    return {PowerSeries(std::move(coeffs))};
}

enum class SigmaLShape { unchanged, adds_coupling_point, adds_zero, unclassified };

struct AffineClassification {
    SigmaLShape sigma_l = SigmaLShape::unclassified;
    std::optional<bool> analytic;
    std::optional<double> radius_of_max;  // max(r_base, |b|) when classified
};

// The worked classification for f(z) = a z + b with g = 1:
//  b = 0:                                        analytic; sigma_l gains {0} iff a = -1
//  b != 0, a != -1, 1/(b - z) in the space:      not analytic; sigma_l gains {b}; r = max(r, |b|)
//  b != 0, a != -1, 1/(b - z) not in the space:  analytic; sigma_l and r unchanged
// Everything else (b != 0 with a = -1, or an inconclusive membership) is
// reported unclassified.
inline AffineClassification classify_affine(const ComplexRational& a, const ComplexRational& b,
                                            const WeightSequence& space, double r_base) {
    AffineClassification out;
    double abs_b = std::sqrt(to_double(b.abs_sq()));
    if (b.is_zero()) {
        out.analytic = true;
        out.sigma_l = (a == ComplexRational(-1)) ? SigmaLShape::adds_zero : SigmaLShape::unchanged;
        out.radius_of_max = r_base;
        return out;
    }
    if (a == ComplexRational(-1)) return out;
    MembershipVerdict resolvent = resolvent_membership(b, space);
    if (resolvent.status == Membership::inconclusive) return out;
    if (resolvent.status == Membership::member) {
        out.analytic = false;
        out.sigma_l = SigmaLShape::adds_coupling_point;
        out.radius_of_max = std::max(r_base, abs_b);
    } else {
        out.analytic = true;
        out.sigma_l = SigmaLShape::unchanged;
        out.radius_of_max = r_base;
    }
    return out;
}

struct TheoremReport {
    std::string theorem_id;
    std::string instance;
    std::string predicted;
    std::string observed;
    std::string tolerance;
    bool pass = false;
    Json diagnostics = Json::object();
};

inline Json to_json(const TheoremReport& r) {
    Json j = Json::object();
    j["theorem_id"] = r.theorem_id;
    j["instance"] = r.instance;
    j["predicted"] = r.predicted;
    j["observed"] = r.observed;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["diagnostics"] = r.diagnostics;
    return j;
}

struct SuiteTolerances {
    double eigen_residual = 1e-10;
    double radius_rel = 0.05;
    double angle = 1e-8;
    double wsp_residual = 1e-8;
    double float_slack = 1e-12;
};

struct SuiteInstance {
    WeightSequence space;
    PowerSeries f;
    ComplexRational gamma{Rational(1)};
    std::string label;
};

struct SuiteSettings {
    std::size_t trunc = 256;     // N
    std::size_t n_max = 32;
    std::size_t power_steps = 12;  // K
    double gap = 10.0;
    double angle_tol = 0.02;
    std::optional<double> tau;   // defaults to 10 / sqrt(N)
    GridSpec grid;               // used by the mask-agreement check
    bool run_scans = true;       // the scan check is the slow part
    unsigned threads = 0;
    std::size_t seed = 12345;
    SuiteTolerances tol;

    double tau_value() const { return tau ? *tau : 10.0 / std::sqrt(static_cast<double>(trunc)); }
};

namespace detail {

inline std::string describe_instance(const SuiteInstance& inst, const SuiteSettings& s) {
    std::string f_str;
    std::size_t deg = inst.f.is_zero() ? 0 : inst.f.degree();
    for (std::size_t j = 0; j <= deg; ++j) {
        if (j) f_str += ",";
        f_str += inst.f.coeff(j).str();
    }
    return std::string(to_string(inst.space.kind())) + ";f=[" + f_str + "];g=" + inst.gamma.str() +
           ";N=" + std::to_string(s.trunc);
}

inline bool all_zero(const std::vector<ComplexRational>& v) {
    for (const auto& c : v)
        if (!c.is_zero()) return false;
    return true;
}

inline std::vector<PowerSeries> random_polynomials(std::size_t count, std::size_t max_deg, std::size_t seed);

}  // namespace detail

// Runs the per-instance reconciliation of every prediction against the exact
// and numeric layers. Reports with pass=false are kept, never dropped.
std::vector<TheoremReport> run_suite(const std::vector<SuiteInstance>& instances, const SuiteSettings& settings);

inline Json suite_report_json(const std::vector<TheoremReport>& reports) {
    Json out = Json::object();
    out["schema"] = 1;
    Json arr = Json::array();
    bool all = true;
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        all = all && r.pass;
    }
    out["all_pass"] = all;
    out["reports"] = arr;
    return out;
}

}  // namespace shiftspec

#include "shiftspec/verify_impl.hpp"
