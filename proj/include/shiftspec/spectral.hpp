#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "shiftspec/operators.hpp"

namespace shiftspec {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// S = M_z + f (x) (gamma * 1) on a diagonal-kernel space; f polynomial.
struct PerturbedShift {
    WeightSequence space;
    PowerSeries f;
    ComplexRational gamma{Rational(1)};

    std::size_t f_degree() const { return f.is_zero() ? 0 : f.degree(); }
    bool trivial() const { return f.is_zero() || gamma.is_zero(); }
    // <f, gamma*1>
    ComplexRational coupling() const { return pairing_with_constant(f, gamma); }
};

inline void parallel_for(std::size_t total, unsigned threads, const std::function<void(std::size_t, std::size_t)>& fn) {
    unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    if (hw <= 1 || total < 2) {
        fn(0, total);
        return;
    }
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, total));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        std::size_t b = t * chunk, e = std::min(total, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool) th.join();
}

// Coefficient vector of a series in the orthonormal basis u_j = sqrt(a_j) z^j.
inline VectorXc series_to_orthonormal(const WeightSequence& space, const PowerSeries& h, std::size_t len) {
    VectorXc v(static_cast<Eigen::Index>(len));
    for (std::size_t j = 0; j < len; ++j)
        v(static_cast<Eigen::Index>(j)) = h.coeff(j).to_complex() / space.sqrt_weight(j);
    return v;
}

// Rectangular orthonormal-basis truncation of S on span_N, rows N + 1 + deg f:
// subdiagonal w_j plus the perturbation in column 0.
inline MatrixXc assemble_rect(const PerturbedShift& op, std::size_t n) {
    std::size_t rows = n + 1 + op.f_degree();
    MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
        m(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = op.space.shift_weight(j);
    if (!op.trivial()) {
        Complex gbar = op.gamma.conj().to_complex();
        for (std::size_t i = 0; i <= op.f_degree(); ++i)
            m(static_cast<Eigen::Index>(i), 0) += gbar * op.f.coeff(i).to_complex() / op.space.sqrt_weight(i);
    }
    return m;
}

inline MatrixXc assemble_square(const PerturbedShift& op, std::size_t n) {
    return assemble_rect(op, n).topRows(static_cast<Eigen::Index>(n));
}

// A block of S mapping span_{n_in} into span_{n_out}, used for degree-tracked powers.
inline MatrixXc assemble_block(const PerturbedShift& op, std::size_t n_in, std::size_t n_out) {
    MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_in));
    for (std::size_t j = 0; j < n_in && j + 1 < n_out; ++j)
        m(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = op.space.shift_weight(j);
    if (!op.trivial()) {
        Complex gbar = op.gamma.conj().to_complex();
        for (std::size_t i = 0; i <= op.f_degree() && i < n_out; ++i)
            m(static_cast<Eigen::Index>(i), 0) += gbar * op.f.coeff(i).to_complex() / op.space.sqrt_weight(i);
    }
    return m;
}

namespace detail {

// Precomputed data for the smallest-singular-value solver: shift weights and
// the perturbation's column-0 addition, both in orthonormal coordinates.
struct ModulusContext {
    std::size_t n = 0;
    std::vector<double> w;           // w_j, j = 0..n-1
    std::vector<Complex> col0_add;   // gbar * f in orthonormal coords, indices 0..deg f
};

inline ModulusContext make_modulus_context(const PerturbedShift& op, std::size_t n) {
    ModulusContext ctx;
    ctx.n = n;
    ctx.w.resize(n);
    for (std::size_t j = 0; j < n; ++j) ctx.w[j] = op.space.shift_weight(j);
    if (!op.trivial()) {
        Complex gbar = op.gamma.conj().to_complex();
        ctx.col0_add.resize(op.f_degree() + 1);
        for (std::size_t i = 0; i <= op.f_degree(); ++i)
            ctx.col0_add[i] = gbar * op.f.coeff(i).to_complex() / op.space.sqrt_weight(i);
    }
    return ctx;
}

// Smallest singular value of the rectangular truncation of S - lambda via
// bisection on the inertia of C - mu I, where C = A^H A is tridiagonal plus a
// spike in row/column 0. Elimination runs from the high index down so the
// spike causes no fill-in; each inertia evaluation is O(N).
inline double modulus_bisect(const ModulusContext& ctx, Complex lambda) {
    const std::size_t n = ctx.n;
    const double abs2_lambda = std::norm(lambda);
    const std::size_t d = ctx.col0_add.empty() ? 0 : ctx.col0_add.size() - 1;
    const std::size_t col0_len = std::max<std::size_t>(d, 1) + 1;

    // column 0 of A = (S - lambda) restricted to span_n
    std::vector<Complex> col0(col0_len, Complex(0));
    col0[0] = -lambda;
    if (n >= 1 && col0_len > 1) col0[1] = ctx.w[0];
    for (std::size_t i = 0; i < ctx.col0_add.size(); ++i) col0[i] += ctx.col0_add[i];

    double c00 = 0;
    for (const Complex& v : col0) c00 += std::norm(v);

    const std::size_t spike_max = std::min(std::max<std::size_t>(d, 1), n - 1);
    std::vector<Complex> spike0(spike_max + 1, Complex(0));  // C[0][k], k = 1..spike_max
    for (std::size_t k = 1; k <= spike_max; ++k) {
        Complex s = std::conj(col0[k]) * (-lambda);
        if (k + 1 < col0_len && k < n) s += std::conj(col0[k + 1]) * ctx.w[k];
        spike0[k] = s;
    }

    std::vector<double> diag(n);
    diag[0] = c00;
    for (std::size_t k = 1; k < n; ++k) diag[k] = abs2_lambda + ctx.w[k] * ctx.w[k];

    double scale = c00;
    for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, diag[k]);
    scale = std::max(scale, 1.0);
    const double tiny = scale * 1e-280;

    std::vector<double> dd(n);
    std::vector<Complex> sp(spike_max + 1);

    auto count_below = [&](double mu) {
        for (std::size_t k = 0; k < n; ++k) dd[k] = diag[k] - mu;
        std::copy(spike0.begin(), spike0.end(), sp.begin());
        std::size_t negatives = 0;
        for (std::size_t j = n - 1; j >= 1; --j) {
            double p = dd[j];
            if (std::abs(p) < tiny) p = (p < 0 ? -tiny : tiny);
            if (p < 0) ++negatives;
            if (j >= 2) {
                Complex beta = -lambda * ctx.w[j - 1];  // C[j-1][j]
                dd[j - 1] -= std::norm(beta) / p;
                if (j <= spike_max && !(sp[j] == Complex(0)))
                    sp[j - 1] -= sp[j] * std::conj(beta) / p;
            }
            if (j <= spike_max) dd[0] -= std::norm(sp[j]) / p;
        }
        if (dd[0] < 0) ++negatives;
        return negatives;
    };

    double lo = 0.0;
    double hi = diag[0];
    for (std::size_t k = 1; k < n; ++k) hi = std::min(hi, diag[k]);
    if (hi <= 0) return 0.0;
    for (int it = 0; it < 120; ++it) {
        if (hi - lo <= 1e-12 * hi + 1e-30 * scale) break;
        double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return std::sqrt(std::max(0.0, 0.5 * (lo + hi)));
}

}  // namespace detail

// inf { ||(S - lambda) h|| : h in span_N, ||h|| = 1 }, with the image computed
// on enough rows that the numerator is exact; nonincreasing in N.
inline double injectivity_modulus(const PerturbedShift& op, Complex lambda, std::size_t n) {
    return detail::modulus_bisect(detail::make_modulus_context(op, n), lambda);
}

struct GridSpec {
    double re_min = -2.5, re_max = 2.5, im_min = -2.5, im_max = 2.5;
    int resolution = 201;  // odd, so the origin is a grid node for symmetric bounds

    double re_step() const { return (re_max - re_min) / (resolution - 1); }
    double im_step() const { return (im_max - im_min) / (resolution - 1); }
    double step() const { return std::max(re_step(), im_step()); }
    Complex node(int i_im, int j_re) const {
        return {re_min + j_re * re_step(), im_min + i_im * im_step()};
    }
    std::size_t points() const { return static_cast<std::size_t>(resolution) * resolution; }
    void validate() const {
        if (resolution < 3 || resolution % 2 == 0)
            throw PreconditionViolation("grid resolution must be odd and >= 3");
        if (!(re_max > re_min) || !(im_max > im_min))
            throw PreconditionViolation("grid bounds must be increasing");
    }
};

// Per-node injectivity modulus over a grid; mask = (modulus <= tau).
struct SpectralScan {
    GridSpec grid;
    std::size_t trunc = 0;
    double tau = 0;
    std::vector<double> modulus;   // row-major: index = i_im * resolution + j_re
    std::vector<std::uint8_t> mask;

    std::size_t index(int i_im, int j_re) const {
        return static_cast<std::size_t>(i_im) * grid.resolution + j_re;
    }
};

inline SpectralScan left_spectrum_scan(const PerturbedShift& op, const GridSpec& grid, std::size_t n,
                                       double tau, unsigned threads = 0) {
    grid.validate();
    SpectralScan scan;
    scan.grid = grid;
    scan.trunc = n;
    scan.tau = tau;
    scan.modulus.assign(grid.points(), 0.0);
    scan.mask.assign(grid.points(), 0);
    detail::ModulusContext ctx = detail::make_modulus_context(op, n);
    int res = grid.resolution;
    parallel_for(grid.points(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t idx = b; idx < e; ++idx) {
            int i = static_cast<int>(idx) / res, j = static_cast<int>(idx) % res;
            double m = detail::modulus_bisect(ctx, grid.node(i, j));
            scan.modulus[idx] = m;
            scan.mask[idx] = m <= tau ? 1 : 0;
        }
    });
    return scan;
}

inline void write_scan_csv(const SpectralScan& scan, std::ostream& out) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "# grid %.17g %.17g %.17g %.17g %d N %zu tau %.17g\n",
                  scan.grid.re_min, scan.grid.re_max, scan.grid.im_min, scan.grid.im_max,
                  scan.grid.resolution, scan.trunc, scan.tau);
    out << buf << "re,im,modulus,in_left_spectrum\n";
    for (int i = 0; i < scan.grid.resolution; ++i)
        for (int j = 0; j < scan.grid.resolution; ++j) {
            Complex z = scan.grid.node(i, j);
            std::size_t idx = scan.index(i, j);
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g,%d\n", z.real(), z.imag(),
                          scan.modulus[idx], static_cast<int>(scan.mask[idx]));
            out << buf;
        }
}

inline void write_scan_csv(const SpectralScan& scan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_scan_csv(scan, out);
}

inline SpectralScan read_scan_csv(std::istream& in) {
    SpectralScan scan;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# grid ", 0) != 0)
        throw std::runtime_error("scan csv: missing grid header");
    {
        std::istringstream meta(line.substr(7));
        std::string tag;
        if (!(meta >> scan.grid.re_min >> scan.grid.re_max >> scan.grid.im_min >> scan.grid.im_max >>
              scan.grid.resolution >> tag >> scan.trunc))
            throw std::runtime_error("scan csv: malformed grid header");
        if (meta >> tag >> scan.tau) {
        }
    }
    if (!std::getline(in, line) || line != "re,im,modulus,in_left_spectrum")
        throw std::runtime_error("scan csv: missing column header");
    scan.modulus.reserve(scan.grid.points());
    scan.mask.reserve(scan.grid.points());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double re, im, m;
        int flag;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &re, &im, &m, &flag) != 4)
            throw std::runtime_error("scan csv: malformed row: " + line);
        scan.modulus.push_back(m);
        scan.mask.push_back(static_cast<std::uint8_t>(flag));
    }
    if (scan.modulus.size() != scan.grid.points()) throw std::runtime_error("scan csv: row count mismatch");
    return scan;
}

namespace detail {

// Largest singular value by power iteration on A^H A; exact enough for the
// Gelfand estimates (flat spectra converge immediately, gapped ones quickly).
inline double largest_singular_value(const MatrixXc& a) {
    if (a.size() == 0) return 0.0;
    VectorXc v = VectorXc::Ones(a.cols());
    v(0) += Complex(0.5, 0.25);
    v.normalize();
    double prev = 0;
    for (int it = 0; it < 400; ++it) {
        VectorXc w = a.adjoint() * (a * v);
        double nrm = w.norm();
        if (nrm == 0) return 0.0;
        v = w / nrm;
        if (it % 8 == 7) {
            double sigma = std::sqrt((a * v).squaredNorm());
            if (std::abs(sigma - prev) <= 1e-13 * std::max(1.0, sigma)) return sigma;
            prev = sigma;
        }
    }
    return (a * v).norm();
}

}  // namespace detail

struct RadiusEstimate {
    double value = 0;                // ||S^{n_max}||^{1/n_max}
    std::vector<double> sequence;    // estimates for n = 1..n_max
};

// Gelfand estimate ||S^n||^{1/n} from degree-tracked rectangular powers, so the
// power columns carry no truncation error.
inline RadiusEstimate spectral_radius_gelfand(const PerturbedShift& op, std::size_t n, std::size_t n_max) {
    if (n_max < 8) throw PreconditionViolation("spectral_radius_gelfand requires n_max >= 8");
    std::size_t b = 1 + op.f_degree();
    RadiusEstimate est;
    est.sequence.reserve(n_max);
    MatrixXc power = assemble_block(op, n, n + b);
    est.sequence.push_back(detail::largest_singular_value(power));
    for (std::size_t k = 2; k <= n_max; ++k) {
        MatrixXc step = assemble_block(op, n + (k - 1) * b, n + k * b);
        power = (step * power).eval();
        double sigma = detail::largest_singular_value(power);
        est.sequence.push_back(std::pow(sigma, 1.0 / static_cast<double>(k)));
    }
    est.value = est.sequence.back();
    return est;
}

// Orthonormal basis + gap diagnostics for an estimated subspace.
struct SubspaceEstimate {
    int dimension = 0;
    MatrixXc basis;                   // columns orthonormal
    std::vector<double> diagnostics;  // singular values / principal-angle sines
    double gap_ratio = 0;
};

// Kernel of S* from the trailing singular triples of the square truncation.
inline SubspaceEstimate adjoint_kernel(const PerturbedShift& op, std::size_t n, double gap) {
    MatrixXc a = assemble_square(op, n).adjoint();
    Eigen::BDCSVD<MatrixXc> svd(a, Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();  // descending
    std::size_t total = static_cast<std::size_t>(sv.size());
    double sigma_max = total ? sv(0) : 0.0;
    double cut = 1e-8 * std::max(1.0, sigma_max);
    std::size_t dim = 0;
    while (dim < total && sv(static_cast<Eigen::Index>(total - 1 - dim)) <= cut) ++dim;
    double kept = dim ? sv(static_cast<Eigen::Index>(total - dim)) : cut;
    double dropped = dim < total ? sv(static_cast<Eigen::Index>(total - 1 - dim))
                                 : std::numeric_limits<double>::infinity();
    SubspaceEstimate out;
    out.gap_ratio = dropped / std::max(kept, 1e-300);
    for (Eigen::Index i = sv.size() - 1; i >= 0 && out.diagnostics.size() < 8; --i)
        out.diagnostics.push_back(sv(i));  // ascending tail
    if (out.gap_ratio < gap)
        throw InconclusiveGap("adjoint kernel dimension ambiguous: gap ratio " + std::to_string(out.gap_ratio));
    out.dimension = static_cast<int>(dim);
    out.basis = svd.matrixV().rightCols(static_cast<Eigen::Index>(dim));
    return out;
}

// sin(principal angles) between span(q) and the candidate columns c, ascending,
// together with the principal directions inside span(c).
inline std::pair<std::vector<double>, MatrixXc> principal_angle_sines(const MatrixXc& q, const MatrixXc& c) {
    MatrixXc residual = c - q * (q.adjoint() * c);
    Eigen::BDCSVD<MatrixXc> svd(residual, Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();  // descending
    std::vector<double> sines;
    Eigen::Index k = sv.size();
    MatrixXc dirs(c.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        sines.push_back(std::min(1.0, sv(k - 1 - i)));
        dirs.col(i) = c * svd.matrixV().col(k - 1 - i);
    }
    return {sines, dirs};
}

namespace detail {

struct HyperRangeSlice {
    int dimension = 0;
    std::vector<double> sines;
    MatrixXc basis;
};

// Single-power estimate: principal angles between the numerical range of the
// row-masked K-th power and the low-degree window span{u_0..u_{K-1}}.
inline HyperRangeSlice hyper_range_slice(const MatrixXc& power, std::size_t k, std::size_t mask_rows,
                                         double angle_tol) {
    MatrixXc masked = power;
    if (mask_rows < static_cast<std::size_t>(masked.rows()))
        masked.bottomRows(masked.rows() - static_cast<Eigen::Index>(mask_rows)).setZero();
    Eigen::BDCSVD<MatrixXc> svd(masked, Eigen::ComputeThinU);
    Eigen::VectorXd sv = svd.singularValues();
    double cut = 1e-8 * std::max(sv.size() ? sv(0) : 0.0, 1e-300);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    MatrixXc q = svd.matrixU().leftCols(rank);
    MatrixXc window = MatrixXc::Zero(power.rows(), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) window(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
    auto [sines, dirs] = principal_angle_sines(q, window);
    HyperRangeSlice slice;
    slice.sines = sines;
    while (slice.dimension < static_cast<int>(sines.size()) && sines[slice.dimension] <= angle_tol)
        ++slice.dimension;
    slice.basis = dirs.leftCols(slice.dimension);
    return slice;
}

}  // namespace detail

// Hyper-range estimate on the square truncation. The K-th power of the exact
// compression is intersected (by principal angles) with the low-degree window
// span{u_0..u_{K-1}}: a direction surviving there is reachable through every
// power with coefficients forced on its first K terms, which is what separates
// span{h0} from the plain tail of high powers. Rows past N - K(1+deg f) are
// masked out before the SVD. The dimension must agree between powers K-1 and
// K and show a principal-angle gap of at least `gap`.
inline SubspaceEstimate hyper_range(const PerturbedShift& op, std::size_t n, std::size_t k, double gap,
                                    double angle_tol = 0.02) {
    if (k < 8) throw PreconditionViolation("hyper_range requires K >= 8 power steps");
    std::size_t b = 1 + op.f_degree();
    if (n < k * b + k + 8) throw PreconditionViolation("hyper_range truncation too small for K power steps");
    MatrixXc s = assemble_square(op, n);
    MatrixXc power = s;
    for (std::size_t i = 2; i + 1 <= k; ++i) power = (s * power).eval();
    MatrixXc power_prev = power;              // S^{K-1}
    power = (s * power).eval();               // S^K
    detail::HyperRangeSlice at_k = detail::hyper_range_slice(power, k, n - k * b, angle_tol);
    detail::HyperRangeSlice at_km1 = detail::hyper_range_slice(power_prev, k - 1, n - (k - 1) * b, angle_tol);
    if (at_k.dimension != at_km1.dimension)
        throw InconclusiveGap("hyper-range dimension not stable across power steps (" +
                              std::to_string(at_km1.dimension) + " vs " + std::to_string(at_k.dimension) + ")");
    SubspaceEstimate out;
    out.dimension = at_k.dimension;
    out.basis = at_k.basis;
    out.diagnostics = at_k.sines;
    double kept = out.dimension ? std::max(at_k.sines[out.dimension - 1], 1e-14) : angle_tol;
    double dropped = out.dimension < static_cast<int>(at_k.sines.size()) ? at_k.sines[out.dimension] : 1.0;
    out.gap_ratio = dropped / kept;
    if (out.gap_ratio < gap)
        throw InconclusiveGap("hyper-range principal-angle gap ambiguous: ratio " + std::to_string(out.gap_ratio));
    return out;
}

struct EigenResidual {
    double residual = 0;    // ||(S - lambda) h|| / ||h|| on the enlarged truncation
    double tail_bound = 0;  // norm bound for the part of h beyond the truncation
};

inline EigenResidual eigen_check(const PerturbedShift& op, Complex lambda, const PowerSeries& h,
                                 std::size_t n) {
    VectorXc v = series_to_orthonormal(op.space, h, n);
    double vn = v.norm();
    if (vn == 0) throw PreconditionViolation("eigen_check needs a nonzero candidate");
    MatrixXc a = assemble_rect(op, n);
    VectorXc image = a * v;
    for (std::size_t j = 0; j < n; ++j) image(static_cast<Eigen::Index>(j)) -= lambda * v(static_cast<Eigen::Index>(j));
    EigenResidual out;
    out.residual = image.norm() / vn;
    if (!h.is_polynomial()) {
        const GeometricTail& tail = *h.tail();
        double t = to_double(tail.ratio.abs_sq());
        double mass = 0, term;
        std::size_t j = std::max(n, tail.start);
        term = to_double(tail.scale.abs_sq()) * std::pow(t, static_cast<double>(j - tail.start)) /
               to_double(op.space.weight(j));
        for (std::size_t steps = 0; steps < 4096 && term > mass * 1e-18; ++steps, ++j) {
            mass += term;
            term *= t * to_double(op.space.ratio(j));
        }
        double growth = t * to_double(op.space.rho_max());
        if (growth < 1) mass += term / (1 - growth);
        out.tail_bound = std::sqrt(mass);
    }
    return out;
}

// Max over k < N/2 of the residual of u_k against span{S^n e : e in ker S*, n <= N}.
inline double wandering_subspace_check(const PerturbedShift& op, std::size_t n, double gap) {
    SubspaceEstimate kernel = adjoint_kernel(op, n, gap);
    if (kernel.dimension == 0) return 1.0;
    std::size_t b = 1 + op.f_degree();
    std::size_t len = n + (n + 1) * b;
    Complex gbar = op.gamma.conj().to_complex();
    std::vector<Complex> fcol(op.f_degree() + 1);
    for (std::size_t i = 0; i <= op.f_degree(); ++i)
        fcol[i] = gbar * op.f.coeff(i).to_complex() / op.space.sqrt_weight(i);
    std::vector<double> w(len);
    for (std::size_t j = 0; j < len; ++j) w[j] = op.space.shift_weight(j);

    MatrixXc orbit(static_cast<Eigen::Index>(len),
                   static_cast<Eigen::Index>(kernel.dimension * (n + 1)));
    Eigen::Index col = 0;
    for (int kb = 0; kb < kernel.dimension; ++kb) {
        VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(len));
        v.head(kernel.basis.rows()) = kernel.basis.col(kb);
        orbit.col(col++) = v;
        for (std::size_t step = 0; step < n; ++step) {
            VectorXc next = VectorXc::Zero(static_cast<Eigen::Index>(len));
            for (std::size_t j = 0; j + 1 < len; ++j) next(static_cast<Eigen::Index>(j + 1)) = w[j] * v(static_cast<Eigen::Index>(j));
            Complex c0 = v(0);
            if (!op.trivial())
                for (std::size_t i = 0; i < fcol.size(); ++i) next(static_cast<Eigen::Index>(i)) += c0 * fcol[i];
            v = next;
            orbit.col(col++) = v;
        }
    }
    Eigen::BDCSVD<MatrixXc> svd(orbit, Eigen::ComputeThinU);
    Eigen::VectorXd sv = svd.singularValues();
    double cut = 1e-10 * std::max(sv.size() ? sv(0) : 0.0, 1e-300);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    MatrixXc q = svd.matrixU().leftCols(rank);
    double worst = 0;
    for (std::size_t kidx = 0; kidx < n / 2; ++kidx) {
        VectorXc u = VectorXc::Zero(static_cast<Eigen::Index>(len));
        u(static_cast<Eigen::Index>(kidx)) = 1.0;
        double res = (u - q * (q.adjoint() * u)).norm();
        worst = std::max(worst, res);
    }
    return worst;
}

}  // namespace shiftspec
