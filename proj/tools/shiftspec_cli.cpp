#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "shiftspec/config.hpp"
#include "shiftspec/verify.hpp"

namespace fs = std::filesystem;
using namespace shiftspec;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

RunConfig load_config(const std::string& path, const std::string& out_dir, unsigned threads,
                      std::size_t seed) {
    RunConfig cfg;
    if (path.empty()) {
        cfg = parse_config(default_config_text());
    } else {
        std::ifstream in(path);
        if (!in) throw ConfigError(0, "cannot open config file: " + path);
        cfg = parse_config(in);
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads) cfg.threads = threads;
    if (seed) cfg.seed = seed;
    return cfg;
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out_dir);
}

std::string sigma_l_text(const LeftSpectrumPrediction& pred, const ComplexRational& c) {
    if (pred.inconclusive) return "inconclusive";
    if (pred.added_point) return "sigma_l(M_z) u {" + c.str() + "}";
    return "sigma_l(M_z) (unchanged)";
}

double base_radius(const RunConfig& cfg, const WeightSequence& space) {
    PerturbedShift base{space, PowerSeries::zero(), ComplexRational(0)};
    return spectral_radius_gelfand(base, cfg.trunc, cfg.n_max).value;
}

int cmd_analyze(const RunConfig& cfg) {
    WeightSequence space = cfg.space();
    double r_base = base_radius(cfg, space);
    SpectralScan dummy;  // predictions only; no scan needed here
    dummy.grid = cfg.grid;
    Json out = Json::object();
    out["schema"] = 1;
    out["space"] = to_string(space.kind());
    out["r_base_estimate"] = r_base;
    Json list = Json::array();

    std::printf("space: %s   (Gelfand r(M_z) estimate: %.4f)\n", to_string(space.kind()), r_base);
    for (const auto& p : cfg.perturbations) {
        PowerSeries f = p.f();
        ComplexRational c = pairing_with_constant(f, p.gamma);
        AnalyticityVerdict v = analyticity_verdict(f, p.gamma, space);
        PointSpectrumPrediction pt = predict_point_spectrum(f, p.gamma, space);
        LeftSpectrumPrediction ls = predict_left_spectrum(f, p.gamma, space, dummy);
        double r_pred = predict_spectral_radius(f, p.gamma, r_base);
        std::vector<PowerSeries> kernel = predict_adjoint_kernel(f, p.gamma, space);

        std::string analytic_text = !v.conclusive() ? "INCONCLUSIVE" : (v.analytic ? "analytic" : "NOT analytic");
        std::printf("[%s] f = [", p.id.c_str());
        for (std::size_t j = 0; j < p.f_coeffs.size(); ++j)
            std::printf("%s%s", j ? ", " : "", p.f_coeffs[j].str().c_str());
        std::printf("], g = %s * 1\n", p.gamma.str().c_str());
        std::printf("    %s", analytic_text.c_str());
        if (v.branch == AnalyticityBranch::zero_at_origin) std::printf(" (<f,g> = 0)");
        std::printf("\n");
        if (!pt.eigens.empty())
            std::printf("    eigenvalue %s (simple)\n", pt.eigens.front().value.str().c_str());
        else if (!pt.inconclusive)
            std::printf("    point spectrum empty\n");
        std::printf("    sigma_l = %s\n", sigma_l_text(ls, c).c_str());
        std::printf("    r = max(r(M_z), |%s|) = %.4f\n", c.str().c_str(), r_pred);
        std::printf("    ker S* dimension %zu\n", kernel.size());

        Json entry = Json::object();
        entry["id"] = p.id;
        entry["coupling"] = c.str();
        entry["analytic"] = !v.conclusive() ? Json("inconclusive") : Json(v.analytic);
        if (v.h0) {
            Json h0 = Json::array();
            for (std::size_t j = 0; j <= 8; ++j) h0.push_back(v.h0->coeff(j).str());
            entry["h0_prefix"] = h0;
            entry["h0_membership"] = to_string(v.membership.status);
        }
        if (!pt.eigens.empty()) entry["eigenvalue"] = pt.eigens.front().value.str();
        entry["sigma_l"] = sigma_l_text(ls, c);
        entry["r_predicted"] = r_pred;
        entry["ker_adjoint_dim"] = kernel.size();
        list.push_back(entry);
    }
    out["perturbations"] = list;
    ensure_out_dir(cfg);
    std::string path = cfg.out_dir + "/analyze.json";
    std::ofstream js(path);
    if (!js) {
        std::fprintf(stderr, "cannot write %s\n", path.c_str());
        return kExitIo;
    }
    js << out.dump(2) << '\n';
    std::printf("wrote %s\n", path.c_str());
    return kExitPass;
}

GridSpec scan_grid(const RunConfig& cfg, double r_base) {
    if (cfg.grid_explicit) return cfg.grid;
    double radius = r_base;
    for (const auto& p : cfg.perturbations) {
        ComplexRational c = pairing_with_constant(p.f(), p.gamma);
        radius = std::max(radius, std::sqrt(to_double(c.abs_sq())));
    }
    GridSpec g;
    g.re_min = g.im_min = -(radius + 0.5);
    g.re_max = g.im_max = radius + 0.5;
    g.resolution = cfg.grid.resolution;
    return g;
}

int cmd_scan(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    WeightSequence space = cfg.space();
    double r_base = base_radius(cfg, space);
    GridSpec grid = scan_grid(cfg, r_base);
    double tau = cfg.tau_value();
    try {
        PerturbedShift base{space, PowerSeries::zero(), ComplexRational(0)};
        SpectralScan base_scan = left_spectrum_scan(base, grid, cfg.trunc, tau, cfg.threads);
        write_scan_csv(base_scan, cfg.out_dir + "/scan_base.csv");
        std::printf("wrote %s/scan_base.csv\n", cfg.out_dir.c_str());
        for (const auto& p : cfg.perturbations) {
            PerturbedShift op{space, p.f(), p.gamma};
            SpectralScan scan = left_spectrum_scan(op, grid, cfg.trunc, tau, cfg.threads);
            write_scan_csv(scan, cfg.out_dir + "/scan_" + p.id + ".csv");
            std::printf("wrote %s/scan_%s.csv\n", cfg.out_dir.c_str(), p.id.c_str());
        }
    } catch (const std::ios_base::failure&) {
        return kExitIo;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitIo;
    }
    return kExitPass;
}

int cmd_verify(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    std::vector<TheoremReport> reports = run_suite(cfg.suite_instances(), cfg.suite_settings());
    bool all = true;
    for (const auto& r : reports) {
        all = all && r.pass;
        std::printf("[%s] %-28s %s\n", r.pass ? "PASS" : "FAIL", r.theorem_id.c_str(), r.instance.c_str());
        if (!r.pass)
            std::printf("       predicted: %s\n       observed:  %s\n", r.predicted.c_str(),
                        r.observed.c_str());
    }
    ensure_out_dir(cfg);
    std::string path = cfg.out_dir + "/report.json";
    std::ofstream js(path);
    if (!js) {
        std::fprintf(stderr, "cannot write %s\n", path.c_str());
        return kExitIo;
    }
    js << suite_report_json(reports).dump(2) << '\n';
    std::printf("%zu reports, %s; wrote %s\n", reports.size(), all ? "all pass" : "FAILURES PRESENT",
                path.c_str());
    return all ? kExitPass : kExitViolation;
}

int cmd_oracle(const RunConfig& cfg) {
    WeightSequence space = cfg.space();
    std::vector<PowerSeries> fs = detail::random_polynomials(20, 4, cfg.seed);
    std::size_t failures = 0, checks = 0;
    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        for (std::size_t n = 1; n <= 8; ++n) {
            TruncatedOperator lhs = power_formula(space, fs[fi], PowerSeries::constant(ComplexRational(1)), n, 16);
            TruncatedOperator rhs =
                power_direct(space, fs[fi], PowerSeries::constant(ComplexRational(1)), n, 16, lhs.rows());
            ++checks;
            if (!(lhs.mat == rhs.mat)) ++failures;
        }
    }
    std::printf("power expansion vs direct n-fold application (n <= 8): %zu checks, %zu failures\n",
                checks, failures);

    std::size_t dual_failures = 0;
    std::vector<PowerSeries> gs = {PowerSeries::zero(), PowerSeries::constant(ComplexRational(1)),
                                   PowerSeries::monomial(1),
                                   PowerSeries({ComplexRational(1), ComplexRational(Rational(1, 2))})};
    for (const auto& g : gs) {
        TruncatedOperator lhs = cauchy_dual_perturbed(space, PowerSeries::constant(ComplexRational(1)), g, 32);
        TruncatedOperator rhs = cauchy_dual_direct(space, PowerSeries::constant(ComplexRational(1)), g, 32);
        bool ok = true;
        for (std::size_t i = 0; i + 3 <= 32; ++i)
            for (std::size_t j = 0; j + 3 <= 32; ++j) ok = ok && lhs.mat.at(i, j) == rhs.mat.at(i, j);
        if (!ok) ++dual_failures;
    }
    std::printf("Cauchy dual formula vs direct S(S*S)^{-1}: 4 checks, %zu failures\n", dual_failures);
    return (failures + dual_failures) ? kExitViolation : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral verification toolkit for rank-one perturbed shifts"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string config_path, out_dir;
    unsigned threads = 0;
    std::size_t seed = 0;
    app.add_option("--config", config_path, "configuration file (line-oriented `section.key = value`)");
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--threads", threads, "worker threads for grid scans");
    app.add_option("--seed", seed, "seed for randomized oracle checks");

    auto* analyze = app.add_subcommand("analyze", "print per-perturbation predictions");
    auto* scan = app.add_subcommand("scan", "write injectivity-modulus grid scans as CSV");
    auto* verify = app.add_subcommand("verify", "reconcile predictions against computations, write JSON report");
    auto* oracle = app.add_subcommand("oracle", "brute-force cross-checks of the closed-form identities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path, out_dir, threads, seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (oracle->parsed()) return cmd_oracle(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitViolation;
    }
    return kExitConfig;
}
