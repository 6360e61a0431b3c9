#pragma once

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shiftspec/verify.hpp"

namespace shiftspec {

// Line-oriented `section.key = value` configuration. See README for the key
// list. Unknown keys are rejected; rationals use the "p/q" / "p/q+r/s i"
// literal syntax.
struct PerturbationConfig {
    std::string id;
    std::vector<ComplexRational> f_coeffs;  // low degree first
    ComplexRational gamma{Rational(1)};

    PowerSeries f() const { return PowerSeries(f_coeffs); }
};

struct RunConfig {
    SpaceKind space_kind = SpaceKind::hardy;
    std::vector<Rational> space_table;  // custom only
    std::optional<Rational> rho_min, rho_max;

    std::vector<PerturbationConfig> perturbations;

    std::size_t trunc = 256;      // numeric.N
    std::size_t n_max = 32;
    std::size_t power_steps = 12;  // numeric.K
    GridSpec grid;
    bool grid_explicit = false;   // any numeric.grid.* key present
    std::optional<double> tau;    // default 10 / sqrt(N)
    double gap = 10.0;
    double angle_tol = 0.02;
    SuiteTolerances tol;
    bool run_scans = true;

    std::string out_dir = "out";
    unsigned threads = 0;
    std::size_t seed = 12345;

    double tau_value() const { return tau ? *tau : 10.0 / std::sqrt(static_cast<double>(trunc)); }

    WeightSequence space() const {
        if (space_kind == SpaceKind::custom) {
            if (!rho_min || !rho_max)
                throw InvalidSpace("custom space requires space.rho_min and space.rho_max");
            return WeightSequence::custom(space_table, *rho_min, *rho_max);
        }
        return make_space(space_kind);
    }

    SuiteSettings suite_settings() const {
        SuiteSettings s;
        s.trunc = trunc;
        s.n_max = n_max;
        s.power_steps = power_steps;
        s.gap = gap;
        s.angle_tol = angle_tol;
        s.tau = tau;
        s.grid = grid;
        s.run_scans = run_scans;
        s.threads = threads;
        s.seed = seed;
        s.tol = tol;
        return s;
    }

    std::vector<SuiteInstance> suite_instances() const {
        std::vector<SuiteInstance> out;
        WeightSequence sp = space();
        for (const auto& p : perturbations) out.push_back({sp, p.f(), p.gamma, p.id});
        return out;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<ComplexRational> parse_coeff_list(const std::string& value, int line) {
    std::vector<ComplexRational> out;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(line, "empty coefficient in list");
        try {
            out.push_back(parse_complex_rational(item));
        } catch (const std::exception& e) {
            throw ConfigError(line, e.what());
        }
    }
    if (out.empty()) throw ConfigError(line, "empty coefficient list");
    return out;
}

inline double parse_double(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw ConfigError(line, "trailing characters in number: " + value);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(line, "not a number: " + value);
    }
}

inline long parse_long(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used != value.size()) throw ConfigError(line, "trailing characters in integer: " + value);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(line, "not an integer: " + value);
    }
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::map<std::string, std::size_t> pert_index;
    std::map<std::size_t, Rational> table_entries;
    std::string raw;
    int line_no = 0;
    bool grid_given = false;

    auto pert_for = [&](const std::string& id) -> PerturbationConfig& {
        auto it = pert_index.find(id);
        if (it == pert_index.end()) {
            pert_index[id] = cfg.perturbations.size();
            cfg.perturbations.push_back(PerturbationConfig{id, {}, ComplexRational(Rational(1))});
            return cfg.perturbations.back();
        }
        return cfg.perturbations[it->second];
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected `key = value`");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(line_no, "expected `key = value`");

        try {
            if (key == "space.kind") {
                if (value == "hardy")
                    cfg.space_kind = SpaceKind::hardy;
                else if (value == "bergman")
                    cfg.space_kind = SpaceKind::bergman;
                else if (value == "dirichlet")
                    cfg.space_kind = SpaceKind::dirichlet;
                else if (value == "custom")
                    cfg.space_kind = SpaceKind::custom;
                else
                    throw ConfigError(line_no, "unknown space kind: " + value);
            } else if (key.rfind("space.weight.", 0) == 0) {
                long idx = detail::parse_long(key.substr(13), line_no);
                if (idx < 0) throw ConfigError(line_no, "negative weight index");
                table_entries[static_cast<std::size_t>(idx)] = parse_rational(value);
            } else if (key == "space.rho_min") {
                cfg.rho_min = parse_rational(value);
            } else if (key == "space.rho_max") {
                cfg.rho_max = parse_rational(value);
            } else if (key.rfind("perturbation.", 0) == 0) {
                std::string rest = key.substr(13);
                std::size_t dot = rest.find('.');
                if (dot == std::string::npos)
                    throw ConfigError(line_no, "expected perturbation.<id>.f or perturbation.<id>.g");
                std::string id = rest.substr(0, dot);
                std::string field = rest.substr(dot + 1);
                if (field == "f")
                    pert_for(id).f_coeffs = detail::parse_coeff_list(value, line_no);
                else if (field == "g")
                    pert_for(id).gamma = parse_complex_rational(value);
                else
                    throw ConfigError(line_no, "unknown perturbation field: " + field);
            } else if (key == "numeric.N") {
                long v = detail::parse_long(value, line_no);
                if (v < 32) throw ConfigError(line_no, "numeric.N must be at least 32");
                cfg.trunc = static_cast<std::size_t>(v);
            } else if (key == "numeric.n_max") {
                cfg.n_max = static_cast<std::size_t>(detail::parse_long(value, line_no));
            } else if (key == "numeric.K") {
                cfg.power_steps = static_cast<std::size_t>(detail::parse_long(value, line_no));
            } else if (key == "numeric.tau") {
                cfg.tau = detail::parse_double(value, line_no);
            } else if (key == "numeric.gap") {
                cfg.gap = detail::parse_double(value, line_no);
            } else if (key == "numeric.angle_tol") {
                cfg.angle_tol = detail::parse_double(value, line_no);
            } else if (key == "numeric.grid.re_min") {
                cfg.grid.re_min = detail::parse_double(value, line_no);
                grid_given = true;
            } else if (key == "numeric.grid.re_max") {
                cfg.grid.re_max = detail::parse_double(value, line_no);
                grid_given = true;
            } else if (key == "numeric.grid.im_min") {
                cfg.grid.im_min = detail::parse_double(value, line_no);
                grid_given = true;
            } else if (key == "numeric.grid.im_max") {
                cfg.grid.im_max = detail::parse_double(value, line_no);
                grid_given = true;
            } else if (key == "numeric.grid.resolution") {
                long v = detail::parse_long(value, line_no);
                if (v < 3 || v % 2 == 0)
                    throw ConfigError(line_no, "grid resolution must be odd and >= 3");
                cfg.grid.resolution = static_cast<int>(v);
                grid_given = true;
            } else if (key == "numeric.run_scans") {
                if (value == "true" || value == "1")
                    cfg.run_scans = true;
                else if (value == "false" || value == "0")
                    cfg.run_scans = false;
                else
                    throw ConfigError(line_no, "numeric.run_scans must be true or false");
            } else if (key == "tolerance.eigen_residual") {
                cfg.tol.eigen_residual = detail::parse_double(value, line_no);
            } else if (key == "tolerance.radius_rel") {
                cfg.tol.radius_rel = detail::parse_double(value, line_no);
            } else if (key == "tolerance.angle") {
                cfg.tol.angle = detail::parse_double(value, line_no);
            } else if (key == "tolerance.wsp_residual") {
                cfg.tol.wsp_residual = detail::parse_double(value, line_no);
            } else if (key == "output.dir") {
                cfg.out_dir = value;
            } else {
                throw ConfigError(line_no, "unknown key: " + key);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(line_no, e.what());
        }
    }

    if (!table_entries.empty()) {
        std::size_t max_idx = table_entries.rbegin()->first;
        cfg.space_table.assign(max_idx + 1, Rational(0));
        for (const auto& [idx, v] : table_entries) cfg.space_table[idx] = v;
        for (std::size_t j = 0; j <= max_idx; ++j)
            if (cfg.space_table[j] == 0)
                throw ConfigError(0, "weight table has a gap at index " + std::to_string(j));
    }
    if (cfg.space_kind == SpaceKind::custom) {
        try {
            cfg.space();
        } catch (const std::exception& e) {
            throw ConfigError(0, e.what());
        }
    } else if (!table_entries.empty() || cfg.rho_min || cfg.rho_max) {
        throw ConfigError(0, "weight table / ratio bounds are only valid with space.kind = custom");
    }
    for (const auto& p : cfg.perturbations)
        if (p.f_coeffs.empty())
            throw ConfigError(0, "perturbation " + p.id + " has no f coefficients");
    cfg.grid.validate();
    cfg.grid_explicit = grid_given;
    return cfg;
}

inline RunConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// The stock verification setup: the Hardy space with six representative
// perturbations (eigenvalue inside/outside, zero coupling, kernel-condition
// edge cases).
inline std::string default_config_text() {
    return
        "space.kind = hardy\n"
        "perturbation.p1.f = 2\n"
        "perturbation.p2.f = 1\n"
        "perturbation.p3.f = 1, 1\n"          // f = 1 + z
        "perturbation.p4.f = 0, -1\n"         // f = -z
        "perturbation.p5.f = 1/2, -1\n"       // f = 1/2 - z
        "perturbation.p6.f = 0, -1, 1\n"      // f = z^2 - z
        "numeric.N = 256\n";
}

}  // namespace shiftspec
