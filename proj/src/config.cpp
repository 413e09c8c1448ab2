#include "bosegas/config.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "bosegas/errors.hpp"

namespace bosegas {

namespace {

std::vector<double> read_grid(const TomlTable& t, const std::string& name) {
    const std::string values_key = name + "_values";
    const std::string linspace_key = name + "_linspace";
    const bool has_values = t.has("run", values_key);
    const bool has_linspace = t.has("run", linspace_key);
    if (has_values == has_linspace) {
        throw ConfigError("[run] needs exactly one of '" + values_key + "' or '" +
                          linspace_key + "'");
    }
    if (has_values) {
        const auto grid = t.get_double_array("run", values_key);
        if (grid.empty()) throw ConfigError("[run] " + values_key + " must be nonempty");
        return grid;
    }
    const auto spec = t.get_double_array("run", linspace_key);
    if (spec.size() != 3) {
        throw ConfigError("[run] " + linspace_key + " must be [start, stop, count]");
    }
    const int count = static_cast<int>(spec[2]);
    if (count < 1 || spec[2] != std::floor(spec[2])) {
        throw ConfigError("[run] " + linspace_key + " count must be a positive integer");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid.push_back(count == 1 ? spec[0]
                                  : spec[0] + (spec[1] - spec[0]) * i / (count - 1));
    }
    return grid;
}

Observable read_observable(const TomlTable& t, const MomentumLattice& lat) {
    if (!t.has_section("observable")) throw ConfigError("missing [observable] table");
    const std::string preset = t.get_string_or("observable", "preset", "");
    if (preset == "cos-mode") {
        const auto k = t.get_int_array("observable", "k");
        if (k.empty() || k.size() > 3) {
            throw ConfigError("[observable] k must have 1..3 integer components");
        }
        std::array<int, 3> kk{0, 0, 0};
        for (std::size_t i = 0; i < k.size(); ++i) kk[i] = static_cast<int>(k[i]);
        return cos_mode_observable(lat, kk);
    }
    if (preset == "identity") return identity_observable(lat);
    if (!preset.empty()) throw ConfigError("unknown observable preset '" + preset + "'");

    if (!t.has("observable", "matrix")) {
        throw ConfigError("[observable] needs 'preset' or 'matrix'");
    }
    const auto flat = t.get_double_array("observable", "matrix");
    const int m = lat.size();
    if (static_cast<int>(flat.size()) != 2 * m * m) {
        throw ConfigError("[observable] matrix must hold 2*M^2 reals (re,im interleaved, "
                          "row-major), M = " + std::to_string(m));
    }
    Eigen::MatrixXcd mat(m, m);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            const std::size_t base = 2 * (static_cast<std::size_t>(r) * m + c);
            mat(r, c) = cplx(flat[base], flat[base + 1]);
        }
    }
    return build_observable(mat, lat, 1e-10);
}

Potential read_potential(const TomlTable& t, const MomentumLattice& lat) {
    if (!t.has_section("potential")) throw ConfigError("missing [potential] table");
    const std::string preset = t.get_string_or("potential", "preset", "");
    if (preset == "shell") {
        const double radius = t.get_double_or("potential", "radius", 1.0);
        const double scale = t.get_double("potential", "scale");
        return shell_potential(lat, radius, scale);
    }
    if (preset == "zero") return zero_potential(lat);
    if (!preset.empty()) throw ConfigError("unknown potential preset '" + preset + "'");
    if (!t.has("potential", "coeffs")) {
        throw ConfigError("[potential] needs 'preset' or 'coeffs'");
    }
    const auto coeffs = t.get_double_array("potential", "coeffs");
    Eigen::VectorXd v(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) v[static_cast<Eigen::Index>(i)] = coeffs[i];
    return validate_potential(v, lat);
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

RunConfig run_config_from_table(const TomlTable& t) {
    RunConfig cfg;
    if (!t.has_section("lattice")) throw ConfigError("missing [lattice] table");
    cfg.lattice = build_lattice(static_cast<int>(t.get_int("lattice", "dimension")),
                                static_cast<int>(t.get_int("lattice", "p_max")));
    cfg.potential = read_potential(t, cfg.lattice);
    cfg.observable = read_observable(t, cfg.lattice);

    for (long long n : t.get_int_array("run", "n_list")) {
        if (n < 2) throw ConfigError("[run] n_list entries must be >= 2");
        cfg.n_list.push_back(static_cast<int>(n));
    }
    if (cfg.n_list.empty()) throw ConfigError("[run] n_list must be nonempty");

    cfg.lambda_grid = read_grid(t, "lambda");
    cfg.x_grid = read_grid(t, "x");
    if (t.has("run", "s_values")) {
        cfg.s_grid = t.get_double_array("run", "s_values");
    } else {
        cfg.s_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    }
    if (cfg.s_grid.empty()) throw ConfigError("[run] s_values must be nonempty");
    for (double s : cfg.s_grid) {
        if (s < 0.0 || s > 1.0) throw ConfigError("[run] s_values must lie in [0,1]");
    }
    for (double l : cfg.lambda_grid) {
        if (l < 0.0) throw ConfigError("[run] lambda grid must be >= 0");
    }

    if (t.has("run", "cap")) cfg.cap = static_cast<int>(t.get_int("run", "cap"));
    cfg.n_max = static_cast<int>(t.get_int_or("run", "n_max", 8));
    if (cfg.n_max < 0) throw ConfigError("[run] n_max must be >= 0");
    cfg.rate_window_lo = t.get_double_or("run", "rate_window_lo", 0.0);
    cfg.rate_window_hi = t.get_double_or("run", "rate_window_hi", 0.0);

    cfg.solver.eig_tol = t.get_double_or("solver", "tol", 1e-10);
    cfg.solver.expm_tol = t.get_double_or("solver", "expm_tol", 1e-10);
    cfg.solver.dense_limit = t.get_int_or("solver", "dense_limit", 4000);
    cfg.solver.max_lanczos = static_cast<int>(t.get_int_or("solver", "max_lanczos", 400));
    cfg.solver.kpm_resolution = t.get_double_or("solver", "kpm_resolution", 1e-3);
    cfg.solver.seed = static_cast<std::uint64_t>(t.get_int_or("solver", "seed", 0x5deece66dLL));
    cfg.max_basis = t.get_int_or("solver", "max_basis", 2000000);
    if (cfg.solver.eig_tol <= 0.0 || cfg.solver.expm_tol <= 0.0 ||
        cfg.solver.kpm_resolution <= 0.0) {
        throw ConfigError("[solver] tolerances must be > 0");
    }

    cfg.output_dir = t.get_string_or("output", "dir", "out");
    cfg.config_hash = fnv1a_hex(t.raw_text());
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_table(TomlTable::parse_file(path));
}

}  // namespace bosegas
