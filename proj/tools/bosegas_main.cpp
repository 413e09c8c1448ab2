#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bosegas/config.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/excitations.hpp"
#include "bosegas/ldp.hpp"
#include "bosegas/parallel.hpp"
#include "bosegas/report.hpp"

namespace bg = bosegas;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    long long dense_limit = -1;
    double tol = -1.0;
    std::string inject_fault;
};

struct Manifest {
    bg::json entries = bg::json::array();
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void record(const std::string& path) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        entries.push_back({{"file", path}, {"elapsed_seconds", secs}});
    }
};

bg::RunConfig load(const CliOptions& cli) {
    bg::RunConfig cfg = bg::load_run_config(cli.config_path);
    if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
    if (cli.dense_limit >= 0) cfg.solver.dense_limit = cli.dense_limit;
    if (cli.tol > 0.0) {
        cfg.solver.eig_tol = cli.tol;
        cfg.solver.expm_tol = cli.tol;
    }
    bg::ensure_directory(cfg.output_dir);
    return cfg;
}

void write_manifest(const bg::RunConfig& cfg, const std::string& subcommand,
                    Manifest& manifest) {
    bg::json j = bg::report_preamble(cfg.config_hash, subcommand);
    j["note"] = "manifest carries wall-clock timings and is the only non-reproducible output";
    j["outputs"] = manifest.entries;
    bg::write_text_file(cfg.output_dir + "/manifest.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------- //

int cmd_bogoliubov(const bg::RunConfig& cfg) {
    Manifest manifest;
    const bg::BogoliubovData data =
        bg::bogoliubov_data(cfg.potential, cfg.observable, cfg.lattice);

    bg::json j = bg::report_preamble(cfg.config_hash, "bogoliubov");
    const auto exc = cfg.lattice.excitation_modes();
    bg::json modes = bg::json::array();
    for (std::size_t e = 0; e < exc.size(); ++e) {
        const auto& n = cfg.lattice.modes[static_cast<std::size_t>(exc[e])];
        modes.push_back({n[0], n[1], n[2]});
    }
    j["excitation_modes"] = modes;
    j["mu"] = std::vector<double>(data.mu.data(), data.mu.data() + data.mu.size());
    j["dispersion"] = std::vector<double>(data.dispersion.data(),
                                          data.dispersion.data() + data.dispersion.size());
    bg::json fj = bg::json::array(), faj = bg::json::array();
    for (Eigen::Index i = 0; i < data.f.size(); ++i) {
        fj.push_back({data.f[i].real(), data.f[i].imag()});
        faj.push_back({data.f_alt[i].real(), data.f_alt[i].imag()});
    }
    j["f"] = fj;
    j["f_alt"] = faj;
    j["f_norm_sq"] = data.f_norm_sq;
    j["f_alt_norm_sq"] = data.f_alt_norm_sq;
    j["depletion"] = data.depletion;
    for (const auto& [label, value] : data.energy_candidates) {
        j["energy_candidates"][label] = value;
    }

    // Closed-form tail mass of the quasi-free state at the per-mode cap.
    double tail = 0.0;
    {
        double mass = 1.0;
        for (Eigen::Index e = 0; e < data.mu.size(); ++e) {
            const double t2 = std::tanh(data.mu[e]) * std::tanh(data.mu[e]);
            double pair_mass = 0.0;
            double weight = 1.0 / (std::cosh(data.mu[e]) * std::cosh(data.mu[e]));
            for (int n = 0; n <= cfg.n_max; ++n) {
                pair_mass += weight;
                weight *= t2;
            }
            mass *= std::sqrt(pair_mass);  // each unordered pair visited twice
        }
        tail = 1.0 - mass;
    }
    j["quasifree_tail_mass_at_n_max"] = tail;
    j["n_max"] = cfg.n_max;

    const std::string path = cfg.output_dir + "/bogoliubov.json";
    bg::write_text_file(path, j.dump(2) + "\n");
    manifest.record(path);
    write_manifest(cfg, "bogoliubov", manifest);
    std::printf("bogoliubov: %s (f_norm_sq = %s)\n", path.c_str(),
                bg::format_double(data.f_norm_sq).c_str());
    return 0;
}

int cmd_ed(const bg::RunConfig& cfg) {
    Manifest manifest;
    bg::json j = bg::report_preamble(cfg.config_hash, "ed");
    bg::CsvWriter csv({"N", "dim", "energy", "gap", "residual", "depletion", "var_over_n"});
    bg::json rows = bg::json::array();
    for (int N : cfg.n_list) {
        const bg::SectorBasis sector = bg::enumerate_sector(cfg.lattice.size(), N, cfg.max_basis);
        const bg::SparseOperator h =
            bg::hamiltonian_sector(cfg.lattice, cfg.potential, sector, N);
        const bg::GroundStateResult gs = bg::ground_state(h, cfg.solver);
        const bg::SparseOperator nplus = bg::nplus_sector(cfg.lattice, sector);
        const double depl = std::real(gs.vector.dot(nplus.apply(gs.vector)));
        const bg::SparseOperator d_gamma = bg::one_body_sector(cfg.observable.centered, sector);
        const bg::Cumulants cum = bg::cumulants(d_gamma, gs.vector, N);
        csv.add_row({static_cast<double>(N), static_cast<double>(sector.dim), gs.energy, gs.gap,
                     gs.residual, depl, cum.k2});
        rows.push_back({{"N", N},
                        {"dim", sector.dim},
                        {"energy", gs.energy},
                        {"gap", gs.gap},
                        {"residual", gs.residual},
                        {"depletion", depl},
                        {"var_over_n", cum.k2},
                        {"degenerate", gs.degenerate}});
    }
    j["rows"] = rows;
    const std::string json_path = cfg.output_dir + "/ed.json";
    const std::string csv_path = cfg.output_dir + "/ed.csv";
    bg::write_text_file(json_path, j.dump(2) + "\n");
    bg::write_text_file(csv_path, csv.text());
    manifest.record(json_path);
    manifest.record(csv_path);
    write_manifest(cfg, "ed", manifest);
    std::printf("ed: %s\n", json_path.c_str());
    return 0;
}

int cmd_ldp(const bg::RunConfig& cfg) {
    Manifest manifest;
    const bg::SweepResult sweep =
        bg::n_sweep(cfg.lattice, cfg.potential, cfg.observable, cfg.n_list, cfg.lambda_grid,
                    cfg.x_grid, cfg.solver, cfg.rate_window_lo, cfg.rate_window_hi);

    for (const auto& slice : sweep.slices) {
        bg::json j = bg::report_preamble(cfg.config_hash, "ldp");
        j["N"] = slice.n_particles;
        j["ground_energy"] = slice.ground_energy;
        j["gap"] = slice.gap;
        j["cumulants"] = {{"k1", slice.cum.k1},
                          {"k2", slice.cum.k2},
                          {"k3", slice.cum.k3},
                          {"k4", slice.cum.k4}};
        j["var_over_n"] = slice.var_over_n;
        j["f_norm_sq"] = sweep.bog.f_norm_sq;
        j["f_alt_norm_sq"] = sweep.bog.f_alt_norm_sq;
        j["scgf_convexity_margin"] = slice.curve.min_slope_increase;
        j["scgf_weakly_monotone"] = slice.curve.weakly_monotone;
        j["legendre_boundary_hits"] = slice.rate.boundary_hits;
        j["clt_distance_active"] = slice.clt_dist_active;
        j["clt_distance_alt"] = slice.clt_dist_alt;
        double min_margin = std::numeric_limits<double>::infinity();
        int vacuous = 0;
        for (const auto& row : slice.chernoff) {
            if (row.vacuous)
                ++vacuous;
            else
                min_margin = std::min(min_margin, row.margin);
        }
        j["chernoff_min_margin"] = min_margin;
        j["chernoff_vacuous_cells"] = vacuous;

        const std::string tag = std::to_string(slice.n_particles);
        bg::CsvWriter scgf_csv({"lambda", "scgf"});
        for (std::size_t i = 0; i < slice.curve.lambda.size(); ++i) {
            scgf_csv.add_row({slice.curve.lambda[i], slice.curve.value[i]});
        }
        bg::CsvWriter tail_csv(
            {"x", "p_greater", "p_geq", "empirical_rate", "legendre_rate", "chernoff_margin"});
        for (std::size_t i = 0; i < slice.tails.x.size(); ++i) {
            tail_csv.add_row({slice.tails.x[i], slice.tails.p_greater[i], slice.tails.p_geq[i],
                              slice.tails.empirical_rate[i], slice.rate.value[i],
                              slice.chernoff[i].margin});
        }
        const std::string scgf_path = cfg.output_dir + "/scgf_N" + tag + ".csv";
        const std::string tails_path = cfg.output_dir + "/tails_N" + tag + ".csv";
        const std::string json_path = cfg.output_dir + "/ldp_N" + tag + ".json";
        bg::write_text_file(scgf_path, scgf_csv.text());
        bg::write_text_file(tails_path, tail_csv.text());
        bg::write_text_file(json_path, j.dump(2) + "\n");
        manifest.record(scgf_path);
        manifest.record(tails_path);
        manifest.record(json_path);
    }

    bg::json summary = bg::report_preamble(cfg.config_hash, "ldp");
    summary["n_list"] = sweep.n_list;
    summary["var_extrapolated"] = sweep.var_extrapolated;
    summary["active_convention"] = sweep.active_convention;
    summary["f_norm_sq_active"] = sweep.f_norm_sq_active;
    summary["rate_ratio_tail"] = sweep.rate_ratio_tail;
    summary["rate_ratio_legendre"] = sweep.rate_ratio_legendre;
    summary["residual_exponent"] = sweep.residual_exponent;
    const std::string sum_path = cfg.output_dir + "/ldp.json";
    bg::write_text_file(sum_path, summary.dump(2) + "\n");
    manifest.record(sum_path);
    write_manifest(cfg, "ldp", manifest);
    std::printf("ldp: %s\n", sum_path.c_str());
    return 0;
}

int cmd_sweep(const bg::RunConfig& cfg) {
    Manifest manifest;
    const bg::SweepResult sweep =
        bg::n_sweep(cfg.lattice, cfg.potential, cfg.observable, cfg.n_list, cfg.lambda_grid,
                    cfg.x_grid, cfg.solver, cfg.rate_window_lo, cfg.rate_window_hi);
    std::vector<int> diag_n;
    for (int n : cfg.n_list) diag_n.push_back(n);
    const bg::InterpolationDiagnostics diag =
        bg::interpolation_diagnostics(cfg.s_grid, diag_n, cfg.lattice, cfg.potential, cfg.solver);

    bg::json j = bg::report_preamble(cfg.config_hash, "sweep");
    j["n_list"] = sweep.n_list;
    j["extrapolation_skipped"] = sweep.n_list.size() < 2;
    j["var_over_n"] = bg::json::array();
    for (const auto& slice : sweep.slices) j["var_over_n"].push_back(slice.var_over_n);
    j["var_extrapolated"] = sweep.var_extrapolated;
    j["var_fit_r_squared"] = sweep.var_fit_r_squared;
    j["var_richardson_last2"] = sweep.var_richardson_last2;
    j["f_norm_sq"] = sweep.bog.f_norm_sq;
    j["f_alt_norm_sq"] = sweep.bog.f_alt_norm_sq;
    j["active_convention"] = sweep.active_convention;
    j["f_norm_sq_active"] = sweep.f_norm_sq_active;
    j["rate_window"] = {sweep.window_lo, sweep.window_hi};
    j["rate_ratio_tail"] = sweep.rate_ratio_tail;
    j["tail_fit_parameters"] = sweep.tail_fit_parameters;
    j["tail_samples"] = sweep.tail_samples.size();
    j["rate_ratio_legendre"] = sweep.rate_ratio_legendre;
    j["residual_exponent"] = sweep.residual_exponent;
    j["clt_distances"] = sweep.clt_distances;
    j["interpolation_min_gap"] = diag.min_gap;
    j["interpolation_gap_dip_flag"] = diag.gap_dip_flag;
    j["interpolation_moment_growth_flag"] = diag.moment_growth_flag;

    bg::CsvWriter var_csv({"N", "var_over_n", "f_norm_sq_active", "abs_error"});
    for (std::size_t i = 0; i < sweep.slices.size(); ++i) {
        var_csv.add_row({static_cast<double>(sweep.n_list[i]), sweep.slices[i].var_over_n,
                         sweep.f_norm_sq_active,
                         std::abs(sweep.slices[i].var_over_n - sweep.f_norm_sq_active)});
    }
    bg::CsvWriter rate_csv({"x", "rate_extrapolated", "leading_term", "ratio", "residual"});
    for (const auto& row : sweep.rate_rows) {
        rate_csv.add_row({row.x, row.rate_extrapolated, row.leading_term, row.ratio,
                          row.residual});
    }
    bg::CsvWriter atom_csv({"N", "x", "rate_raw", "rate_corrected", "tilt_on_boundary"});
    for (const auto& s : sweep.tail_samples) {
        atom_csv.add_row({static_cast<double>(s.n_particles), s.x, s.rate_raw,
                          s.rate_corrected, s.tilt_on_boundary ? 1.0 : 0.0});
    }
    bg::CsvWriter clt_csv({"N", "kolmogorov_distance"});
    for (std::size_t i = 0; i < sweep.clt_distances.size(); ++i) {
        clt_csv.add_row({static_cast<double>(sweep.n_list[i]), sweep.clt_distances[i]});
    }
    bg::CsvWriter interp_csv({"s", "N", "energy", "gap", "m1", "m2", "remainder_norm"});
    for (const auto& c : diag.cells) {
        interp_csv.add_row({c.s, static_cast<double>(c.n_particles), c.energy, c.gap, c.moment1,
                            c.moment2, c.remainder_norm});
    }

    const std::vector<std::pair<std::string, std::string>> files = {
        {"/sweep_variance.csv", var_csv.text()},
        {"/sweep_rate.csv", rate_csv.text()},
        {"/sweep_rate_atoms.csv", atom_csv.text()},
        {"/sweep_clt.csv", clt_csv.text()},
        {"/interpolation.csv", interp_csv.text()},
        {"/sweep.json", j.dump(2) + "\n"},
    };
    for (const auto& [name, content] : files) {
        bg::write_text_file(cfg.output_dir + name, content);
        manifest.record(cfg.output_dir + name);
    }
    write_manifest(cfg, "sweep", manifest);
    std::printf("sweep: %s/sweep.json (rate ratio tail %s, legendre %s)\n",
                cfg.output_dir.c_str(), bg::format_double(sweep.rate_ratio_tail).c_str(),
                bg::format_double(sweep.rate_ratio_legendre).c_str());
    return 0;
}

int cmd_verify(const bg::RunConfig& cfg, const std::string& inject_fault) {
    Manifest manifest;
    bg::json j = bg::report_preamble(cfg.config_hash, "verify");
    bool all_pass = true;
    bg::json checks = bg::json::array();

    auto check = [&](const std::string& name, double residual, double tol) {
        const bool pass = residual <= tol;
        all_pass = all_pass && pass;
        checks.push_back(
            {{"name", name}, {"residual", residual}, {"tolerance", tol}, {"pass", pass}});
        std::printf("%-48s %12.3e  (tol %8.1e)  %s\n", name.c_str(), residual, tol,
                    pass ? "PASS" : "FAIL");
    };

    const bool zero_potential = cfg.potential.l1_norm == 0.0;

    for (int N : cfg.n_list) {
        const bg::SectorBasis sector = bg::enumerate_sector(cfg.lattice.size(), N, cfg.max_basis);
        const bg::CappedBasis capped =
            bg::enumerate_capped(cfg.lattice.size() - 1, N, N, cfg.max_basis);
        const bg::ExcitationMap map =
            bg::excitation_unitary_map(sector, capped, cfg.lattice.zero_index);
        bg::ExcitationFamily fam = bg::build_excitation_family(cfg.lattice, cfg.potential, sector,
                                                               capped, map, N);
        if (inject_fault == "q-assembly") {
            // Test hook: perturb the quadratic operator so the identity fails.
            Eigen::VectorXd bump = Eigen::VectorXd::Zero(capped.dim);
            bump[0] = 1e-3;
            fam.Q = bg::linear_combination(fam.Q, 1.0, bg::diagonal_operator(bump), 1.0);
        }
        const bg::SparseOperator r_trans =
            bg::remainder_transcribed(cfg.lattice, cfg.potential, capped, N);
        const double q_norm = std::max(fam.Q.frobenius_norm(), 1e-300);
        const bg::SparseOperator sum =
            bg::linear_combination(fam.Q, 1.0, r_trans, 1.0);
        const double identity_residual = bg::frobenius_distance(fam.G, sum) / q_norm;
        check("excitation_identity_N" + std::to_string(N), identity_residual, 1e-10);
        const double r_mismatch = bg::max_entry_distance(r_trans, fam.R_operational);
        check("remainder_two_routes_N" + std::to_string(N), r_mismatch,
              1e-10 * std::max(1.0, fam.R_operational.max_abs()));
        if (zero_potential) {
            check("remainder_vanishes_N" + std::to_string(N), fam.R_operational.max_abs(),
                  1e-12);
        }
    }

    // Modified commutation relations at the smallest N.
    {
        const int N = cfg.n_list.front();
        const bg::CappedBasis capped =
            bg::enumerate_capped(cfg.lattice.size() - 1, N, N, cfg.max_basis);
        const int m = capped.num_modes;
        double worst = 0.0;
        for (int p = 0; p < m; ++p) {
            for (int q = 0; q < m; ++q) {
                const Eigen::MatrixXcd bp = bg::b_annihilator(p, capped, N).dense();
                const Eigen::MatrixXcd bq_dag = bg::b_creator(q, capped, N).dense();
                Eigen::MatrixXcd lhs = bp * bq_dag - bq_dag * bp;
                Eigen::MatrixXcd unit_pq = Eigen::MatrixXcd::Zero(m, m);
                unit_pq(q, p) = 1.0;  // a^dag_q a_p
                Eigen::MatrixXcd rhs = -bg::one_body_excitation_general(unit_pq, capped).dense() /
                                       static_cast<double>(N);
                if (p == q) {
                    Eigen::VectorXd d(capped.dim);
                    for (std::int64_t i = 0; i < capped.dim; ++i) {
                        d[i] = 1.0 -
                               static_cast<double>(capped.total_occ[static_cast<std::size_t>(i)]) /
                                   N;
                    }
                    rhs += d.asDiagonal().toDenseMatrix().cast<bg::cplx>();
                }
                worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
            }
        }
        check("modified_commutator", worst, 1e-12);
    }

    // Conjugation identities on the full excitation space.
    {
        const int N = std::min(4, cfg.n_list.back());
        const bg::CappedBasis capped =
            bg::enumerate_capped(cfg.lattice.size() - 1, N, N, cfg.max_basis);
        Eigen::VectorXcd h = Eigen::VectorXcd::Zero(capped.num_modes);
        const auto exc = cfg.lattice.excitation_modes();
        std::vector<int> lat_to_exc(static_cast<std::size_t>(cfg.lattice.size()), -1);
        for (int e = 0; e < static_cast<int>(exc.size()); ++e) {
            lat_to_exc[static_cast<std::size_t>(exc[static_cast<std::size_t>(e)])] = e;
        }
        for (int e = 0; e < capped.num_modes; ++e) {
            const int pe = lat_to_exc[static_cast<std::size_t>(
                cfg.lattice.pair_map[exc[static_cast<std::size_t>(e)]])];
            const double base = 0.5 + 0.25 * std::min(e, pe);
            h[e] = base;
        }
        h *= 0.2 / h.norm();
        const bg::ConjugationReport rep =
            bg::verify_conjugation_identities(h, 0.3, N, cfg.lattice, capped, cfg.solver);
        check("ladder_conjugation", rep.b_conjugation, 1e-8);
        check("one_body_conjugation", rep.dgamma_conjugation, 1e-8);
        for (int i = 0; i < 4; ++i) {
            check("number_scaling_" + std::to_string(i), rep.number_scaling[i], 1e-10);
        }
        check("exponential_derivative_fd", rep.derivative_fd, 1e-6);
        j["derivative_fd_richardson"] = rep.derivative_fd_richardson;
    }

    // Dual-route moment generating function.
    {
        const int N = std::min(6, cfg.n_list.back());
        std::vector<double> lambdas = {0.0};
        for (double l : cfg.lambda_grid) {
            if (l > 0.0 && lambdas.size() < 4) lambdas.push_back(l);
        }
        const bg::MgfPathwayReport rep = bg::mgf_pathway_check(
            lambdas, N, cfg.lattice, cfg.potential, cfg.observable, cfg.solver);
        check("mgf_dual_route", rep.max_relative_mismatch, 1e-9);
        j["mgf_gap_exponent_plus"] = rep.gap_exponent_plus;
        j["mgf_gap_exponent_minus"] = rep.gap_exponent_minus;
    }

    // Sampled ladder bound ||b(h) xi|| <= ||h|| ||N_+^{1/2} xi||.
    {
        const int N = cfg.n_list.front();
        const bg::CappedBasis capped =
            bg::enumerate_capped(cfg.lattice.size() - 1, N, N, cfg.max_basis);
        std::mt19937_64 rng(cfg.solver.seed + 7);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        Eigen::VectorXcd h(capped.num_modes);
        for (int e = 0; e < capped.num_modes; ++e) h[e] = bg::cplx(uni(rng), uni(rng));
        const bg::SparseOperator phi = bg::phi_plus(h, capped, N);
        double worst = 0.0;
        for (int trial = 0; trial < 32; ++trial) {
            Eigen::VectorXcd xi(capped.dim);
            for (std::int64_t i = 0; i < capped.dim; ++i) xi[i] = bg::cplx(uni(rng), uni(rng));
            xi.normalize();
            Eigen::VectorXcd weighted(capped.dim);
            for (std::int64_t i = 0; i < capped.dim; ++i) {
                weighted[i] =
                    xi[i] * std::sqrt(static_cast<double>(
                                capped.total_occ[static_cast<std::size_t>(i)]));
            }
            // b(h) = (phi_plus(h) + i phi_minus(h)) / 2
            const bg::SparseOperator b_only = bg::linear_combination(
                phi, 0.5, bg::i_phi_minus(h, capped, N), 0.5);
            const Eigen::VectorXcd bxi = b_only.apply(xi);
            worst = std::max(worst, bxi.norm() - h.norm() * weighted.norm());
        }
        check("ladder_bound_margin", worst, 1e-12);
    }

    j["checks"] = checks;
    j["all_pass"] = all_pass;
    const std::string path = cfg.output_dir + "/verify.json";
    bg::write_text_file(path, j.dump(2) + "\n");
    manifest.record(path);
    write_manifest(cfg, "verify", manifest);
    if (!all_pass) {
        std::fprintf(stderr, "verify: identity residual above tolerance\n");
        return 4;
    }
    std::printf("verify: all identities within tolerance\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field Bose gas laboratory: exact diagonalization, operator identities "
                 "and large-deviation measurements"};
    app.require_subcommand(1);

    CliOptions cli;
    app.add_option("--threads", cli.threads, "worker thread cap (0 = auto)");

    std::string subcommand;
    for (const auto& name : {"bogoliubov", "ed", "ldp", "verify", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", cli.config_path, "run configuration file")->required();
        sub->add_option("--out", cli.out_dir, "output directory (overrides config)");
        sub->add_option("--dense-limit", cli.dense_limit, "dense solver dimension limit");
        sub->add_option("--tol", cli.tol, "eigen/expm tolerance override");
        sub->add_option("--inject-fault", cli.inject_fault, "test hook: corrupt a named stage")
            ->group("");  // hidden
        sub->callback([&subcommand, name] { subcommand = name; });
    }

    CLI11_PARSE(app, argc, argv);
    bg::set_max_threads(cli.threads);

    try {
        const bg::RunConfig cfg = load(cli);
        if (subcommand == "bogoliubov") return cmd_bogoliubov(cfg);
        if (subcommand == "ed") return cmd_ed(cfg);
        if (subcommand == "ldp") return cmd_ldp(cfg);
        if (subcommand == "sweep") return cmd_sweep(cfg);
        if (subcommand == "verify") return cmd_verify(cfg, cli.inject_fault);
        std::fprintf(stderr, "unknown subcommand\n");
        return 2;
    } catch (const bg::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const bg::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const bg::DimensionOverflow& e) {
        std::fprintf(stderr, "dimension overflow: %s\n", e.what());
        return 2;
    } catch (const bg::IdentityAssertionError& e) {
        std::fprintf(stderr, "identity assertion: %s\n", e.what());
        return 4;
    } catch (const bg::NoConvergence& e) {
        std::fprintf(stderr, "solver error: %s (best residual %g)\n", e.what(),
                     e.best_residual);
        return 3;
    } catch (const bg::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
