// Acceptance suite: every exit criterion of the project, each printed as a
// single pass/fail line with the measured value and its pinned tolerance.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bosegas/excitations.hpp"
#include "bosegas/ldp.hpp"
#include "bosegas/stats.hpp"

using namespace bosegas;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    if (!pass) ++g_failures;
    std::printf("%-4s %-60s %s\n", name.c_str(), detail.c_str(), pass ? "PASS" : "FAIL");
    std::fflush(stdout);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// ------------------------------------------------------------------ A1 --
// Excitation identity U H U^dag - (N/2) v(0) = Q + R with the transcribed
// remainder, relative Frobenius norm <= 1e-10 over small lattices.
void criterion_a1() {
    double worst = 0.0;
    for (int p_max : {1, 2}) {
        const auto lat = build_lattice(1, p_max);
        const std::vector<Potential> shells = {shell_potential(lat, 1.0, 1.0),
                                               shell_potential(lat, p_max, 0.5)};
        for (const auto& pot : shells) {
            for (int N = 2; N <= 6; ++N) {
                const auto sector = enumerate_sector(lat.size(), N, 0);
                const auto capped = enumerate_capped(lat.size() - 1, N, N, 0);
                const auto map = excitation_unitary_map(sector, capped, lat.zero_index);
                const auto fam = build_excitation_family(lat, pot, sector, capped, map, N);
                const auto r_direct = remainder_transcribed(lat, pot, capped, N);
                const auto sum = linear_combination(fam.Q, 1.0, r_direct, 1.0);
                worst = std::max(worst,
                                 frobenius_distance(fam.G, sum) / fam.Q.frobenius_norm());
            }
        }
    }
    report("A1", worst <= 1e-10, "excitation identity residual " + fmt(worst));
}

// ------------------------------------------------------------------ A2 --
// Free-gas i.i.d. oracle; also pins the one-body index convention with a
// random Hermitian observable.
void criterion_a2() {
    const auto lat = build_lattice(1, 1);
    const auto pot = zero_potential(lat);
    SolverOptions opts;

    std::vector<Observable> observables = {cos_mode_observable(lat, {1, 0, 0})};
    {
        std::mt19937_64 rng(321);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        Eigen::MatrixXcd raw(3, 3);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) raw(r, c) = cplx(uni(rng), uni(rng));
        }
        observables.push_back(build_observable(raw, lat, 1e300));
    }

    double worst_ground = 0.0, worst_scgf = 0.0, worst_var = 0.0;
    for (const auto& obs : observables) {
        const int N = 8;
        const auto sector = enumerate_sector(lat.size(), N, 0);
        const auto gs = ground_state(hamiltonian_sector(lat, pot, sector, N), opts);
        std::vector<std::uint8_t> cond = {0, static_cast<std::uint8_t>(N), 0};
        worst_ground = std::max(
            worst_ground, std::abs(1.0 - std::abs(gs.vector[sector.index_of(cond.data())])));

        const auto d_gamma = one_body_sector(obs.centered, sector);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(obs.centered);
        Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(3);
        phi0[lat.zero_index] = 1.0;
        const Eigen::VectorXcd w = es.eigenvectors().adjoint() * phi0;
        for (double lambda : linspace(0.0, 1.0, 11)) {
            double oracle_mgf = 0.0;
            for (Eigen::Index i = 0; i < 3; ++i) {
                oracle_mgf += std::norm(w[i]) * std::exp(lambda * es.eigenvalues()[i]);
            }
            double got = 0.0;
            if (lambda > 0.0) {
                const auto ev = expm_multiply(d_gamma, gs.vector, lambda, opts);
                got = std::log(std::real(gs.vector.dot(ev))) / N;
            }
            worst_scgf = std::max(worst_scgf, std::abs(got - std::log(oracle_mgf)));
        }
        const auto cum = cumulants(d_gamma, gs.vector, N);
        worst_var = std::max(worst_var, std::abs(cum.k2 - obs.g_norm_sq()));
    }
    report("A2",
           worst_ground <= 1e-12 && worst_scgf <= 1e-10 && worst_var <= 1e-12,
           "iid oracle: ground " + fmt(worst_ground) + ", scgf " + fmt(worst_scgf) +
               ", var " + fmt(worst_var));
}

// ------------------------------------------------------------------ A3 --
void criterion_a3() {
    const auto lat = build_lattice(1, 1);
    const int N = 4;
    const auto capped = enumerate_capped(lat.size() - 1, N, N, 0);
    Eigen::VectorXcd h(2);
    h << 1.0, 1.0;
    h *= 0.2 / h.norm();  // ||h|| <= 0.3, real and even
    SolverOptions opts;
    const auto rep = verify_conjugation_identities(h, 0.3, N, lat, capped, opts);
    double scaling = 0.0;
    for (double r : rep.number_scaling) scaling = std::max(scaling, r);
    const bool pass = scaling <= 1e-10 && rep.b_conjugation <= 1e-8 &&
                      rep.dgamma_conjugation <= 1e-8 && rep.derivative_fd <= 1e-6;
    report("A3", pass,
           "conjugations: number " + fmt(scaling) + ", ladder " + fmt(rep.b_conjugation) +
               ", one-body " + fmt(rep.dgamma_conjugation) + ", fd " +
               fmt(rep.derivative_fd));
}

// ------------------------------------------------------------------ A4 --
void criterion_a4() {
    double worst = 0.0;
    for (int p_max : {1, 2}) {
        const auto lat = build_lattice(1, p_max);
        for (double scale : {0.5, 1.0, 2.0}) {
            const auto pot = shell_potential(lat, p_max, scale);
            const auto mu = solve_mu(pot, lat);
            const auto e = dispersion(pot, lat);
            const auto exc = lat.excitation_modes();
            for (Eigen::Index i = 0; i < mu.size(); ++i) {
                const double p2 = lat.p_squared(exc[static_cast<std::size_t>(i)]);
                const double v = pot.vhat[exc[static_cast<std::size_t>(i)]];
                if (v > 0.0) {
                    worst = std::max(worst,
                                     std::abs(1.0 / std::tanh(2.0 * mu[i]) + (p2 + v) / v));
                }
                worst = std::max(worst, std::abs(std::cosh(2.0 * mu[i]) - (p2 + v) / e[i]));
                worst = std::max(worst, std::abs(std::sinh(2.0 * mu[i]) + v / e[i]));
                // symplectic 2x2 block eigenvalues
                Eigen::MatrixXd block(2, 2);
                block << p2 + v, v, -v, -(p2 + v);
                const Eigen::VectorXcd eig =
                    Eigen::EigenSolver<Eigen::MatrixXd>(block).eigenvalues();
                const double plus = std::max(eig[0].real(), eig[1].real());
                worst = std::max(worst, std::abs(plus - e[i]));
            }
        }
    }
    report("A4", worst <= 1e-12, "closed-form consistency residual " + fmt(worst));
}

// ------------------------------------------------------------------ A5 --
void criterion_a5() {
    const auto lat = build_lattice(1, 1);
    const auto pot = shell_potential(lat, 1.0, 0.5);
    const int n_max = 8;
    const auto basis = enumerate_capped(lat.size() - 1, 2 * n_max, n_max, 0);
    const auto q = quadratic_Q(lat, pot, basis);
    SolverOptions opts;
    opts.dense_limit = 0;  // the criterion pins the iterative path
    const auto gs = ground_state(q, opts);
    const auto mu = solve_mu(pot, lat);
    const auto qf = quasifree_ground_state(mu, basis, lat);

    const double overlap = std::abs(qf.vector.dot(gs.vector));
    const double n_plus = std::real(qf.vector.dot(nplus_capped(basis).apply(qf.vector)));
    const double depl_err = std::abs(n_plus - depletion(mu));

    const auto cands = bogoliubov_energy_candidates(mu, pot, lat);
    int matches = 0;
    std::string matched = "none";
    for (const auto& [label, value] : cands) {
        if (std::abs(value - gs.energy) <= 1e-8) {
            ++matches;
            matched = label;
        }
    }
    const bool pass = overlap >= 1.0 - 1e-8 && depl_err <= 1e-8 && matches == 1;
    report("A5", pass,
           "quasi-free: 1-overlap " + fmt(1.0 - overlap) + ", depletion err " + fmt(depl_err) +
               ", energy match '" + matched + "'");
}

// ---------------------------------------------------------- A6 - A9 -----
// One desk sweep feeds the variance, Chernoff, rate and CLT criteria.
void criteria_a6_to_a9() {
    const auto lat = build_lattice(1, 1);
    const auto pot = shell_potential(lat, 1.0, 0.5);
    const auto obs = cos_mode_observable(lat, {1, 0, 0});
    const std::vector<int> n_list = {4, 6, 8, 10, 12};
    SolverOptions opts;
    const auto sweep = n_sweep(lat, pot, obs, n_list, linspace(0.0, 1.0, 21),
                               linspace(0.0, 0.6, 61), opts);

    // A6: strict decrease of |Var/N - f2| and 5% extrapolation accuracy.
    bool decreasing = true;
    for (std::size_t i = 1; i < sweep.slices.size(); ++i) {
        decreasing = decreasing &&
                     std::abs(sweep.slices[i].var_over_n - sweep.f_norm_sq_active) <
                         std::abs(sweep.slices[i - 1].var_over_n - sweep.f_norm_sq_active);
    }
    const double var_rel =
        std::abs(sweep.var_extrapolated - sweep.f_norm_sq_active) / sweep.f_norm_sq_active;
    report("A6", decreasing && var_rel <= 0.05,
           std::string("variance: trend ") + (decreasing ? "monotone" : "broken") +
               ", extrapolation error " + fmt(var_rel));

    // A7: Chernoff margins (chernoff_check throws on violation; also scan).
    double min_margin = std::numeric_limits<double>::infinity();
    long long cells = 0, vacuous = 0;
    for (const auto& slice : sweep.slices) {
        for (const auto& row : slice.chernoff) {
            ++cells;
            if (row.vacuous) {
                ++vacuous;
                continue;
            }
            min_margin = std::min(min_margin, row.margin);
        }
    }
    report("A7", min_margin >= -1e-10,
           "chernoff: min margin " + fmt(min_margin) + " over " + std::to_string(cells) +
               " cells (" + std::to_string(vacuous) + " vacuous)");

    // A8: tail-route pooled ratio within 10%; Legendre route reported.
    const double tail_err = std::abs(sweep.rate_ratio_tail - 1.0);
    char window[96];
    std::snprintf(window, sizeof(window), "rate: tail ratio %.4f, legendre %.4f, exp %.2f",
                  sweep.rate_ratio_tail, sweep.rate_ratio_legendre, sweep.residual_exponent);
    report("A8", tail_err <= 0.10 && !sweep.tail_samples.empty(), window);
    std::printf("     (residual exponent %.2f reported against the [2.2, 3.2] window)\n",
                sweep.residual_exponent);

    // A9: Kolmogorov distances strictly decreasing along the sweep.
    bool clt_monotone = true;
    std::string seq;
    for (std::size_t i = 0; i < sweep.clt_distances.size(); ++i) {
        if (i > 0) clt_monotone = clt_monotone && sweep.clt_distances[i] < sweep.clt_distances[i - 1];
        seq += fmt(sweep.clt_distances[i]) + (i + 1 < sweep.clt_distances.size() ? " " : "");
    }
    report("A9", clt_monotone, "clt distances " + seq);
}

// ----------------------------------------------------------------- A10 --
void criterion_a10() {
    const auto lat = build_lattice(1, 1);
    const auto pot = shell_potential(lat, 1.0, 0.5);
    const std::vector<double> s_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<int> n_list = {4, 5, 6, 7, 8, 9, 10};
    const auto diag = interpolation_diagnostics(s_grid, n_list, lat, pot, {});

    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& cell : diag.cells) min_gap = std::min(min_gap, cell.gap);

    std::vector<double> xs, ys;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        double worst = 0.0;
        for (std::size_t si = 0; si < s_grid.size(); ++si) {
            worst = std::max(worst, diag.cells[ni * s_grid.size() + si].moment2);
        }
        xs.push_back(n_list[ni]);
        ys.push_back(worst);
    }
    const LinearFit fit = linear_fit(xs, ys);
    const bool slope_ok = fit.slope <= 2.0 * fit.slope_stderr;
    report("A10", min_gap > 0.0 && slope_ok,
           "interpolation: min gap " + fmt(min_gap) + ", moment slope " + fmt(fit.slope) +
               " (2 sigma " + fmt(2.0 * fit.slope_stderr) + ")");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_a1();
    criterion_a2();
    criterion_a3();
    criterion_a4();
    criterion_a5();
    criteria_a6_to_a9();
    criterion_a10();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
