#include "bosegas/excitations.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bosegas/errors.hpp"
#include "bosegas/parallel.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

namespace {

// b*(h) = sum h_p b^dag_p and its adjoint b(h) = sum conj(h_p) b_p.
SparseOperator smeared_b_star(const Eigen::VectorXcd& h, const CappedBasis& basis, int N) {
    std::vector<Triplet> trip;
    const double nd = static_cast<double>(N);
    for (std::int64_t j = 0; j < basis.dim; ++j) {
        const int t = basis.total_occ[static_cast<std::size_t>(j)];
        if (t + 1 > N) continue;
        const std::uint8_t* s = basis.state(j);
        const double factor = std::sqrt((nd - t) / nd);
        for (int e = 0; e < basis.num_modes; ++e) {
            if (h[e] == 0.0) continue;
            std::vector<std::uint8_t> target(s, s + basis.num_modes);
            ++target[static_cast<std::size_t>(e)];
            const std::int64_t i = basis.index_of(target.data());
            if (i >= 0) {
                trip.push_back({i, j, h[e] * factor * std::sqrt(static_cast<double>(s[e] + 1))});
            }
        }
    }
    return from_triplets(basis.dim, std::move(trip), false);
}

SparseOperator smeared_b(const Eigen::VectorXcd& h, const CappedBasis& basis, int N) {
    std::vector<Triplet> trip;
    const double nd = static_cast<double>(N);
    for (std::int64_t j = 0; j < basis.dim; ++j) {
        const int t = basis.total_occ[static_cast<std::size_t>(j)];
        const std::uint8_t* s = basis.state(j);
        const double factor = std::sqrt((nd - t + 1.0) / nd);
        for (int e = 0; e < basis.num_modes; ++e) {
            if (h[e] == 0.0 || s[e] == 0) continue;
            std::vector<std::uint8_t> target(s, s + basis.num_modes);
            --target[static_cast<std::size_t>(e)];
            const std::int64_t i = basis.index_of(target.data());
            if (i >= 0) {
                trip.push_back(
                    {i, j, std::conj(h[e]) * factor * std::sqrt(static_cast<double>(s[e]))});
            }
        }
    }
    return from_triplets(basis.dim, std::move(trip), false);
}

// Stable small-argument forms of the hyperbolic coefficient functions.
double sinhc(double x) {  // sinh(x)/x
    return std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 : std::sinh(x) / x;
}
double cosh_m1_over_sq(double x) {  // (cosh(x)-1)/x^2
    if (std::abs(x) < 1e-4) return 0.5 + x * x / 24.0;
    return (std::cosh(x) - 1.0) / (x * x);
}
double sinh_m_x_over_cube(double x) {  // (sinh(x)-x)/x^3
    if (std::abs(x) < 1e-3) return 1.0 / 6.0 + x * x / 120.0;
    return (std::sinh(x) - x) / (x * x * x);
}

Eigen::VectorXd one_minus_nplus_over_n(const CappedBasis& basis, int N) {
    Eigen::VectorXd d(basis.dim);
    for (std::int64_t i = 0; i < basis.dim; ++i) {
        d[i] = 1.0 - static_cast<double>(basis.total_occ[static_cast<std::size_t>(i)]) / N;
    }
    return d;
}

Eigen::MatrixXcd closed_form_b_conjugation(const Eigen::VectorXcd& h, int p_mode,
                                           const CappedBasis& basis, int N,
                                           const MomentumLattice& lat) {
    const double norm_h = h.norm();
    const double gamma = std::cosh(norm_h);
    const double sc = sinhc(norm_h);          // sinh/|h|
    const double gm = cosh_m1_over_sq(norm_h);  // (cosh-1)/|h|^2
    const double sqrt_n = std::sqrt(static_cast<double>(N));
    const cplx hp = h[p_mode];

    Eigen::MatrixXcd rhs = gamma * b_annihilator(p_mode, basis, N).dense();
    rhs += (gamma * gm * hp) * i_phi_minus(h, basis, N).dense();
    rhs -= (gm * hp) * smeared_b_star(h, basis, N).dense();
    rhs -= (sqrt_n * gamma * sc * hp) *
           diagonal_operator(one_minus_nplus_over_n(basis, N)).dense();

    const Eigen::MatrixXcd rank_hh = h * h.adjoint();
    rhs += (sc * gm / sqrt_n * hp) * one_body_excitation(rank_hh, basis).dense();

    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(h.size());
    unit[p_mode] = 1.0;
    const Eigen::MatrixXcd rank_hp = h * unit.adjoint();
    rhs += (sc / sqrt_n) * one_body_excitation_general(rank_hp, basis).dense();
    (void)lat;
    return rhs;
}

Eigen::MatrixXcd closed_form_dgamma_conjugation(const Eigen::VectorXcd& h,
                                                const Eigen::MatrixXcd& H,
                                                const CappedBasis& basis, int N) {
    const double norm_h = h.norm();
    const double sc = sinhc(norm_h);
    const double gm = cosh_m1_over_sq(norm_h);
    const double sqrt_n = std::sqrt(static_cast<double>(N));
    const Eigen::VectorXcd Hh = H * h;
    const double h_H_h = std::real(h.dot(Hh));  // <h, H h>

    Eigen::MatrixXcd rhs = one_body_excitation(H, basis).dense();
    rhs += (sqrt_n * sc) * i_phi_minus(Hh, basis, N).dense();
    rhs -= (static_cast<double>(N) * sc * sc * h_H_h) *
           diagonal_operator(one_minus_nplus_over_n(basis, N)).dense();
    const Eigen::MatrixXcd cross = h * Hh.adjoint() + Hh * h.adjoint();
    rhs += gm * one_body_excitation(cross, basis).dense();
    rhs += (sqrt_n * sc * gm * h_H_h) * i_phi_minus(h, basis, N).dense();
    rhs += (gm * gm * h_H_h) * one_body_excitation(h * h.adjoint(), basis).dense();
    return rhs;
}

}  // namespace

Eigen::MatrixXcd expm_dense(const SparseOperator& A, double t, const SolverOptions& opts) {
    Eigen::MatrixXcd out(A.dim, A.dim);
    parallel_for_items(A.dim, [&](std::int64_t j) {
        Eigen::VectorXcd e_j = Eigen::VectorXcd::Zero(A.dim);
        e_j[j] = 1.0;
        out.col(j) = expm_multiply(A, e_j, t, opts);
    });
    return out;
}

bool ConjugationReport::pass(double tol_exact, double tol_conj, double tol_fd) const {
    for (double r : number_scaling) {
        if (r > tol_exact) return false;
    }
    return b_conjugation <= tol_conj && dgamma_conjugation <= tol_conj &&
           derivative_fd <= tol_fd;
}

ConjugationReport verify_conjugation_identities(const Eigen::VectorXcd& h, double s, int N,
                                                const MomentumLattice& lat,
                                                const CappedBasis& basis,
                                                const SolverOptions& opts) {
    if (h.norm() == 0.0) throw ValidationError("conjugation checks need a nonzero h");
    ConjugationReport report;
    const double sqrt_n = std::sqrt(static_cast<double>(N));

    const SparseOperator phi = phi_plus(h, basis, N);
    SolverOptions tight = opts;
    tight.expm_tol = std::min(opts.expm_tol, 1e-12);
    const Eigen::MatrixXcd e_plus = expm_dense(phi, sqrt_n, tight);
    const Eigen::MatrixXcd e_minus = expm_dense(phi, -sqrt_n, tight);

    // (i) modified annihilators, every mode.
    for (int p = 0; p < basis.num_modes; ++p) {
        const Eigen::MatrixXcd lhs = e_plus * b_annihilator(p, basis, N).dense() * e_minus;
        const Eigen::MatrixXcd rhs = closed_form_b_conjugation(h, p, basis, N, lat);
        report.b_conjugation =
            std::max(report.b_conjugation, (lhs - rhs).cwiseAbs().maxCoeff());
    }

    // (ii) one-body operator: kinetic diagonal plus a pair coupling.
    {
        const auto exc = lat.excitation_modes();
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(basis.num_modes, basis.num_modes);
        std::vector<int> lat_to_exc(static_cast<std::size_t>(lat.size()), -1);
        for (int e = 0; e < static_cast<int>(exc.size()); ++e) {
            lat_to_exc[static_cast<std::size_t>(exc[static_cast<std::size_t>(e)])] = e;
        }
        for (int e = 0; e < basis.num_modes; ++e) {
            H(e, e) = lat.p_squared(exc[static_cast<std::size_t>(e)]);
            const int pe = lat_to_exc[static_cast<std::size_t>(
                lat.pair_map[exc[static_cast<std::size_t>(e)]])];
            H(e, pe) += 0.7;
        }
        const Eigen::MatrixXcd lhs =
            e_plus * one_body_excitation(H, basis).dense() * e_minus;
        const Eigen::MatrixXcd rhs = closed_form_dgamma_conjugation(h, H, basis, N);
        report.dgamma_conjugation = (lhs - rhs).cwiseAbs().maxCoeff();
    }

    // (iii) exponential number scaling; diagonal conjugation is exact.
    {
        Eigen::VectorXd scale(basis.dim);
        for (std::int64_t i = 0; i < basis.dim; ++i) {
            scale[i] = std::exp(-s * basis.total_occ[static_cast<std::size_t>(i)]);
        }
        auto conjugate = [&](const SparseOperator& A) {
            Eigen::MatrixXcd M = A.dense();
            for (std::int64_t r = 0; r < basis.dim; ++r) {
                for (std::int64_t c = 0; c < basis.dim; ++c) {
                    M(r, c) *= scale[r] / scale[c];
                }
            }
            return M;
        };
        const Eigen::MatrixXcd bh = smeared_b(h, basis, N).dense();
        const Eigen::MatrixXcd bsh = smeared_b_star(h, basis, N).dense();
        const Eigen::MatrixXcd ph = phi.dense();
        const Eigen::MatrixXcd iph = i_phi_minus(h, basis, N).dense();
        const double g = std::cosh(s), sg = std::sinh(s);
        report.number_scaling[0] = (conjugate(smeared_b(h, basis, N)) - std::exp(s) * bh)
                                       .cwiseAbs()
                                       .maxCoeff();
        report.number_scaling[1] =
            (conjugate(smeared_b_star(h, basis, N)) - std::exp(-s) * bsh).cwiseAbs().maxCoeff();
        report.number_scaling[2] =
            (conjugate(phi) - (g * ph + sg * iph)).cwiseAbs().maxCoeff();
        report.number_scaling[3] =
            (conjugate(i_phi_minus(h, basis, N)) - (g * iph + sg * ph)).cwiseAbs().maxCoeff();
    }

    // (iv) derivative of the exponential along h_t = h + t u at t = t0,
    // checked against a centered finite difference.
    {
        std::mt19937_64 rng(opts.seed + 99);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        // Real even direction, non-parallel to h when the lattice has more
        // than one pair; any direction keeps phi_plus Hermitian.
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(h.size());
        {
            const auto exc = lat.excitation_modes();
            std::vector<int> lat_to_exc(static_cast<std::size_t>(lat.size()), -1);
            for (int e = 0; e < static_cast<int>(exc.size()); ++e) {
                lat_to_exc[static_cast<std::size_t>(exc[static_cast<std::size_t>(e)])] = e;
            }
            for (int e = 0; e < static_cast<int>(exc.size()); ++e) {
                const int pe = lat_to_exc[static_cast<std::size_t>(
                    lat.pair_map[exc[static_cast<std::size_t>(e)]])];
                if (pe >= e) {
                    const double value = uni(rng);
                    u[e] = value;
                    u[pe] = value;
                }
            }
            u *= 0.2 / u.norm();
        }
        const double t0 = 0.35;
        auto h_at = [&](double t) { return (h + t * u).eval(); };

        Eigen::VectorXcd xi1(basis.dim), xi2(basis.dim);
        for (std::int64_t i = 0; i < basis.dim; ++i) {
            xi1[i] = uni(rng);
            xi2[i] = uni(rng);
        }
        xi1.normalize();
        xi2.normalize();

        const Eigen::VectorXcd ht = h_at(t0);
        const SparseOperator phi_t = phi_plus(ht, basis, N);
        const Eigen::VectorXcd w = expm_multiply(phi_t, xi2, -sqrt_n, tight);
        auto fd_value = [&](double delta) {
            const Eigen::VectorXcd up =
                expm_multiply(phi_plus(h_at(t0 + delta), basis, N), w, sqrt_n, tight);
            const Eigen::VectorXcd dn =
                expm_multiply(phi_plus(h_at(t0 - delta), basis, N), w, sqrt_n, tight);
            return (xi1.dot(up) - xi1.dot(dn)) / (2.0 * delta);
        };
        const double delta = 1e-5;
        const cplx fd1 = fd_value(delta);
        const cplx fd2 = fd_value(2.0 * delta);
        const cplx fd_rich = (4.0 * fd1 - fd2) / 3.0;

        // Closed form.
        const Eigen::VectorXcd hd = u;  // dh/dt
        const double nh = ht.norm();
        const double sc = sinhc(nh);
        const double gm = cosh_m1_over_sq(nh);
        const double smx = sinh_m_x_over_cube(nh);
        const double re_dh_h = std::real(hd.dot(ht));
        const double im_dh_h = std::imag(hd.dot(ht));
        cplx closed = 0.0;
        closed += sqrt_n * sc * xi1.dot(phi_plus(hd, basis, N).apply(xi2));
        {
            // phi_minus = -i (b(h) - b*(h))
            const Eigen::VectorXcd tmp =
                i_phi_minus(ht, basis, N).apply(xi2) * cplx(0.0, -1.0);
            closed -= sqrt_n * sc * gm * im_dh_h * xi1.dot(tmp);
        }
        closed -= sqrt_n * smx * re_dh_h * xi1.dot(phi_plus(ht, basis, N).apply(xi2));
        {
            Eigen::VectorXcd d = Eigen::VectorXcd::Zero(basis.dim);
            for (std::int64_t i = 0; i < basis.dim; ++i) {
                d[i] = 1.0 - static_cast<double>(basis.total_occ[static_cast<std::size_t>(i)]) / N;
            }
            closed -= cplx(0.0, 1.0) * static_cast<double>(N) * sc * sc * im_dh_h *
                      xi1.dot(d.cwiseProduct(xi2).eval());
        }
        {
            closed += cplx(0.0, 1.0) * gm * gm * im_dh_h *
                      xi1.dot(one_body_excitation(ht * ht.adjoint(), basis).apply(xi2));
            const Eigen::MatrixXcd comm = ht * hd.adjoint() - hd * ht.adjoint();
            closed += gm * xi1.dot(one_body_excitation_general(comm, basis).apply(xi2));
        }

        report.derivative_fd = std::abs(fd1 - closed);
        report.derivative_fd_richardson = std::abs(fd_rich - closed);
    }
    return report;
}

InterpolationDiagnostics interpolation_diagnostics(const std::vector<double>& s_grid,
                                                   const std::vector<int>& n_list,
                                                   const MomentumLattice& lat,
                                                   const Potential& pot,
                                                   const SolverOptions& opts) {
    if (s_grid.empty() || n_list.empty()) {
        throw ValidationError("interpolation diagnostics need nonempty grids");
    }
    InterpolationDiagnostics diag;
    diag.cells.resize(s_grid.size() * n_list.size());

    const std::int64_t cells = static_cast<std::int64_t>(diag.cells.size());
    parallel_for_items(cells, [&](std::int64_t cell) {
        const std::size_t ni = static_cast<std::size_t>(cell) / s_grid.size();
        const std::size_t si = static_cast<std::size_t>(cell) % s_grid.size();
        const int N = n_list[ni];
        const double s = s_grid[si];

        const SectorBasis sector = enumerate_sector(lat.size(), N, 0);
        const CappedBasis capped = enumerate_capped(lat.size() - 1, N, N, 0);
        const ExcitationMap map = excitation_unitary_map(sector, capped, lat.zero_index);
        const ExcitationFamily family = build_excitation_family(lat, pot, sector, capped, map, N);
        const SparseOperator gs_op = interpolated_G(family, s);

        const auto pairs = low_spectrum(gs_op, 2, opts);
        const Eigen::VectorXcd& psi = pairs[0].vector;

        InterpolationCell& c = diag.cells[static_cast<std::size_t>(cell)];
        c.s = s;
        c.n_particles = N;
        c.energy = pairs[0].value;
        c.gap = pairs[1].value - pairs[0].value;
        Eigen::VectorXd nplus1(capped.dim);
        for (std::int64_t i = 0; i < capped.dim; ++i) {
            nplus1[i] = 1.0 + static_cast<double>(capped.total_occ[static_cast<std::size_t>(i)]);
        }
        c.moment1 = std::real(psi.dot(nplus1.cwiseProduct(psi).eval()));
        c.moment2 = std::real(psi.dot(nplus1.array().square().matrix().cwiseProduct(psi).eval()));
        c.remainder_norm = family.R_operational.apply(psi).norm();
    });

    diag.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& c : diag.cells) diag.min_gap = std::min(diag.min_gap, c.gap);

    // Flag a gap dip below half the s = 0 value within each N row.
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        double gap0 = 0.0;
        for (std::size_t si = 0; si < s_grid.size(); ++si) {
            const auto& c = diag.cells[ni * s_grid.size() + si];
            if (c.s == 0.0) gap0 = c.gap;
        }
        for (std::size_t si = 0; si < s_grid.size(); ++si) {
            const auto& c = diag.cells[ni * s_grid.size() + si];
            if (gap0 > 0.0 && c.gap < 0.5 * gap0) diag.gap_dip_flag = true;
        }
    }

    // Trend of max_s <(N_+ + 1)^2> across the N sweep.
    if (n_list.size() >= 3) {
        std::vector<double> xs, ys;
        for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
            double worst = 0.0;
            for (std::size_t si = 0; si < s_grid.size(); ++si) {
                worst = std::max(worst, diag.cells[ni * s_grid.size() + si].moment2);
            }
            xs.push_back(static_cast<double>(n_list[ni]));
            ys.push_back(worst);
        }
        const LinearFit fit = linear_fit(xs, ys);
        diag.moment_growth_flag = fit.slope > 2.0 * fit.slope_stderr;
    }
    return diag;
}

MgfPathwayReport mgf_pathway_check(const std::vector<double>& lambdas, int N,
                                   const MomentumLattice& lat, const Potential& pot,
                                   const Observable& obs, const SolverOptions& opts) {
    MgfPathwayReport report;
    const SectorBasis sector = enumerate_sector(lat.size(), N, 0);
    const CappedBasis capped = enumerate_capped(lat.size() - 1, N, N, 0);
    const ExcitationMap map = excitation_unitary_map(sector, capped, lat.zero_index);

    const SparseOperator h_n = hamiltonian_sector(lat, pot, sector, N);
    const GroundStateResult gs = ground_state(h_n, opts);
    const SparseOperator d_gamma = one_body_sector(obs.centered, sector);

    Eigen::VectorXcd psi_g(capped.dim);
    for (std::int64_t r = 0; r < sector.dim; ++r) {
        psi_g[map.sec_to_cap[static_cast<std::size_t>(r)]] = gs.vector[r];
    }

    const Eigen::MatrixXcd b_block = excitation_block(obs.centered, lat);
    const SparseOperator b_op = one_body_excitation(b_block, capped);
    const Eigen::VectorXcd g_exc = to_excitation_vector(obs.g_hat, lat);
    const SparseOperator phi_g = phi_plus(g_exc, capped, N);
    const SparseOperator mixed =
        linear_combination(b_op, 1.0, phi_g, std::sqrt(static_cast<double>(N)));

    std::vector<double> ls, gp, gm;
    for (double lambda : lambdas) {
        MgfPathwayPoint pt;
        pt.lambda = lambda;
        if (lambda == 0.0) {
            pt.sector_value = pt.excitation_value = pt.sandwich_plus = pt.sandwich_minus = 1.0;
        } else {
            pt.sector_value =
                std::real(gs.vector.dot(expm_multiply(d_gamma, gs.vector, lambda, opts)));
            pt.excitation_value = std::real(psi_g.dot(expm_multiply(mixed, psi_g, lambda, opts)));
            const Eigen::VectorXcd half =
                expm_multiply(phi_g, psi_g, 0.5 * lambda * std::sqrt(static_cast<double>(N)),
                              opts);
            Eigen::VectorXcd boosted(capped.dim), damped(capped.dim);
            for (std::int64_t i = 0; i < capped.dim; ++i) {
                const double n_plus =
                    static_cast<double>(capped.total_occ[static_cast<std::size_t>(i)]);
                boosted[i] = half[i] * std::exp(2.0 * lambda * obs.op_norm * n_plus);
                damped[i] = half[i] * std::exp(-2.0 * lambda * obs.op_norm * n_plus);
            }
            pt.sandwich_plus = std::real(half.dot(boosted));
            pt.sandwich_minus = std::real(half.dot(damped));
        }
        const double denom = std::max(std::abs(pt.sector_value), 1e-300);
        report.max_relative_mismatch =
            std::max(report.max_relative_mismatch,
                     std::abs(pt.sector_value - pt.excitation_value) / denom);
        if (lambda > 0.0) {
            ls.push_back(lambda);
            gp.push_back(std::log(pt.sandwich_plus) - std::log(pt.excitation_value));
            gm.push_back(std::log(pt.excitation_value) - std::log(pt.sandwich_minus));
        }
        report.points.push_back(pt);
    }
    report.gap_exponent_plus = power_law_exponent(ls, gp);
    report.gap_exponent_minus = power_law_exponent(ls, gm);
    return report;
}

}  // namespace bosegas
