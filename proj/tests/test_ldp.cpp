#include <doctest.h>

#include <cmath>
#include <random>

#include "bosegas/errors.hpp"
#include "bosegas/ldp.hpp"

using namespace bosegas;

namespace {

struct FreeGas {
    MomentumLattice lat = build_lattice(1, 1);
    Potential pot = zero_potential(lat);
    Observable obs = cos_mode_observable(lat, {1, 0, 0});
    SolverOptions opts;

    GroundStateResult ground(int N, SparseOperator& d_gamma) const {
        const auto sector = enumerate_sector(lat.size(), N, 0);
        const auto h = hamiltonian_sector(lat, pot, sector, N);
        d_gamma = one_body_sector(obs.centered, sector);
        return ground_state(h, opts);
    }

    // single-particle i.i.d. oracle for the scaled cumulant generating fn
    double oracle_scgf(double lambda) const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(obs.centered);
        Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(lat.size());
        phi0[lat.zero_index] = 1.0;
        const Eigen::VectorXcd w = es.eigenvectors().adjoint() * phi0;
        double mgf = 0.0;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            mgf += std::norm(w[i]) * std::exp(lambda * es.eigenvalues()[i]);
        }
        return std::log(mgf);
    }
};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

}  // namespace

TEST_CASE("scgf of the free gas equals the single-particle closed form") {
    FreeGas fg;
    const int N = 8;
    SparseOperator d_gamma;
    const auto gs = fg.ground(N, d_gamma);
    const auto grid = linspace(0.0, 1.0, 11);
    const auto curve = scgf(d_gamma, gs.vector, grid, N, fg.opts);
    CHECK(curve.value.front() == 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(curve.value[i] - fg.oracle_scgf(grid[i])) <= 1e-10);
    }
    CHECK(curve.min_slope_increase >= -1e-10);
}

TEST_CASE("cumulants") {
    FreeGas fg;
    SUBCASE("centered identity has no cumulants") {
        const int N = 4;
        const auto sector = enumerate_sector(fg.lat.size(), N, 0);
        const auto h = hamiltonian_sector(fg.lat, fg.pot, sector, N);
        const auto gs = ground_state(h, fg.opts);
        const auto zero_obs = identity_observable(fg.lat);
        const auto d_gamma = one_body_sector(zero_obs.centered, sector);
        const auto c = cumulants(d_gamma, gs.vector, N);
        CHECK(c.k1 == 0.0);
        CHECK(c.k2 == 0.0);
        CHECK(c.k4 == 0.0);
    }
    SUBCASE("free-gas variance is the one-particle moment") {
        for (int N : {4, 8}) {
            SparseOperator d_gamma;
            const auto gs = fg.ground(N, d_gamma);
            const auto c = cumulants(d_gamma, gs.vector, N);
            CHECK(std::abs(c.k2 - fg.obs.g_norm_sq()) <= 1e-12);
        }
    }
    SUBCASE("second cumulant agrees with the finite-difference curvature") {
        const auto lat = build_lattice(1, 1);
        const auto pot = shell_potential(lat, 1.0, 0.5);
        const auto obs = cos_mode_observable(lat, {1, 0, 0});
        const int N = 6;
        const auto sector = enumerate_sector(lat.size(), N, 0);
        const auto gs = ground_state(hamiltonian_sector(lat, pot, sector, N), {});
        const auto d_gamma = one_body_sector(obs.centered, sector);
        const auto c = cumulants(d_gamma, gs.vector, N);

        const double h = 1e-3;
        auto lam = [&](double l) {
            if (l == 0.0) return 0.0;
            const auto ev = expm_multiply(d_gamma, gs.vector, l, SolverOptions{});
            return std::log(std::real(gs.vector.dot(ev))) / N;
        };
        const double curvature = (lam(h) - 2.0 * lam(0.0) + lam(-h)) / (h * h);
        // Lambda''(0) = Var(S)/N = k2
        CHECK(std::abs(curvature - c.k2) / c.k2 <= 1e-6);
    }
}

TEST_CASE("tails from the exact measure") {
    FreeGas fg;
    const int N = 6;
    SparseOperator d_gamma;
    const auto gs = fg.ground(N, d_gamma);
    const auto measure = spectral_measure(d_gamma, gs.vector, fg.opts);

    SUBCASE("beyond the spectral edge the tail vanishes") {
        const auto t = tail_probabilities(measure, N, {10.0});
        CHECK(t.p_greater[0] == 0.0);
        CHECK(std::isinf(t.empirical_rate[0]));
    }
    SUBCASE("zero observable has no upper tail") {
        const auto zero_obs = identity_observable(fg.lat);
        const auto sector = enumerate_sector(fg.lat.size(), N, 0);
        const auto dg0 = one_body_sector(zero_obs.centered, sector);
        const auto m0 = spectral_measure(dg0, gs.vector, fg.opts);
        const auto t = tail_probabilities(m0, N, {0.1, 0.5});
        CHECK(t.p_greater[0] == 0.0);
        CHECK(t.p_greater[1] == 0.0);
    }
    SUBCASE("monte-carlo sampling of the measure reproduces the tails") {
        std::mt19937_64 rng(424242);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const int draws = 200000;
        const double x = 0.25;
        int hits = 0;
        for (int k = 0; k < draws; ++k) {
            double u = uni(rng), acc = 0.0;
            double value = measure.points[measure.points.size() - 1];
            for (Eigen::Index i = 0; i < measure.points.size(); ++i) {
                acc += measure.weights[i];
                if (u <= acc) {
                    value = measure.points[i];
                    break;
                }
            }
            if (value > N * x) ++hits;
        }
        const double p = measure.tail_greater(N * x);
        const double sigma = std::sqrt(p * (1.0 - p) / draws);
        CHECK(std::abs(static_cast<double>(hits) / draws - p) <= 3.0 * sigma);
    }
    SUBCASE("tails decrease weakly in x") {
        const auto t = tail_probabilities(measure, N, linspace(0.0, 0.8, 81));
        for (std::size_t i = 1; i < t.x.size(); ++i) {
            CHECK(t.p_greater[i] <= t.p_greater[i - 1] + 1e-15);
        }
    }
}

TEST_CASE("grid Legendre transform") {
    SUBCASE("quadratic curve inverts to the dual quadratic") {
        const double sigma_sq = 0.7;
        ScgfCurve curve;
        curve.lambda = linspace(0.0, 4.0, 4001);
        for (double l : curve.lambda) curve.value.push_back(0.5 * sigma_sq * l * l);
        const auto rate = legendre(curve, linspace(0.0, 1.5, 16));
        for (std::size_t i = 0; i < rate.x.size(); ++i) {
            const double expect = rate.x[i] * rate.x[i] / (2.0 * sigma_sq);
            CHECK(std::abs(rate.value[i] - expect) <= 1e-4);
        }
        CHECK(rate.value.front() == 0.0);
    }
    SUBCASE("weak monotonicity above the mean") {
        FreeGas fg;
        const int N = 6;
        SparseOperator d_gamma;
        const auto gs = fg.ground(N, d_gamma);
        const auto curve = scgf(d_gamma, gs.vector, linspace(0.0, 1.0, 21), N, fg.opts);
        const auto rate = legendre(curve, linspace(0.0, 0.6, 31));
        for (std::size_t i = 1; i < rate.x.size(); ++i) {
            CHECK(rate.value[i] >= rate.value[i - 1] - 1e-12);
        }
    }
}

TEST_CASE("Chernoff margins are nonnegative for the free gas") {
    FreeGas fg;
    const int N = 8;
    SparseOperator d_gamma;
    const auto gs = fg.ground(N, d_gamma);
    const auto grid_x = linspace(0.0, 0.7, 36);
    const auto curve = scgf(d_gamma, gs.vector, linspace(0.0, 1.0, 21), N, fg.opts);
    const auto measure = spectral_measure(d_gamma, gs.vector, fg.opts);
    const auto tails = tail_probabilities(measure, N, grid_x);
    const auto rate = legendre(curve, grid_x);
    const auto rows = chernoff_check(curve, tails, rate);
    int vacuous = 0;
    for (const auto& row : rows) {
        if (row.vacuous) {
            ++vacuous;
            continue;
        }
        CHECK(row.margin >= -1e-10);
    }
    CHECK(vacuous < static_cast<int>(rows.size()));
}

TEST_CASE("Kolmogorov distance to the limiting Gaussian shrinks with N") {
    SUBCASE("free gas against the one-particle variance") {
        FreeGas fg;
        std::vector<double> dist;
        for (int N : {4, 8, 12}) {
            SparseOperator d_gamma;
            const auto gs = fg.ground(N, d_gamma);
            const auto measure = spectral_measure(d_gamma, gs.vector, fg.opts);
            dist.push_back(clt_distance(measure, N, fg.obs.g_norm_sq()));
        }
        CHECK(dist[1] < dist[0]);
        CHECK(dist[2] < dist[1]);
    }
    SUBCASE("weak coupling: N = 10 beats N = 4") {
        const auto lat = build_lattice(1, 1);
        const auto pot = shell_potential(lat, 1.0, 0.5);
        const auto obs = cos_mode_observable(lat, {1, 0, 0});
        const auto bog = bogoliubov_data(pot, obs, lat);
        double d4 = 0.0, d10 = 0.0;
        for (int N : {4, 10}) {
            const auto sector = enumerate_sector(lat.size(), N, 0);
            const auto gs = ground_state(hamiltonian_sector(lat, pot, sector, N), {});
            const auto dg = one_body_sector(obs.centered, sector);
            const auto measure = spectral_measure(dg, gs.vector, {});
            (N == 4 ? d4 : d10) = clt_distance(measure, N, bog.f_norm_sq);
        }
        CHECK(d10 < d4);
    }
    SUBCASE("degenerate comparison flags through the point-mass path") {
        SpectralMeasure m;
        m.points = Eigen::VectorXd::Zero(1);
        m.weights = Eigen::VectorXd::Ones(1);
        CHECK(clt_distance(m, 4, 0.0) == 0.0);
    }
}

TEST_CASE("oversized sectors fall back to smoothed tails") {
    const auto lat = build_lattice(1, 1);
    const auto pot = shell_potential(lat, 1.0, 0.5);
    const auto obs = cos_mode_observable(lat, {1, 0, 0});
    SolverOptions opts;
    opts.dense_limit = 10;  // force the fallback at N = 6 (dim 28)
    const auto bog = bogoliubov_data(pot, obs, lat);
    // x grid chosen between spectral atoms: the smoothed CDF is only
    // accurate away from the point masses
    const auto slice = ldp_slice(lat, pot, obs, 6, {0.0, 0.5, 1.0},
                                 {0.1, 0.2, 0.4}, bog.f_norm_sq, bog.f_alt_norm_sq, opts);
    CHECK(slice.kpm_fallback);
    CHECK(slice.chernoff.empty());
    CHECK(slice.tails.p_greater.size() == 3);
    for (double p : slice.tails.p_greater) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    // smoothed tails still track the exact ones to the KPM resolution scale
    SolverOptions dense;
    const auto exact = ldp_slice(lat, pot, obs, 6, {0.0, 0.5, 1.0}, {0.1, 0.2, 0.4},
                                 bog.f_norm_sq, bog.f_alt_norm_sq, dense);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(slice.tails.p_greater[i] - exact.tails.p_greater[i]) <= 0.05);
    }
    CHECK(std::abs(slice.clt_dist_active - exact.clt_dist_active) <= 0.05);
}

TEST_CASE("N sweep") {
    const auto lambda_grid = linspace(0.0, 1.0, 21);
    const auto x_grid = linspace(0.0, 0.6, 61);
    SUBCASE("free gas: variance matches the one-particle moment at every N") {
        FreeGas fg;
        const auto sweep = n_sweep(fg.lat, fg.pot, fg.obs, {4, 6, 8}, lambda_grid, x_grid,
                                   fg.opts);
        for (const auto& slice : sweep.slices) {
            CHECK(std::abs(slice.var_over_n - fg.obs.g_norm_sq()) <= 1e-12);
        }
        CHECK(sweep.var_extrapolated == doctest::Approx(fg.obs.g_norm_sq()).epsilon(1e-10));
    }
    SUBCASE("weak coupling: extrapolated variance within five percent") {
        const auto lat = build_lattice(1, 1);
        const auto pot = shell_potential(lat, 1.0, 0.5);
        const auto obs = cos_mode_observable(lat, {1, 0, 0});
        const auto sweep =
            n_sweep(lat, pot, obs, {4, 6, 8, 10, 12}, lambda_grid, x_grid, {});
        CHECK(std::abs(sweep.var_extrapolated - sweep.f_norm_sq_active) /
                  sweep.f_norm_sq_active <=
              0.05);
        // trend: |Var/N - f2| strictly decreasing
        for (std::size_t i = 1; i < sweep.slices.size(); ++i) {
            CHECK(std::abs(sweep.slices[i].var_over_n - sweep.f_norm_sq_active) <
                  std::abs(sweep.slices[i - 1].var_over_n - sweep.f_norm_sq_active));
        }
        // discrete convexity of every measured generating function
        for (const auto& slice : sweep.slices) {
            CHECK(slice.curve.min_slope_increase >= -1e-10);
            CHECK(slice.curve.value.front() == 0.0);
        }
        // both rate routes near the quadratic prediction
        CHECK(std::abs(sweep.rate_ratio_tail - 1.0) <= 0.25);
        CHECK(std::abs(sweep.rate_ratio_legendre - 1.0) <= 0.25);
        CHECK(sweep.n_list.size() == sweep.clt_distances.size());
    }
    SUBCASE("ascending N list enforced") {
        FreeGas fg;
        CHECK_THROWS_AS(n_sweep(fg.lat, fg.pot, fg.obs, {6, 4}, lambda_grid, x_grid, fg.opts),
                        ValidationError);
    }
}
