#include <doctest.h>

#include <cmath>
#include <random>

#include "bosegas/excitations.hpp"
#include "bosegas/stats.hpp"

using namespace bosegas;

namespace {

struct Fixture {
    MomentumLattice lat = build_lattice(1, 1);
    Potential pot = shell_potential(lat, 1.0, 1.0);
    int N = 4;
    SectorBasis sector = enumerate_sector(lat.size(), N, 0);
    CappedBasis capped = enumerate_capped(lat.size() - 1, N, N, 0);
    ExcitationMap map = excitation_unitary_map(sector, capped, lat.zero_index);
    ExcitationFamily fam = build_excitation_family(lat, pot, sector, capped, map, N);
};

Eigen::VectorXcd real_even_h(const MomentumLattice& lat, double norm, double tilt = 0.0) {
    const auto exc = lat.excitation_modes();
    std::vector<int> lat_to_exc(static_cast<std::size_t>(lat.size()), -1);
    for (int e = 0; e < static_cast<int>(exc.size()); ++e) {
        lat_to_exc[static_cast<std::size_t>(exc[static_cast<std::size_t>(e)])] = e;
    }
    Eigen::VectorXcd h(exc.size());
    for (int e = 0; e < static_cast<int>(exc.size()); ++e) {
        const int pe = lat_to_exc[static_cast<std::size_t>(
            lat.pair_map[exc[static_cast<std::size_t>(e)]])];
        h[e] = 1.0 + tilt * std::min(e, pe);
    }
    h *= norm / h.norm();
    return h;
}

}  // namespace

TEST_CASE("interpolation family endpoints and linearity") {
    Fixture fx;
    CHECK(max_entry_distance(interpolated_G(fx.fam, 0.0), fx.fam.Q) == 0.0);
    CHECK(frobenius_distance(interpolated_G(fx.fam, 1.0), fx.fam.G) /
              fx.fam.Q.frobenius_norm() <=
          1e-10);
    const auto mid = interpolated_G(fx.fam, 0.5);
    const auto avg = linear_combination(fx.fam.Q, 0.5, fx.fam.G, 0.5);
    CHECK(max_entry_distance(mid, avg) <= 1e-13 * fx.fam.G.max_abs());
}

TEST_CASE("free-gas diagnostics: vacuum ground state and kinetic gap") {
    const auto lat = build_lattice(1, 1);
    const auto diag =
        interpolation_diagnostics({0.0, 0.5, 1.0}, {3, 5}, lat, zero_potential(lat), {});
    for (const auto& cell : diag.cells) {
        CHECK(cell.energy == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(cell.moment1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cell.moment2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cell.gap == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-10));
        CHECK(cell.remainder_norm == 0.0);
    }
    CHECK_FALSE(diag.gap_dip_flag);
}

TEST_CASE("weak-coupling number moments approach the quasi-free depletion") {
    const auto lat = build_lattice(1, 1);
    const auto pot = shell_potential(lat, 1.0, 0.5);
    const auto diag = interpolation_diagnostics({1.0}, {4, 6, 8, 10}, lat, pot, {});
    const double depl = depletion(solve_mu(pot, lat));
    const auto& last = diag.cells.back();
    CHECK(last.n_particles == 10);
    CHECK(std::abs(last.moment1 - (1.0 + depl)) / (1.0 + depl) <= 0.1);
    MESSAGE("N = 10 excitation number ", last.moment1 - 1.0, " vs depletion ", depl);
}

TEST_CASE("gap is continuous along the interpolation") {
    const auto lat = build_lattice(1, 1);
    const auto pot = shell_potential(lat, 1.0, 1.0);
    std::vector<double> fine;
    for (int i = 0; i <= 32; ++i) fine.push_back(i / 32.0);
    const auto ref = interpolation_diagnostics(fine, {4}, lat, pot, {});
    double lipschitz = 0.0;
    for (std::size_t i = 1; i < ref.cells.size(); ++i) {
        lipschitz = std::max(lipschitz, std::abs(ref.cells[i].gap - ref.cells[i - 1].gap) /
                                            (fine[i] - fine[i - 1]));
    }
    const std::vector<double> coarse = {0.0, 0.25, 0.5, 0.75, 1.0};
    const auto diag = interpolation_diagnostics(coarse, {4}, lat, pot, {});
    for (std::size_t i = 1; i < diag.cells.size(); ++i) {
        CHECK(std::abs(diag.cells[i].gap - diag.cells[i - 1].gap) <=
              1.25 * lipschitz * 0.25 + 1e-9);
    }
}

TEST_CASE("conjugation identities at small and moderate arguments") {
    Fixture fx;
    SolverOptions opts;
    SUBCASE("vanishing argument reduces every conjugation to the identity") {
        const auto h = real_even_h(fx.lat, 1e-6);
        const auto rep = verify_conjugation_identities(h, 0.3, fx.N, fx.lat, fx.capped, opts);
        CHECK(rep.b_conjugation <= 1e-12);
        CHECK(rep.dgamma_conjugation <= 1e-12);
        for (double r : rep.number_scaling) CHECK(r <= 1e-12);
    }
    SUBCASE("single-pair lattice at the acceptance argument") {
        const auto h = real_even_h(fx.lat, 0.2);
        const auto rep = verify_conjugation_identities(h, 0.3, fx.N, fx.lat, fx.capped, opts);
        CHECK(rep.b_conjugation <= 1e-8);
        CHECK(rep.dgamma_conjugation <= 1e-8);
        for (double r : rep.number_scaling) CHECK(r <= 1e-10);
        CHECK(rep.derivative_fd <= 1e-6);
        CHECK(rep.derivative_fd_richardson <= 1e-6);
    }
    SUBCASE("two-pair lattice exercises non-parallel derivative directions") {
        const auto lat = build_lattice(1, 2);
        const auto capped = enumerate_capped(lat.size() - 1, 3, 3, 0);
        const auto h = real_even_h(lat, 0.25, 0.4);
        const auto rep = verify_conjugation_identities(h, 0.2, 3, lat, capped, opts);
        CHECK(rep.b_conjugation <= 1e-8);
        CHECK(rep.dgamma_conjugation <= 1e-8);
        CHECK(rep.derivative_fd <= 1e-6);
    }
}

TEST_CASE("number-exponential scaling for random complex arguments") {
    // e^{-s N_+} b(h) e^{s N_+} = e^s b(h) holds entrywise per mode, so any
    // smearing obeys it; checked through the report at s = 0.3.
    Fixture fx;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXcd h(2);
    h << cplx(uni(rng), uni(rng)), cplx(uni(rng), uni(rng));

    Eigen::VectorXd scale(fx.capped.dim);
    for (std::int64_t i = 0; i < fx.capped.dim; ++i) {
        scale[i] = std::exp(-0.3 * fx.capped.total_occ[static_cast<std::size_t>(i)]);
    }
    const auto phi = phi_plus(h, fx.capped, fx.N);
    const auto iphi = i_phi_minus(h, fx.capped, fx.N);
    const Eigen::MatrixXcd b_of_h =
        0.5 * (phi.dense() + iphi.dense());  // = b(h)
    Eigen::MatrixXcd conj_b = b_of_h;
    for (std::int64_t r = 0; r < fx.capped.dim; ++r) {
        for (std::int64_t c = 0; c < fx.capped.dim; ++c) conj_b(r, c) *= scale[r] / scale[c];
    }
    CHECK((conj_b - std::exp(0.3) * b_of_h).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("moment generating function through both routes") {
    const auto lat = build_lattice(1, 1);
    SolverOptions opts;
    SUBCASE("identity observable is degenerate: both sides one") {
        const auto rep = mgf_pathway_check({0.0, 0.4, 0.9}, 4, lat, shell_potential(lat, 1, 0.5),
                                           identity_observable(lat), opts);
        for (const auto& pt : rep.points) {
            CHECK(pt.sector_value == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(pt.excitation_value == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    SUBCASE("weak coupling at N = 6") {
        const auto rep = mgf_pathway_check({0.0, 0.05, 0.1}, 6, lat,
                                           shell_potential(lat, 1, 0.5),
                                           cos_mode_observable(lat, {1, 0, 0}), opts);
        CHECK(rep.points.front().sector_value == 1.0);
        CHECK(rep.max_relative_mismatch <= 1e-9);
        // sandwich values bracket the mixed exponential
        for (const auto& pt : rep.points) {
            CHECK(pt.sandwich_plus >= pt.excitation_value - 1e-12);
            CHECK(pt.sandwich_minus <= pt.excitation_value + 1e-12);
        }
        MESSAGE("sandwich gap exponents: ", rep.gap_exponent_plus, " / ",
                rep.gap_exponent_minus);
    }
}
