#include "bosegas/bogoliubov.hpp"

#include <cmath>

#include "bosegas/errors.hpp"

namespace bosegas {

namespace {

// Positions of excitation modes and their -p partners in excitation indexing.
struct ExcIndex {
    std::vector<int> exc_to_lat;
    std::vector<int> partner;

    explicit ExcIndex(const MomentumLattice& lat) {
        exc_to_lat = lat.excitation_modes();
        std::vector<int> lat_to_exc(static_cast<std::size_t>(lat.size()), -1);
        for (int e = 0; e < static_cast<int>(exc_to_lat.size()); ++e) {
            lat_to_exc[static_cast<std::size_t>(exc_to_lat[static_cast<std::size_t>(e)])] = e;
        }
        partner.resize(exc_to_lat.size());
        for (std::size_t e = 0; e < exc_to_lat.size(); ++e) {
            partner[e] =
                lat_to_exc[static_cast<std::size_t>(lat.pair_map[exc_to_lat[e]])];
        }
    }
};

}  // namespace

Eigen::VectorXd solve_mu(const Potential& pot, const MomentumLattice& lat) {
    const auto exc = lat.excitation_modes();
    Eigen::VectorXd mu(exc.size());
    for (std::size_t e = 0; e < exc.size(); ++e) {
        const double v = pot.vhat[exc[e]];
        if (v == 0.0) {
            mu[static_cast<Eigen::Index>(e)] = 0.0;
            continue;
        }
        const double p2 = lat.p_squared(exc[e]);
        mu[static_cast<Eigen::Index>(e)] = 0.5 * std::atanh(-v / (p2 + v));
    }
    return mu;
}

Eigen::VectorXd dispersion(const Potential& pot, const MomentumLattice& lat) {
    const auto exc = lat.excitation_modes();
    Eigen::VectorXd e_of_p(exc.size());
    for (std::size_t e = 0; e < exc.size(); ++e) {
        const double p2 = lat.p_squared(exc[e]);
        e_of_p[static_cast<Eigen::Index>(e)] = std::sqrt(p2 * p2 + 2.0 * p2 * pot.vhat[exc[e]]);
    }
    return e_of_p;
}

TransformedObservable transformed_f(const Observable& obs, const Eigen::VectorXd& mu,
                                    const MomentumLattice& lat) {
    const ExcIndex idx(lat);
    const Eigen::Index m = mu.size();
    TransformedObservable out;
    out.f.resize(m);
    out.f_alt.resize(m);
    for (Eigen::Index e = 0; e < m; ++e) {
        const int le = idx.exc_to_lat[static_cast<std::size_t>(e)];
        const int pe = idx.partner[static_cast<std::size_t>(e)];
        const cplx g = obs.g_hat[le];
        const cplx g_neg = obs.g_hat[idx.exc_to_lat[static_cast<std::size_t>(pe)]];
        const double ch = std::cosh(mu[e]);
        const double sh = std::sinh(mu[pe]);
        out.f[e] = ch * g + sh * std::conj(g);
        out.f_alt[e] = ch * g + sh * std::conj(g_neg);
    }
    out.f_norm_sq = out.f.squaredNorm();
    out.f_alt_norm_sq = out.f_alt.squaredNorm();
    return out;
}

double depletion(const Eigen::VectorXd& mu) {
    double acc = 0.0;
    for (Eigen::Index e = 0; e < mu.size(); ++e) acc += std::sinh(mu[e]) * std::sinh(mu[e]);
    return acc;
}

QuasifreeState quasifree_ground_state(const Eigen::VectorXd& mu, const CappedBasis& basis,
                                      const MomentumLattice& lat) {
    const ExcIndex idx(lat);
    if (static_cast<int>(idx.exc_to_lat.size()) != basis.num_modes) {
        throw ValidationError("quasifree state: basis does not match lattice");
    }
    QuasifreeState out;
    out.vector = Eigen::VectorXcd::Zero(basis.dim);

    // Amplitude of the occupation vector: nonzero only when each pair is
    // balanced, value prod tanh(mu_p)^{n_p} / cosh(mu_p) over unordered pairs.
    for (std::int64_t row = 0; row < basis.dim; ++row) {
        const std::uint8_t* s = basis.state(row);
        double amp = 1.0;
        bool ok = true;
        for (int e = 0; e < basis.num_modes && ok; ++e) {
            const int pe = idx.partner[static_cast<std::size_t>(e)];
            if (s[e] != s[pe]) {
                ok = false;
                break;
            }
            if (e < pe) {
                const double tanh_mu = std::tanh(mu[e]);
                if (s[e] > 0 && tanh_mu == 0.0) {
                    ok = false;
                    break;
                }
                amp *= std::pow(tanh_mu, static_cast<double>(s[e])) / std::cosh(mu[e]);
            }
        }
        if (ok) out.vector[row] = amp;
    }

    const double mass = out.vector.squaredNorm();
    out.tail_mass = std::max(0.0, 1.0 - mass);
    out.cap_warning = out.tail_mass > 1e-8;
    if (mass > 0.0) out.vector /= std::sqrt(mass);
    return out;
}

std::vector<std::pair<std::string, double>> bogoliubov_energy_candidates(
    const Eigen::VectorXd& mu, const Potential& pot, const MomentumLattice& lat) {
    const Eigen::VectorXd e_of_p = dispersion(pot, lat);
    const auto exc = lat.excitation_modes();
    double diag_constant = 0.0;   // -sum E(p) cosh(mu_p) sinh(mu_{-p})
    double half_sum = 0.0;        // 1/2 sum [E(p) - p^2 - v(p)]
    const ExcIndex idx(lat);
    for (Eigen::Index e = 0; e < mu.size(); ++e) {
        const int pe = idx.partner[static_cast<std::size_t>(e)];
        diag_constant -= e_of_p[e] * std::cosh(mu[e]) * std::sinh(mu[pe]);
        const double p2 = lat.p_squared(exc[static_cast<std::size_t>(e)]);
        half_sum += 0.5 * (e_of_p[e] - p2 - pot.vhat[exc[static_cast<std::size_t>(e)]]);
    }
    return {{"diagonalization_constant", diag_constant}, {"half_sum_rule", half_sum}};
}

BogoliubovData bogoliubov_data(const Potential& pot, const Observable& obs,
                               const MomentumLattice& lat) {
    BogoliubovData data;
    data.mu = solve_mu(pot, lat);
    data.dispersion = dispersion(pot, lat);
    const TransformedObservable tf = transformed_f(obs, data.mu, lat);
    data.f = tf.f;
    data.f_alt = tf.f_alt;
    data.f_norm_sq = tf.f_norm_sq;
    data.f_alt_norm_sq = tf.f_alt_norm_sq;
    data.depletion = depletion(data.mu);
    data.energy_candidates = bogoliubov_energy_candidates(data.mu, pot, lat);
    return data;
}

}  // namespace bosegas
