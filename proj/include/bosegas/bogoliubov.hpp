#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bosegas/basis.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/model.hpp"

namespace bosegas {

// Closed-form quantities of the quadratic approximation, indexed by
// excitation-mode position (lattice order, zero mode removed).
struct BogoliubovData {
    Eigen::VectorXd mu;          // squeezing parameter per mode, <= 0
    Eigen::VectorXd dispersion;  // E(p) = sqrt(p^4 + 2 p^2 v(p))
    Eigen::VectorXcd f;          // rotated observable column, active convention
    Eigen::VectorXcd f_alt;      // alternate conjugation convention
    double f_norm_sq = 0.0;
    double f_alt_norm_sq = 0.0;
    double depletion = 0.0;      // sum_p sinh^2(mu_p)
    std::vector<std::pair<std::string, double>> energy_candidates;
};

// mu_p = atanh(-v(p) / (p^2 + v(p))) / 2, mu_p = 0 where v(p) = 0.
Eigen::VectorXd solve_mu(const Potential& pot, const MomentumLattice& lat);

Eigen::VectorXd dispersion(const Potential& pot, const MomentumLattice& lat);

// f(p) = cosh(mu_p) g(p) + sinh(mu_{-p}) conj(g(p)) and the alternate
// reading with conj(g(-p)). Both are reported; the variance sweep picks
// the active one (they coincide for symmetric observables).
struct TransformedObservable {
    Eigen::VectorXcd f;
    Eigen::VectorXcd f_alt;
    double f_norm_sq;
    double f_alt_norm_sq;
};

TransformedObservable transformed_f(const Observable& obs, const Eigen::VectorXd& mu,
                                    const MomentumLattice& lat);

double depletion(const Eigen::VectorXd& mu);

// Product of two-mode squeezed vacua over unordered pairs {p,-p}: the
// amplitude of (n, n) in pair p is tanh(mu_p)^n / cosh(mu_p), renormalized
// after cap truncation.
struct QuasifreeState {
    Eigen::VectorXcd vector;
    double tail_mass = 0.0;      // probability lost to the occupation caps
    bool cap_warning = false;    // tail mass above 1e-8
};

QuasifreeState quasifree_ground_state(const Eigen::VectorXd& mu, const CappedBasis& basis,
                                      const MomentumLattice& lat);

// Two closed-form constants for the ground energy of the quadratic
// operator; the eigensolver decides which one is realized.
std::vector<std::pair<std::string, double>> bogoliubov_energy_candidates(
    const Eigen::VectorXd& mu, const Potential& pot, const MomentumLattice& lat);

BogoliubovData bogoliubov_data(const Potential& pot, const Observable& obs,
                               const MomentumLattice& lat);

}  // namespace bosegas
