#pragma once

#include <string>
#include <vector>

#include "bosegas/basis.hpp"
#include "bosegas/bogoliubov.hpp"
#include "bosegas/model.hpp"
#include "bosegas/operators.hpp"
#include "bosegas/solver.hpp"

namespace bosegas {

// Per-(s, N) ground-state diagnostics of the interpolated excitation
// Hamiltonian Q + s R.
struct InterpolationCell {
    double s = 0.0;
    int n_particles = 0;
    double energy = 0.0;
    double gap = 0.0;
    double moment1 = 0.0;          // <(N_+ + 1)>
    double moment2 = 0.0;          // <(N_+ + 1)^2>
    double remainder_norm = 0.0;   // ||R psi||
};

struct InterpolationDiagnostics {
    std::vector<InterpolationCell> cells;
    double min_gap = 0.0;
    bool gap_dip_flag = false;      // gap fell below half its s = 0 value
    bool moment_growth_flag = false;  // max_s <(N_++1)^2> grew along the N sweep
};

InterpolationDiagnostics interpolation_diagnostics(const std::vector<double>& s_grid,
                                                   const std::vector<int>& n_list,
                                                   const MomentumLattice& lat,
                                                   const Potential& pot,
                                                   const SolverOptions& opts);

// Residuals (max-entry norm) of the exact conjugation identities on the
// full excitation space of N particles. h must satisfy h(-p) = conj(h(p))
// so that phi_plus(h) is Hermitian; the checks use real even h.
struct ConjugationReport {
    double b_conjugation = 0.0;        // e^{X} b_p e^{-X} vs closed form, worst mode
    double dgamma_conjugation = 0.0;   // e^{X} dGamma(H) e^{-X} vs closed form
    double number_scaling[4] = {0, 0, 0, 0};  // the four e^{-s N_+} relations
    double derivative_fd = 0.0;        // closed-form derivative vs finite difference
    double derivative_fd_richardson = 0.0;
    bool pass(double tol_exact, double tol_conj, double tol_fd) const;
};

ConjugationReport verify_conjugation_identities(const Eigen::VectorXcd& h, double s, int N,
                                                const MomentumLattice& lat,
                                                const CappedBasis& basis,
                                                const SolverOptions& opts);

// Both routes to the moment generating function plus the number-operator
// sandwich values of the replacement step.
struct MgfPathwayPoint {
    double lambda = 0.0;
    double sector_value = 0.0;      // <psi_N, e^{lambda dGamma(centered O)} psi_N>
    double excitation_value = 0.0;  // <psi_G, e^{lambda(sqrt(N) phi_+(g) + B)} psi_G>
    double sandwich_plus = 0.0;     // middle factor e^{+2 lambda ||O|| N_+}
    double sandwich_minus = 0.0;    // middle factor e^{-2 lambda ||O|| N_+}
};

struct MgfPathwayReport {
    std::vector<MgfPathwayPoint> points;
    double max_relative_mismatch = 0.0;  // between the two routes
    double gap_exponent_plus = 0.0;      // fitted lambda-exponent of ln(S+ / M)
    double gap_exponent_minus = 0.0;     // fitted lambda-exponent of ln(M / S-)
};

MgfPathwayReport mgf_pathway_check(const std::vector<double>& lambdas, int N,
                                   const MomentumLattice& lat, const Potential& pot,
                                   const Observable& obs, const SolverOptions& opts);

// e^{tA} as a dense matrix, column by column through expm_multiply.
Eigen::MatrixXcd expm_dense(const SparseOperator& A, double t, const SolverOptions& opts);

}  // namespace bosegas
