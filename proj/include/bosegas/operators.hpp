#pragma once

#include <vector>

#include "bosegas/basis.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/model.hpp"
#include "bosegas/sparse.hpp"

namespace bosegas {

// ---------------------------------------------------------------------------
// Conventions.
//
// All second-quantized one-body operators use dGamma(M) = sum_{p,q} M_{p,q}
// a^dag_p a_q in the plane-wave mode ordering of the lattice. Smeared ladder
// operators are linear in the creation argument and antilinear in the
// annihilation argument: a*(h) = sum h_p a^dag_p, a(h) = sum conj(h_p) a_p,
// and likewise for the number-preserving b operators
//     b_p = sqrt((N - N_+)/N) a_p       (excitation space only).
// With these conventions phi_plus(h) = b*(h) + b(h) is Hermitian for every
// h, and conjugating the sector operator dGamma(centered O) with the
// excitation relabeling gives exactly  B + sqrt(N) phi_plus(g_hat).
// ---------------------------------------------------------------------------

// dGamma(M) on a fixed-N sector basis over all lattice modes.
SparseOperator one_body_sector(const Eigen::MatrixXcd& M, const SectorBasis& basis);

// dGamma(H) restricted to excitation modes, on a capped basis. H is indexed
// by excitation-mode position (lattice order with the zero mode removed).
SparseOperator one_body_excitation(const Eigen::MatrixXcd& H, const CappedBasis& basis);

// Same assembly without the Hermitian post-condition, for operator-algebra
// checks that need sum M_{p,q} a^dag_p a_q with non-Hermitian M.
SparseOperator one_body_excitation_general(const Eigen::MatrixXcd& M, const CappedBasis& basis);

// Full momentum-space Hamiltonian on the N-particle sector:
//   sum_p p^2 n_p + 1/(2(N-1)) sum v(k) a^dag_{p-k} a^dag_{q+k} a_p a_q,
// quartic sum restricted to triples whose four modes all lie on the lattice.
SparseOperator hamiltonian_sector(const MomentumLattice& lat, const Potential& pot,
                                  const SectorBasis& basis, int N);

// Number of excited particles. Diagonal.
SparseOperator nplus_capped(const CappedBasis& basis);
SparseOperator nplus_sector(const MomentumLattice& lat, const SectorBasis& basis);

// Quadratic approximation on the excitation space:
//   sum_{p != 0} (p^2 + v(p)) n_p + v(p)/2 (a^dag_p a^dag_{-p} + a_p a_{-p}).
// Pair-creation entries that would leave the capped basis are dropped.
SparseOperator quadratic_Q(const MomentumLattice& lat, const Potential& pot,
                           const CappedBasis& basis);

// Remainder operator, transcribed term group by term group with the exact
// finite-N prefactors (the b-operator diagonal factors are evaluated
// exactly, no large-N expansion):
//   N/(2(N-1)) sum v(p) [b*_p b*_{-p} + b_p b_{-p}]
//     - 1/2 sum v(p) [a*_p a*_{-p} + a_p a_{-p}]
//     - (N_+ - 1)/(N-1) sum v(p) a*_p a_p
//     + sqrt(N)/(N-1) sum_{p+q != 0} v(q) [b*_{p+q} a*_{-q} a_p + h.c.]
//     + 1/(2(N-1)) sum_{k != 0} v(k) a*_{p-k} a*_{q+k} a_p a_q   (all modes != 0)
SparseOperator remainder_transcribed(const MomentumLattice& lat, const Potential& pot,
                                     const CappedBasis& basis, int N);

// phi_plus(h) = b*(h) + b(h); h is indexed by excitation-mode position.
SparseOperator phi_plus(const Eigen::VectorXcd& h, const CappedBasis& basis, int N);

// i phi_minus(h) = b(h) - b*(h) (anti-Hermitian).
SparseOperator i_phi_minus(const Eigen::VectorXcd& h, const CappedBasis& basis, int N);

// Individual modified ladder operators b_p / b^dag_p (excitation-mode index).
SparseOperator b_annihilator(int exc_mode, const CappedBasis& basis, int N);
SparseOperator b_creator(int exc_mode, const CappedBasis& basis, int N);

// P A P^dag for the row relabeling P (sector row -> capped row).
SparseOperator permute_rows_cols(const SparseOperator& A, const std::vector<std::int64_t>& perm);

// Excitation Hamiltonian U_N H U_N^dag - (N/2) v(0) on the capped basis
// (cap = N). Built from the sector Hamiltonian by relabeling.
SparseOperator excitation_hamiltonian(const MomentumLattice& lat, const Potential& pot,
                                      const SectorBasis& sector, const CappedBasis& capped,
                                      const ExcitationMap& map, int N);

// Interpolation family Q + s * R with the operational remainder R = G - Q.
struct ExcitationFamily {
    SparseOperator Q;
    SparseOperator G;            // U H U^dag - N/2 v(0)
    SparseOperator R_operational;  // G - Q
};

ExcitationFamily build_excitation_family(const MomentumLattice& lat, const Potential& pot,
                                         const SectorBasis& sector, const CappedBasis& capped,
                                         const ExcitationMap& map, int N);

SparseOperator interpolated_G(const ExcitationFamily& family, double s);

// Helper: restrict an all-modes lattice vector to excitation-mode indexing.
Eigen::VectorXcd to_excitation_vector(const Eigen::VectorXcd& full, const MomentumLattice& lat);
// Centered observable block on excitation modes (the B operator matrix).
Eigen::MatrixXcd excitation_block(const Eigen::MatrixXcd& centered, const MomentumLattice& lat);

}  // namespace bosegas
