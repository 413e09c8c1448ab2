#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bosegas/lattice.hpp"

namespace bosegas {

using cplx = std::complex<double>;

// Interaction Fourier coefficients, one real value per lattice mode.
// Validated: vhat >= 0 and even under p -> -p.
struct Potential {
    Eigen::VectorXd vhat;
    double l1_norm = 0.0;

    double at(int mode_index) const { return vhat[mode_index]; }
    double at_zero(const MomentumLattice& lat) const { return vhat[lat.zero_index]; }
};

Potential validate_potential(const Eigen::VectorXd& coeffs, const MomentumLattice& lat);

// vhat(p) = scale for |n|_2 <= radius (zero mode included), else 0.
Potential shell_potential(const MomentumLattice& lat, double radius, double scale);
Potential zero_potential(const MomentumLattice& lat);

// One-body observable in the plane-wave basis indexed by lattice modes.
//   matrix    : the Hermitian matrix O
//   centered  : O - <phi0, O phi0> Id, so centered(0,0) = 0
//   g_hat     : column centered(., zero) with no zero-mode component
struct Observable {
    Eigen::MatrixXcd matrix;
    Eigen::MatrixXcd centered;
    Eigen::VectorXcd g_hat;
    double op_norm = 0.0;
    double triple_norm = 0.0;

    double g_norm_sq() const { return g_hat.squaredNorm(); }
};

// Hermitizes the input as (O + O^dagger)/2. Inputs whose relative asymmetry
// exceeds asym_tol are rejected with NonHermitianError; pass a large
// asym_tol to accept arbitrary matrices and keep only their Hermitian part.
Observable build_observable(const Eigen::MatrixXcd& matrix, const MomentumLattice& lat,
                            double asym_tol = 1e-12);

// Multiplication by cos(2*pi k.x): entries 1/2 where n_p - n_q = +-k.
Observable cos_mode_observable(const MomentumLattice& lat, const std::array<int, 3>& k);
Observable identity_observable(const MomentumLattice& lat);

// Largest singular value of the matrix (1+|p|^2) O_{p,q} (1+|q|^2)^{-1}.
double triple_norm(const Eigen::MatrixXcd& matrix, const MomentumLattice& lat);

}  // namespace bosegas
