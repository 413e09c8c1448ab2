#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bosegas/sparse.hpp"

namespace bosegas {

struct SolverOptions {
    double eig_tol = 1e-10;
    double expm_tol = 1e-10;
    std::int64_t dense_limit = 4000;
    int max_lanczos = 400;
    double kpm_resolution = 1e-3;
    std::uint64_t seed = 0x5deece66dULL;
};

struct GroundStateResult {
    double energy = 0.0;
    Eigen::VectorXcd vector;
    double gap = 0.0;
    double residual = 0.0;
    bool degenerate = false;
    bool used_dense_path = false;
};

struct EigenPair {
    double value;
    Eigen::VectorXcd vector;
};

struct SpectralMeasure {
    Eigen::VectorXd points;   // ascending eigenvalues
    Eigen::VectorXd weights;  // |<v_i, psi>|^2

    double total_mass() const { return weights.sum(); }
    // P[X > x] resp. P[X >= x] under the point measure.
    double tail_greater(double x) const;
    double tail_geq(double x) const;
    // Right-continuous CDF P[X <= x].
    double cdf(double x) const;
};

// Lowest eigenpair with the spectral gap above it. Uses a dense
// eigendecomposition below opts.dense_limit, otherwise Lanczos with full
// reorthogonalization. The returned vector's first nonzero coefficient is
// rotated to the positive real axis so fixtures are deterministic.
GroundStateResult ground_state(const SparseOperator& A, const SolverOptions& opts = {});

// k lowest eigenpairs, ascending, orthonormal; flags degeneracy via the
// GroundStateResult path. Throws NoConvergence with the best residual.
std::vector<EigenPair> low_spectrum(const SparseOperator& A, int k,
                                    const SolverOptions& opts = {});

// e^{tA} psi for Hermitian A and real t via Lanczos with adaptive subspace
// size and time substepping; relative accuracy ~ opts.expm_tol.
Eigen::VectorXcd expm_multiply(const SparseOperator& A, const Eigen::VectorXcd& psi, double t,
                               const SolverOptions& opts = {});

struct DenseSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

DenseSpectrum full_spectrum_dense(const SparseOperator& A, const SolverOptions& opts = {});

// Exact spectral measure of A in state psi (dense path).
SpectralMeasure spectral_measure(const SparseOperator& A, const Eigen::VectorXcd& psi,
                                 const SolverOptions& opts = {});

// Kernel-polynomial (Chebyshev + Jackson damping) estimate of the CDF of
// the spectral measure, for dimensions beyond the dense limit. The CDF is
// accurate to ~resolution away from spectral atoms.
struct KpmCdf {
    double lower = 0.0;        // spectral interval used for rescaling
    double upper = 0.0;
    int num_moments = 0;
    Eigen::VectorXd moments;   // Jackson-damped Chebyshev moments

    double cdf(double x) const;
};

KpmCdf kpm_spectral_cdf(const SparseOperator& A, const Eigen::VectorXcd& psi,
                        const SolverOptions& opts = {});

}  // namespace bosegas
