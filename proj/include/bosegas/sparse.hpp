#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bosegas {

using cplx = std::complex<double>;

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    cplx value;
};

// Compressed-row Hermitian-aware sparse matrix. When the hermitian flag is
// set the stored entries satisfy A = A^dagger exactly: construction adds
// (v/2, conj(v)/2) pairs in mirrored slots with identical accumulation
// order, so the two sums are bitwise conjugates.
struct SparseOperator {
    std::int64_t dim = 0;
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> col;
    std::vector<cplx> val;
    bool hermitian = false;

    std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }

    void apply(const cplx* x, cplx* y) const;  // y = A x, parallel over rows
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

    Eigen::MatrixXcd dense(std::int64_t limit = 0) const;
    double frobenius_norm() const;
    double max_abs() const;
    // max over stored entries of |A_ij - conj(A_ji)|; 0 when hermitian.
    double hermiticity_defect() const;
    cplx entry(std::int64_t i, std::int64_t j) const;

    // Documented triplet text format: "row col re im" per line, 0-based,
    // %.17g floats, rows ascending.
    std::string to_triplet_text() const;
};

// Builds CSR from triplets (duplicates are summed in emission order).
// When hermitize is true the result is (A + A^dagger)/2 stored exactly
// Hermitian; defect_tol guards against transcription bugs: if the input
// deviates from Hermitian by more than defect_tol * max|A| the build throws.
SparseOperator from_triplets(std::int64_t dim, std::vector<Triplet> triplets, bool hermitize,
                             double defect_tol = 1e-12);

// c_a * A + c_b * B; hermitian flag kept when both inputs carry it and the
// coefficients are real.
SparseOperator linear_combination(const SparseOperator& a, cplx c_a, const SparseOperator& b,
                                  cplx c_b);

SparseOperator diagonal_operator(const Eigen::VectorXd& d);
SparseOperator identity_operator(std::int64_t dim);

// ||A - B||_F and max-entry |A - B| over the union pattern.
double frobenius_distance(const SparseOperator& a, const SparseOperator& b);
double max_entry_distance(const SparseOperator& a, const SparseOperator& b);

}  // namespace bosegas
