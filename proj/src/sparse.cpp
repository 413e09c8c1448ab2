#include "bosegas/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bosegas/errors.hpp"
#include "bosegas/parallel.hpp"

namespace bosegas {

namespace {

struct TaggedTriplet {
    std::int64_t row;
    std::int64_t col;
    std::int64_t seq;
    cplx value;
};

SparseOperator build_csr(std::int64_t dim, std::vector<TaggedTriplet>& entries, bool hermitian) {
    std::sort(entries.begin(), entries.end(), [](const TaggedTriplet& a, const TaggedTriplet& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return a.seq < b.seq;
    });

    SparseOperator out;
    out.dim = dim;
    out.hermitian = hermitian;
    out.row_ptr.assign(static_cast<std::size_t>(dim) + 1, 0);

    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        cplx sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col) {
            sum += entries[j].value;
            ++j;
        }
        if (sum != 0.0) {
            out.col.push_back(static_cast<std::int32_t>(entries[i].col));
            out.val.push_back(sum);
            ++out.row_ptr[static_cast<std::size_t>(entries[i].row) + 1];
        }
        i = j;
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(dim); ++r) {
        out.row_ptr[r + 1] += out.row_ptr[r];
    }
    return out;
}

}  // namespace

void SparseOperator::apply(const cplx* x, cplx* y) const {
    parallel_for_chunks(dim, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            cplx acc = 0.0;
            for (std::int64_t k = row_ptr[static_cast<std::size_t>(r)];
                 k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
                acc += val[static_cast<std::size_t>(k)] *
                       x[col[static_cast<std::size_t>(k)]];
            }
            y[r] = acc;
        }
    });
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& x) const {
    if (x.size() != dim) throw ValidationError("sparse apply: dimension mismatch");
    Eigen::VectorXcd y(dim);
    apply(x.data(), y.data());
    return y;
}

Eigen::MatrixXcd SparseOperator::dense(std::int64_t limit) const {
    if (limit > 0 && dim > limit) {
        throw DimensionOverflow("dense conversion of dimension " + std::to_string(dim) +
                                " exceeds limit " + std::to_string(limit));
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r) {
        for (std::int64_t k = row_ptr[static_cast<std::size_t>(r)];
             k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            out(r, col[static_cast<std::size_t>(k)]) += val[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

double SparseOperator::frobenius_norm() const {
    double acc = 0.0;
    for (const auto& v : val) acc += std::norm(v);
    return std::sqrt(acc);
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const auto& v : val) m = std::max(m, std::abs(v));
    return m;
}

cplx SparseOperator::entry(std::int64_t i, std::int64_t j) const {
    for (std::int64_t k = row_ptr[static_cast<std::size_t>(i)];
         k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
        if (col[static_cast<std::size_t>(k)] == j) return val[static_cast<std::size_t>(k)];
    }
    return 0.0;
}

double SparseOperator::hermiticity_defect() const {
    double defect = 0.0;
    for (std::int64_t r = 0; r < dim; ++r) {
        for (std::int64_t k = row_ptr[static_cast<std::size_t>(r)];
             k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const std::int64_t c = col[static_cast<std::size_t>(k)];
            if (c < r) continue;
            const cplx upper = val[static_cast<std::size_t>(k)];
            defect = std::max(defect, std::abs(upper - std::conj(entry(c, r))));
        }
    }
    return defect;
}

std::string SparseOperator::to_triplet_text() const {
    std::string out;
    char line[128];
    for (std::int64_t r = 0; r < dim; ++r) {
        for (std::int64_t k = row_ptr[static_cast<std::size_t>(r)];
             k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            const cplx v = val[static_cast<std::size_t>(k)];
            std::snprintf(line, sizeof(line), "%lld %d %.17g %.17g\n",
                          static_cast<long long>(r), col[static_cast<std::size_t>(k)], v.real(),
                          v.imag());
            out += line;
        }
    }
    return out;
}

SparseOperator from_triplets(std::int64_t dim, std::vector<Triplet> triplets, bool hermitize,
                             double defect_tol) {
    std::vector<TaggedTriplet> tagged;
    tagged.reserve(triplets.size() * (hermitize ? 2 : 1));
    std::int64_t seq = 0;
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) {
            throw ValidationError("triplet index out of range");
        }
        if (hermitize) {
            tagged.push_back({t.row, t.col, seq, 0.5 * t.value});
            tagged.push_back({t.col, t.row, seq, 0.5 * std::conj(t.value)});
        } else {
            tagged.push_back({t.row, t.col, seq, t.value});
        }
        ++seq;
    }
    SparseOperator out = build_csr(dim, tagged, hermitize);

    if (hermitize && defect_tol > 0.0) {
        // Guard: symmetrization must only round, never repair a wrong term.
        std::vector<TaggedTriplet> raw;
        raw.reserve(triplets.size());
        seq = 0;
        for (const auto& t : triplets) raw.push_back({t.row, t.col, seq++, t.value});
        const SparseOperator plain = build_csr(dim, raw, false);
        const double scale = plain.max_abs();
        const double defect = plain.hermiticity_defect();
        if (scale > 0.0 && defect > defect_tol * scale) {
            throw ValidationError("hermitize: input defect " + std::to_string(defect) +
                                  " exceeds tolerance; operator terms are not self-adjoint");
        }
    }
    return out;
}

SparseOperator linear_combination(const SparseOperator& a, cplx c_a, const SparseOperator& b,
                                  cplx c_b) {
    if (a.dim != b.dim) throw ValidationError("linear combination: dimension mismatch");
    std::vector<TaggedTriplet> tagged;
    tagged.reserve(a.val.size() + b.val.size());
    std::int64_t seq = 0;
    for (std::int64_t r = 0; r < a.dim; ++r) {
        for (std::int64_t k = a.row_ptr[static_cast<std::size_t>(r)];
             k < a.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            tagged.push_back({r, a.col[static_cast<std::size_t>(k)], seq++,
                              c_a * a.val[static_cast<std::size_t>(k)]});
        }
    }
    for (std::int64_t r = 0; r < b.dim; ++r) {
        for (std::int64_t k = b.row_ptr[static_cast<std::size_t>(r)];
             k < b.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            tagged.push_back({r, b.col[static_cast<std::size_t>(k)], seq++,
                              c_b * b.val[static_cast<std::size_t>(k)]});
        }
    }
    const bool herm = a.hermitian && b.hermitian && c_a.imag() == 0.0 && c_b.imag() == 0.0;
    return build_csr(a.dim, tagged, herm);
}

SparseOperator diagonal_operator(const Eigen::VectorXd& d) {
    std::vector<TaggedTriplet> tagged;
    tagged.reserve(static_cast<std::size_t>(d.size()));
    for (std::int64_t i = 0; i < d.size(); ++i) {
        if (d[i] != 0.0) tagged.push_back({i, i, i, cplx(d[i], 0.0)});
    }
    return build_csr(d.size(), tagged, true);
}

SparseOperator identity_operator(std::int64_t dim) {
    return diagonal_operator(Eigen::VectorXd::Ones(dim));
}

double frobenius_distance(const SparseOperator& a, const SparseOperator& b) {
    const SparseOperator diff = linear_combination(a, 1.0, b, -1.0);
    return diff.frobenius_norm();
}

double max_entry_distance(const SparseOperator& a, const SparseOperator& b) {
    const SparseOperator diff = linear_combination(a, 1.0, b, -1.0);
    return diff.max_abs();
}

}  // namespace bosegas
