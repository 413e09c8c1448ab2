#include "bosegas/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bosegas/errors.hpp"

namespace bosegas {

namespace {

Eigen::VectorXcd deterministic_start(std::int64_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (std::int64_t i = 0; i < dim; ++i) v[i] = cplx(uni(rng), uni(rng));
    v.normalize();
    return v;
}

void fix_phase(Eigen::VectorXcd& v) {
    for (std::int64_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > 1e-12) {
            v *= std::conj(v[i]) / a;
            // Clean the pivot's imaginary dust so fixtures compare exactly.
            v[i] = cplx(std::abs(v[i]), 0.0);
            return;
        }
    }
}

struct LanczosDecomposition {
    std::vector<Eigen::VectorXcd> basis;
    std::vector<double> alpha;
    std::vector<double> beta;  // beta[j] couples basis[j] and basis[j+1]
    bool exhausted = false;    // invariant subspace reached
};

// Lanczos with full reorthogonalization (two Gram-Schmidt sweeps).
LanczosDecomposition lanczos(const SparseOperator& A, const Eigen::VectorXcd& start, int steps) {
    LanczosDecomposition out;
    const double breakdown = 1e-14;
    Eigen::VectorXcd v = start.normalized();
    out.basis.push_back(v);
    for (int j = 0; j < steps; ++j) {
        Eigen::VectorXcd w = A.apply(out.basis.back());
        const double a = w.dot(out.basis.back()).real();
        // w.dot(x) conjugates w, so this is Re<v_j, A v_j>.
        out.alpha.push_back(a);
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (const auto& u : out.basis) w -= u.dot(w) * u;
        }
        const double b = w.norm();
        if (b < breakdown * (1.0 + std::abs(a))) {
            out.exhausted = true;
            return out;
        }
        out.beta.push_back(b);
        out.basis.push_back(w / b);
    }
    return out;
}

Eigen::MatrixXd tridiagonal(const LanczosDecomposition& lz, int m) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        T(i, i) = lz.alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
            T(i, i + 1) = lz.beta[static_cast<std::size_t>(i)];
            T(i + 1, i) = lz.beta[static_cast<std::size_t>(i)];
        }
    }
    return T;
}

// Restarted Lanczos for the lowest eigenpair within the orthogonal
// complement of `deflate`. Warm-restarts from the best Ritz vector.
EigenPair lanczos_lowest(const SparseOperator& A, const std::vector<EigenPair>& deflate,
                         Eigen::VectorXcd start, const SolverOptions& opts) {
    const std::int64_t dim = A.dim;
    const auto project_out = [&deflate](Eigen::VectorXcd& v) {
        for (const auto& p : deflate) v -= p.vector.dot(v) * p.vector;
    };
    project_out(start);
    if (start.norm() < 1e-10) {
        start = deterministic_start(dim, opts.seed + 977);
        project_out(start);
    }
    start.normalize();

    double best_residual = std::numeric_limits<double>::infinity();
    const int steps =
        std::min<std::int64_t>(dim - static_cast<std::int64_t>(deflate.size()), opts.max_lanczos);
    for (int restart = 0; restart < 40; ++restart) {
        LanczosDecomposition lz;
        lz.basis.push_back(start);
        for (int j = 0; j < steps; ++j) {
            Eigen::VectorXcd w = A.apply(lz.basis.back());
            const double a = lz.basis.back().dot(w).real();
            lz.alpha.push_back(a);
            for (int sweep = 0; sweep < 2; ++sweep) {
                for (const auto& u : lz.basis) w -= u.dot(w) * u;
                project_out(w);
            }
            const double b = w.norm();
            if (b < 1e-14 * (1.0 + std::abs(a))) {
                lz.exhausted = true;
                break;
            }
            lz.beta.push_back(b);
            lz.basis.push_back(w / b);
        }
        const int m = static_cast<int>(lz.alpha.size());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(lz, m));
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        for (int j = 0; j < m; ++j) {
            v += es.eigenvectors()(j, 0) * lz.basis[static_cast<std::size_t>(j)];
        }
        project_out(v);
        v.normalize();
        const double theta = es.eigenvalues()[0];
        const double res = (A.apply(v) - theta * v).norm();
        best_residual = std::min(best_residual, res);
        const double scale = std::max(1.0, std::abs(theta));
        if (res <= opts.eig_tol * scale || lz.exhausted) {
            fix_phase(v);
            return {theta, v};
        }
        start = v;
    }
    throw NoConvergence("Lanczos eigenpair did not reach tolerance", best_residual);
}

std::vector<EigenPair> lanczos_low_spectrum(const SparseOperator& A, int k,
                                            const SolverOptions& opts) {
    const std::int64_t dim = A.dim;
    if (dim == 0) throw ValidationError("low_spectrum: empty operator");
    const int want = std::min<int>(k, static_cast<int>(dim));

    std::vector<EigenPair> found;
    found.reserve(static_cast<std::size_t>(want));
    for (int i = 0; i < want; ++i) {
        Eigen::VectorXcd start = deterministic_start(dim, opts.seed + 31 * i);
        found.push_back(lanczos_lowest(A, found, start, opts));
    }
    std::sort(found.begin(), found.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    return found;
}

}  // namespace

double SpectralMeasure::tail_greater(double x) const {
    double acc = 0.0;
    for (std::int64_t i = points.size() - 1; i >= 0; --i) {
        if (points[i] > x)
            acc += weights[i];
        else
            break;
    }
    return acc;
}

double SpectralMeasure::tail_geq(double x) const {
    double acc = 0.0;
    for (std::int64_t i = points.size() - 1; i >= 0; --i) {
        if (points[i] >= x)
            acc += weights[i];
        else
            break;
    }
    return acc;
}

double SpectralMeasure::cdf(double x) const {
    double acc = 0.0;
    for (std::int64_t i = 0; i < points.size(); ++i) {
        if (points[i] <= x)
            acc += weights[i];
        else
            break;
    }
    return acc;
}

DenseSpectrum full_spectrum_dense(const SparseOperator& A, const SolverOptions& opts) {
    if (A.dim > opts.dense_limit) {
        throw DimensionOverflow("full_spectrum_dense: dimension " + std::to_string(A.dim) +
                                " exceeds the dense limit " + std::to_string(opts.dense_limit));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.dense());
    if (es.info() != Eigen::Success) {
        throw NoConvergence("dense eigendecomposition failed", 0.0);
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<EigenPair> low_spectrum(const SparseOperator& A, int k, const SolverOptions& opts) {
    if (k < 1) throw ValidationError("low_spectrum: k must be >= 1");
    if (A.dim <= opts.dense_limit) {
        const DenseSpectrum spec = full_spectrum_dense(A, opts);
        std::vector<EigenPair> out;
        const int take = std::min<std::int64_t>(k, A.dim);
        out.reserve(static_cast<std::size_t>(take));
        for (int i = 0; i < take; ++i) {
            Eigen::VectorXcd v = spec.vectors.col(i);
            fix_phase(v);
            out.push_back({spec.values[i], v});
        }
        return out;
    }
    return lanczos_low_spectrum(A, k, opts);
}

GroundStateResult ground_state(const SparseOperator& A, const SolverOptions& opts) {
    GroundStateResult out;
    if (A.dim == 1) {
        out.energy = A.entry(0, 0).real();
        out.vector = Eigen::VectorXcd::Ones(1);
        out.gap = 0.0;
        out.residual = 0.0;
        out.used_dense_path = true;
        return out;
    }
    const auto pairs = low_spectrum(A, 2, opts);
    out.energy = pairs[0].value;
    out.vector = pairs[0].vector;
    out.gap = pairs[1].value - pairs[0].value;
    out.residual = (A.apply(out.vector) - out.energy * out.vector).norm();
    const double scale = std::max({1.0, std::abs(pairs[0].value), std::abs(pairs[1].value)});
    out.degenerate = out.gap <= 1e-10 * scale;
    out.used_dense_path = A.dim <= opts.dense_limit;
    return out;
}

Eigen::VectorXcd expm_multiply(const SparseOperator& A, const Eigen::VectorXcd& psi, double t,
                               const SolverOptions& opts) {
    if (psi.size() != A.dim) throw ValidationError("expm_multiply: dimension mismatch");
    const double norm0 = psi.norm();
    if (t == 0.0 || norm0 == 0.0) return psi;

    int substeps = 1;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::VectorXcd current = psi;
        bool ok = true;
        for (int step = 0; step < substeps && ok; ++step) {
            const double dt = t / substeps;
            const double beta0 = current.norm();
            if (beta0 == 0.0) return current;

            const int max_m =
                std::min<std::int64_t>(A.dim, std::max(2, opts.max_lanczos));
            LanczosDecomposition lz;
            lz.basis.push_back(current / beta0);
            Eigen::VectorXd u;
            bool converged = false;
            int m = 0;
            double shift = 0.0;
            for (int j = 0; j < max_m; ++j) {
                Eigen::VectorXcd w = A.apply(lz.basis.back());
                const double a = w.dot(lz.basis.back()).real();
                lz.alpha.push_back(a);
                for (int sweep = 0; sweep < 2; ++sweep) {
                    for (const auto& b : lz.basis) w -= b.dot(w) * b;
                }
                const double bnorm = w.norm();
                m = static_cast<int>(lz.alpha.size());
                shift = lz.alpha[0];

                const bool exhausted = bnorm < 1e-14 * (1.0 + std::abs(a));
                // Check the a-posteriori estimate every few steps.
                if (exhausted || m >= 4 || m == static_cast<int>(A.dim)) {
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(lz, m));
                    Eigen::VectorXd phase =
                        ((es.eigenvalues().array() - shift) * dt).exp().matrix();
                    u = es.eigenvectors() *
                        (phase.asDiagonal() * es.eigenvectors().row(0).transpose());
                    const double err =
                        exhausted ? 0.0 : bnorm * std::abs(dt) * std::abs(u[m - 1]);
                    if (exhausted || err <= 0.25 * opts.expm_tol * u.norm()) {
                        converged = true;
                    }
                }
                if (converged) break;
                if (exhausted) {
                    converged = true;
                    break;
                }
                lz.beta.push_back(bnorm);
                lz.basis.push_back(w / bnorm);
            }
            if (!converged) {
                ok = false;
                break;
            }
            Eigen::VectorXcd next = Eigen::VectorXcd::Zero(A.dim);
            for (int j = 0; j < m; ++j) next += u[j] * lz.basis[static_cast<std::size_t>(j)];
            current = (beta0 * std::exp(shift * dt)) * next;
        }
        if (ok) return current;
        substeps *= 2;
    }
    throw NoConvergence("expm_multiply: Krylov iteration did not converge", 0.0);
}

SpectralMeasure spectral_measure(const SparseOperator& A, const Eigen::VectorXcd& psi,
                                 const SolverOptions& opts) {
    const DenseSpectrum spec = full_spectrum_dense(A, opts);
    SpectralMeasure out;
    out.points = spec.values;
    out.weights.resize(spec.values.size());
    const Eigen::VectorXcd overlaps = spec.vectors.adjoint() * psi;
    for (std::int64_t i = 0; i < overlaps.size(); ++i) out.weights[i] = std::norm(overlaps[i]);
    return out;
}

double KpmCdf::cdf(double x) const {
    const double half_width = 0.5 * (upper - lower);
    const double center = 0.5 * (upper + lower);
    double scaled = (x - center) / half_width;
    scaled = std::clamp(scaled, -1.0, 1.0);
    const double theta = std::acos(scaled);
    // integral over [-1, x] of the Chebyshev expansion against the weight.
    double acc = moments[0] * (1.0 - theta / M_PI);
    for (int k = 1; k < num_moments; ++k) {
        acc -= moments[k] * 2.0 / M_PI * std::sin(k * theta) / k;
    }
    return acc;
}

KpmCdf kpm_spectral_cdf(const SparseOperator& A, const Eigen::VectorXcd& psi,
                        const SolverOptions& opts) {
    // Spectral interval from Lanczos extremes of two starts (psi plus a
    // deterministic random vector), padded; Chebyshev recursions diverge if
    // an eigenvalue escapes the interval, so pad generously.
    double lower = std::numeric_limits<double>::infinity();
    double upper = -std::numeric_limits<double>::infinity();
    const Eigen::VectorXcd starts[2] = {psi.normalized(),
                                        deterministic_start(A.dim, opts.seed + 4242)};
    for (const auto& s : starts) {
        LanczosDecomposition lz = lanczos(A, s, static_cast<int>(std::min<std::int64_t>(A.dim, 80)));
        const int m = static_cast<int>(lz.alpha.size());
        if (m == 0) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(lz, m));
        lower = std::min(lower, es.eigenvalues().minCoeff());
        upper = std::max(upper, es.eigenvalues().maxCoeff());
    }
    const double pad = 0.05 * std::max(upper - lower, 1e-8) + 1e-12;
    lower -= pad;
    upper += pad;

    KpmCdf out;
    out.lower = lower;
    out.upper = upper;
    out.num_moments = std::max(16, static_cast<int>(std::ceil(M_PI / opts.kpm_resolution)));

    const double half_width = 0.5 * (upper - lower);
    const double center = 0.5 * (upper + lower);
    const double inv = 1.0 / half_width;

    // Chebyshev recursion on the rescaled operator.
    Eigen::VectorXcd t_prev = psi;
    Eigen::VectorXcd t_curr = inv * (A.apply(psi) - center * psi);
    Eigen::VectorXd mu(out.num_moments);
    mu[0] = psi.squaredNorm();
    if (out.num_moments > 1) mu[1] = psi.dot(t_curr).real();
    for (int k = 2; k < out.num_moments; ++k) {
        Eigen::VectorXcd t_next = 2.0 * inv * (A.apply(t_curr) - center * t_curr) - t_prev;
        t_prev.swap(t_curr);
        t_curr.swap(t_next);
        mu[k] = psi.dot(t_curr).real();
    }

    // Jackson damping.
    const int n = out.num_moments;
    for (int k = 0; k < n; ++k) {
        const double g = ((n - k + 1) * std::cos(M_PI * k / (n + 1)) +
                          std::sin(M_PI * k / (n + 1)) / std::tan(M_PI / (n + 1))) /
                         (n + 1);
        mu[k] *= g;
    }
    out.moments = mu;
    return out;
}

}  // namespace bosegas
