#include "bosegas/model.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "bosegas/errors.hpp"

namespace bosegas {

Potential validate_potential(const Eigen::VectorXd& coeffs, const MomentumLattice& lat) {
    if (coeffs.size() != lat.size()) {
        throw ValidationError("potential needs one coefficient per lattice mode: expected " +
                              std::to_string(lat.size()) + ", got " +
                              std::to_string(coeffs.size()));
    }
    for (int i = 0; i < lat.size(); ++i) {
        if (coeffs[i] < 0.0) {
            throw ValidationError("NegativeCoefficient: vhat must be >= 0, mode " +
                                  std::to_string(i) + " has " + std::to_string(coeffs[i]));
        }
        const int j = lat.pair_map[i];
        if (coeffs[i] != coeffs[j]) {
            throw ValidationError("AsymmetricCoefficient: vhat(p) != vhat(-p) at mode " +
                                  std::to_string(i));
        }
    }
    Potential pot;
    pot.vhat = coeffs;
    pot.l1_norm = coeffs.lpNorm<1>();
    return pot;
}

Potential shell_potential(const MomentumLattice& lat, double radius, double scale) {
    if (scale < 0.0) throw ValidationError("shell potential scale must be >= 0");
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(lat.size());
    const double r2 = radius * radius;
    for (int i = 0; i < lat.size(); ++i) {
        const auto& n = lat.modes[i];
        const double n2 = static_cast<double>(n[0]) * n[0] + static_cast<double>(n[1]) * n[1] +
                          static_cast<double>(n[2]) * n[2];
        if (n2 <= r2 + 1e-12) coeffs[i] = scale;
    }
    return validate_potential(coeffs, lat);
}

Potential zero_potential(const MomentumLattice& lat) {
    return validate_potential(Eigen::VectorXd::Zero(lat.size()), lat);
}

double triple_norm(const Eigen::MatrixXcd& matrix, const MomentumLattice& lat) {
    const int m = lat.size();
    Eigen::MatrixXcd weighted(m, m);
    for (int p = 0; p < m; ++p) {
        const double wp = 1.0 + lat.p_squared(p);
        for (int q = 0; q < m; ++q) {
            const double wq = 1.0 + lat.p_squared(q);
            weighted(p, q) = matrix(p, q) * (wp / wq);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(weighted);
    return svd.singularValues()[0];
}

Observable build_observable(const Eigen::MatrixXcd& matrix, const MomentumLattice& lat,
                            double asym_tol) {
    const int m = lat.size();
    if (matrix.rows() != m || matrix.cols() != m) {
        throw ValidationError("observable matrix must be " + std::to_string(m) + "x" +
                              std::to_string(m));
    }
    const double scale = matrix.cwiseAbs().maxCoeff();
    const double defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && defect > asym_tol * scale) {
        throw NonHermitianError("NonHermitian observable: max|O - O^dagger| = " +
                                std::to_string(defect));
    }

    Observable obs;
    obs.matrix = 0.5 * (matrix + matrix.adjoint().eval());
    const double condensate_expectation = obs.matrix(lat.zero_index, lat.zero_index).real();
    obs.centered = obs.matrix;
    obs.centered.diagonal().array() -= condensate_expectation;
    obs.g_hat = obs.centered.col(lat.zero_index);
    obs.g_hat[lat.zero_index] = 0.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(obs.matrix, Eigen::EigenvaluesOnly);
    obs.op_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    obs.triple_norm = triple_norm(obs.matrix, lat);
    return obs;
}

Observable cos_mode_observable(const MomentumLattice& lat, const std::array<int, 3>& k) {
    bool zero = true;
    for (int c = 0; c < 3; ++c) zero = zero && k[c] == 0;
    if (zero) throw ValidationError("cos-mode wave vector k must be nonzero");
    const int m = lat.size();
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(m, m);
    for (int q = 0; q < m; ++q) {
        for (int sign : {+1, -1}) {
            std::array<int, 3> n{lat.modes[q][0] + sign * k[0], lat.modes[q][1] + sign * k[1],
                                 lat.modes[q][2] + sign * k[2]};
            const int p = lat.index_of(n);
            if (p >= 0) mat(p, q) += 0.5;
        }
    }
    return build_observable(mat, lat);
}

Observable identity_observable(const MomentumLattice& lat) {
    return build_observable(Eigen::MatrixXcd::Identity(lat.size(), lat.size()), lat);
}

}  // namespace bosegas
