#include "bosegas/lattice.hpp"

#include <string>

#include "bosegas/errors.hpp"

namespace bosegas {

int MomentumLattice::index_of(const std::array<int, 3>& n) const {
    int idx = 0;
    const int width = 2 * p_max + 1;
    for (int k = 0; k < dimension; ++k) {
        if (n[k] < -p_max || n[k] > p_max) return -1;
        idx = idx * width + (n[k] + p_max);
    }
    for (int k = dimension; k < 3; ++k) {
        if (n[k] != 0) return -1;
    }
    return idx;
}

int MomentumLattice::index_of_sum(int i, int j) const {
    std::array<int, 3> n{};
    for (int k = 0; k < 3; ++k) n[k] = modes[i][k] + modes[j][k];
    return index_of(n);
}

int MomentumLattice::index_of_diff(int i, int j) const {
    std::array<int, 3> n{};
    for (int k = 0; k < 3; ++k) n[k] = modes[i][k] - modes[j][k];
    return index_of(n);
}

Eigen::Vector3d MomentumLattice::momentum(int i) const {
    return kTwoPi * Eigen::Vector3d(modes[i][0], modes[i][1], modes[i][2]);
}

double MomentumLattice::p_squared(int i) const {
    const auto& n = modes[i];
    const double nsq = static_cast<double>(n[0]) * n[0] +
                       static_cast<double>(n[1]) * n[1] +
                       static_cast<double>(n[2]) * n[2];
    return kTwoPi * kTwoPi * nsq;
}

Eigen::VectorXd MomentumLattice::p_squared_all() const {
    Eigen::VectorXd out(size());
    for (int i = 0; i < size(); ++i) out[i] = p_squared(i);
    return out;
}

std::vector<int> MomentumLattice::excitation_modes() const {
    std::vector<int> out;
    out.reserve(modes.size() - 1);
    for (int i = 0; i < size(); ++i) {
        if (i != zero_index) out.push_back(i);
    }
    return out;
}

MomentumLattice build_lattice(int d, int p_max) {
    if (d < 1 || d > 3) {
        throw ValidationError("lattice dimension must be 1, 2 or 3, got " + std::to_string(d));
    }
    if (p_max < 1) {
        throw ValidationError("lattice p_max must be >= 1, got " + std::to_string(p_max));
    }
    MomentumLattice lat;
    lat.dimension = d;
    lat.p_max = p_max;
    const int width = 2 * p_max + 1;
    int count = 1;
    for (int k = 0; k < d; ++k) count *= width;
    lat.modes.reserve(count);

    std::array<int, 3> n{0, 0, 0};
    // Lexicographic enumeration over the cube [-p_max, p_max]^d.
    std::vector<int> digit(d, -p_max);
    while (true) {
        for (int k = 0; k < d; ++k) n[k] = digit[k];
        lat.modes.push_back(n);
        int k = d - 1;
        while (k >= 0 && digit[k] == p_max) {
            digit[k] = -p_max;
            --k;
        }
        if (k < 0) break;
        ++digit[k];
    }

    lat.zero_index = lat.index_of({0, 0, 0});
    lat.pair_map.resize(lat.modes.size());
    for (int i = 0; i < lat.size(); ++i) {
        std::array<int, 3> neg{-lat.modes[i][0], -lat.modes[i][1], -lat.modes[i][2]};
        lat.pair_map[i] = lat.index_of(neg);
    }
    return lat;
}

}  // namespace bosegas
