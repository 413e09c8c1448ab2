#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace bosegas {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Finite cube of torus momenta p = 2*pi*n with integer n, |n_i| <= p_max.
// Modes are ordered lexicographically in n, so the set is closed under
// negation and pair_map is the index involution n <-> -n.
struct MomentumLattice {
    int dimension = 0;
    int p_max = 0;
    std::vector<std::array<int, 3>> modes;  // unused components are zero
    int zero_index = -1;
    std::vector<int> pair_map;

    int size() const { return static_cast<int>(modes.size()); }

    // Index of integer mode n, or -1 when n falls outside the cube.
    int index_of(const std::array<int, 3>& n) const;

    // Index of the lattice sum of modes i and j, or -1 if off-lattice.
    int index_of_sum(int i, int j) const;
    int index_of_diff(int i, int j) const;

    Eigen::Vector3d momentum(int i) const;
    double p_squared(int i) const;
    Eigen::VectorXd p_squared_all() const;

    // Lattice indices of the nonzero modes, in lattice order.
    std::vector<int> excitation_modes() const;
};

// d in {1,2,3}, p_max >= 1; throws ValidationError otherwise.
MomentumLattice build_lattice(int d, int p_max);

}  // namespace bosegas
