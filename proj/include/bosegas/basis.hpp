#pragma once

#include <cstdint>
#include <vector>

#include "bosegas/lattice.hpp"

namespace bosegas {

// Occupation-number basis with fixed total particle number N over all
// lattice modes. States are stored flat (dim x num_modes, uint8) in
// lexicographically ascending order so lookups are binary searches and
// fixtures are byte-stable.
struct SectorBasis {
    int num_modes = 0;
    int total = 0;  // N
    std::int64_t dim = 0;
    std::vector<std::uint8_t> occ;

    const std::uint8_t* state(std::int64_t row) const { return occ.data() + row * num_modes; }
    std::int64_t index_of(const std::uint8_t* s) const;
};

// Basis over excitation modes (zero mode removed) with total occupation
// <= cap and per-mode occupation <= per_mode_cap.
struct CappedBasis {
    int num_modes = 0;
    int cap = 0;
    int per_mode_cap = 0;
    std::int64_t dim = 0;
    std::vector<std::uint8_t> occ;
    std::vector<std::uint8_t> total_occ;  // N_+ per state

    const std::uint8_t* state(std::int64_t row) const { return occ.data() + row * num_modes; }
    std::int64_t index_of(const std::uint8_t* s) const;
};

SectorBasis enumerate_sector(int num_modes, int total, std::int64_t max_dim);
CappedBasis enumerate_capped(int num_modes, int cap, int per_mode_cap, std::int64_t max_dim);

std::int64_t sector_dimension(int num_modes, int total);
std::int64_t capped_dimension(int num_modes, int cap, int per_mode_cap);

// Row bijection between an N-particle sector basis and the excitation
// basis (cap = N, per_mode_cap = N) obtained by dropping the zero-mode
// occupation: n_0 = N - N_+. sec_to_cap[row in sector] = row in capped.
struct ExcitationMap {
    std::vector<std::int64_t> sec_to_cap;
    std::vector<std::int64_t> cap_to_sec;
};

ExcitationMap excitation_unitary_map(const SectorBasis& sector, const CappedBasis& capped,
                                     int zero_index);

}  // namespace bosegas
