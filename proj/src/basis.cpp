#include "bosegas/basis.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "bosegas/errors.hpp"

namespace bosegas {

namespace {

int lex_compare(const std::uint8_t* a, const std::uint8_t* b, int m) {
    return std::memcmp(a, b, static_cast<std::size_t>(m));
}

std::int64_t lookup(const std::vector<std::uint8_t>& occ, int m, std::int64_t dim,
                    const std::uint8_t* s) {
    std::int64_t lo = 0, hi = dim - 1;
    while (lo <= hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        const int c = lex_compare(occ.data() + mid * m, s, m);
        if (c == 0) return mid;
        if (c < 0)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return -1;
}

void check_limit(std::int64_t dim, std::int64_t max_dim, const char* what) {
    if (max_dim > 0 && dim > max_dim) {
        throw DimensionOverflow(std::string(what) + " dimension " + std::to_string(dim) +
                                " exceeds the configured limit " + std::to_string(max_dim) +
                                "; reduce N or p_max");
    }
}

}  // namespace

std::int64_t SectorBasis::index_of(const std::uint8_t* s) const {
    return lookup(occ, num_modes, dim, s);
}

std::int64_t CappedBasis::index_of(const std::uint8_t* s) const {
    return lookup(occ, num_modes, dim, s);
}

std::int64_t sector_dimension(int num_modes, int total) {
    // C(total + num_modes - 1, num_modes - 1), watching for overflow.
    std::int64_t result = 1;
    for (int i = 1; i <= num_modes - 1; ++i) {
        result = result * (total + i) / i;
        if (result < 0 || result > (std::int64_t{1} << 56)) return -1;
    }
    return result;
}

std::int64_t capped_dimension(int num_modes, int cap, int per_mode_cap) {
    // Counts occupations recursively; used for limit checks and tests.
    std::vector<std::int64_t> by_budget(static_cast<std::size_t>(cap) + 1, 0);
    by_budget[0] = 1;
    for (int mode = 0; mode < num_modes; ++mode) {
        std::vector<std::int64_t> next(static_cast<std::size_t>(cap) + 1, 0);
        for (int used = 0; used <= cap; ++used) {
            if (by_budget[used] == 0) continue;
            for (int n = 0; n <= per_mode_cap && used + n <= cap; ++n) {
                next[used + n] += by_budget[used];
            }
        }
        by_budget.swap(next);
    }
    std::int64_t total = 0;
    for (auto c : by_budget) total += c;
    return total;
}

SectorBasis enumerate_sector(int num_modes, int total, std::int64_t max_dim) {
    if (num_modes < 1) throw ValidationError("sector basis needs at least one mode");
    if (total < 0) throw ValidationError("particle number must be >= 0");
    if (total > 255) throw DimensionOverflow("particle number exceeds the uint8 occupation cap");
    const std::int64_t dim = sector_dimension(num_modes, total);
    if (dim < 0) throw DimensionOverflow("sector basis dimension overflows");
    check_limit(dim, max_dim, "sector basis");

    SectorBasis basis;
    basis.num_modes = num_modes;
    basis.total = total;
    basis.dim = dim;
    basis.occ.reserve(static_cast<std::size_t>(dim) * num_modes);

    std::vector<std::uint8_t> state(num_modes, 0);
    // Ascending lexicographic generation: mode 0 varies slowest.
    auto emit = [&](auto&& self, int mode, int remaining) -> void {
        if (mode == num_modes - 1) {
            state[mode] = static_cast<std::uint8_t>(remaining);
            basis.occ.insert(basis.occ.end(), state.begin(), state.end());
            return;
        }
        for (int n = 0; n <= remaining; ++n) {
            state[mode] = static_cast<std::uint8_t>(n);
            self(self, mode + 1, remaining - n);
        }
        state[mode] = 0;
    };
    emit(emit, 0, total);
    return basis;
}

CappedBasis enumerate_capped(int num_modes, int cap, int per_mode_cap, std::int64_t max_dim) {
    if (num_modes < 1) throw ValidationError("capped basis needs at least one mode");
    if (cap < 0 || per_mode_cap < 0) throw ValidationError("caps must be >= 0");
    if (cap > 255 || per_mode_cap > 255)
        throw DimensionOverflow("occupation cap exceeds the uint8 limit");
    const std::int64_t dim = capped_dimension(num_modes, cap, per_mode_cap);
    check_limit(dim, max_dim, "capped basis");

    CappedBasis basis;
    basis.num_modes = num_modes;
    basis.cap = cap;
    basis.per_mode_cap = per_mode_cap;
    basis.dim = dim;
    basis.occ.reserve(static_cast<std::size_t>(dim) * num_modes);
    basis.total_occ.reserve(static_cast<std::size_t>(dim));

    std::vector<std::uint8_t> state(num_modes, 0);
    auto emit = [&](auto&& self, int mode, int used) -> void {
        if (mode == num_modes) {
            basis.occ.insert(basis.occ.end(), state.begin(), state.end());
            basis.total_occ.push_back(static_cast<std::uint8_t>(used));
            return;
        }
        const int room = std::min(per_mode_cap, cap - used);
        for (int n = 0; n <= room; ++n) {
            state[mode] = static_cast<std::uint8_t>(n);
            self(self, mode + 1, used + n);
        }
        state[mode] = 0;
    };
    emit(emit, 0, 0);
    return basis;
}

ExcitationMap excitation_unitary_map(const SectorBasis& sector, const CappedBasis& capped,
                                     int zero_index) {
    if (capped.num_modes != sector.num_modes - 1) {
        throw ValidationError("excitation map: capped basis must drop exactly the zero mode");
    }
    if (capped.dim != sector.dim) {
        throw ValidationError("excitation map: bases are not in bijection (cap = N and "
                              "per_mode_cap = N required)");
    }
    ExcitationMap map;
    map.sec_to_cap.assign(static_cast<std::size_t>(sector.dim), -1);
    map.cap_to_sec.assign(static_cast<std::size_t>(capped.dim), -1);
    std::vector<std::uint8_t> stripped(static_cast<std::size_t>(capped.num_modes));
    for (std::int64_t row = 0; row < sector.dim; ++row) {
        const std::uint8_t* s = sector.state(row);
        int k = 0;
        for (int m = 0; m < sector.num_modes; ++m) {
            if (m == zero_index) continue;
            stripped[static_cast<std::size_t>(k++)] = s[m];
        }
        const std::int64_t target = capped.index_of(stripped.data());
        if (target < 0) throw ValidationError("excitation map: stripped state not found");
        map.sec_to_cap[static_cast<std::size_t>(row)] = target;
        map.cap_to_sec[static_cast<std::size_t>(target)] = row;
    }
    return map;
}

}  // namespace bosegas
