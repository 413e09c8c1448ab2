#include "bosegas/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "bosegas/errors.hpp"
#include "bosegas/parallel.hpp"

namespace bosegas {

namespace {

// Column-parallel assembly; chunks are concatenated in column order so the
// triplet stream is independent of the thread count.
template <typename EmitColumn>
std::vector<Triplet> assemble_columns(std::int64_t dim, const EmitColumn& emit) {
    std::map<std::int64_t, std::vector<Triplet>> parts;
    std::mutex guard;
    parallel_for_chunks(dim, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<Triplet> buf;
        for (std::int64_t j = lo; j < hi; ++j) emit(j, buf);
        std::lock_guard<std::mutex> lock(guard);
        parts.emplace(lo, std::move(buf));
    });
    std::vector<Triplet> all;
    for (auto& [lo, buf] : parts) {
        all.insert(all.end(), buf.begin(), buf.end());
    }
    return all;
}

// Lattice/basis cross-indexing for excitation-space assembly.
struct ExcContext {
    std::vector<int> exc_to_lat;   // excitation position -> lattice index
    std::vector<int> lat_to_exc;   // lattice index -> excitation position (-1 for zero mode)
    std::vector<int> partner;      // excitation position of -p
    std::vector<double> p2;
    std::vector<double> vhat;

    ExcContext(const MomentumLattice& lat, const Potential& pot, const CappedBasis& basis) {
        exc_to_lat = lat.excitation_modes();
        if (static_cast<int>(exc_to_lat.size()) != basis.num_modes) {
            throw ValidationError("capped basis does not match the lattice excitation modes");
        }
        lat_to_exc.assign(static_cast<std::size_t>(lat.size()), -1);
        for (int e = 0; e < static_cast<int>(exc_to_lat.size()); ++e) {
            lat_to_exc[static_cast<std::size_t>(exc_to_lat[static_cast<std::size_t>(e)])] = e;
        }
        partner.resize(exc_to_lat.size());
        p2.resize(exc_to_lat.size());
        vhat.resize(exc_to_lat.size());
        for (std::size_t e = 0; e < exc_to_lat.size(); ++e) {
            const int li = exc_to_lat[e];
            partner[e] = lat_to_exc[static_cast<std::size_t>(lat.pair_map[li])];
            p2[e] = lat.p_squared(li);
            vhat[e] = pot.vhat[li];
        }
    }
};

// Mutable occupation scratch for monomial application.
struct Scratch {
    std::vector<int> occ;
    double amp = 1.0;

    void load(const std::uint8_t* s, int m) {
        occ.assign(s, s + m);
        amp = 1.0;
    }
    bool annihilate(int mode) {
        if (occ[static_cast<std::size_t>(mode)] == 0) return false;
        amp *= std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(mode)]));
        --occ[static_cast<std::size_t>(mode)];
        return true;
    }
    void create(int mode) {
        ++occ[static_cast<std::size_t>(mode)];
        amp *= std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(mode)]));
    }
};

template <typename Basis>
std::int64_t locate(const Basis& basis, const std::vector<int>& occ) {
    thread_local std::vector<std::uint8_t> key;
    key.resize(occ.size());
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (occ[i] > 255) return -1;
        key[i] = static_cast<std::uint8_t>(occ[i]);
    }
    return basis.index_of(key.data());
}

}  // namespace

SparseOperator one_body_sector(const Eigen::MatrixXcd& M, const SectorBasis& basis) {
    if (M.rows() != basis.num_modes || M.cols() != basis.num_modes) {
        throw ValidationError("one_body_sector: matrix does not match the basis mode set");
    }
    const int m = basis.num_modes;
    auto trip = assemble_columns(basis.dim, [&](std::int64_t j, std::vector<Triplet>& out) {
        Scratch scratch;
        const std::uint8_t* s = basis.state(j);
        cplx diag = 0.0;
        for (int p = 0; p < m; ++p) {
            if (s[p] > 0 && M(p, p) != 0.0) diag += M(p, p) * static_cast<double>(s[p]);
        }
        if (diag != 0.0) out.push_back({j, j, diag});
        for (int q = 0; q < m; ++q) {
            if (s[q] == 0) continue;
            for (int p = 0; p < m; ++p) {
                if (p == q || M(p, q) == 0.0) continue;
                scratch.load(s, m);
                scratch.annihilate(q);
                scratch.create(p);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, M(p, q) * scratch.amp});
            }
        }
    });
    return from_triplets(basis.dim, std::move(trip), true);
}

namespace {

std::vector<Triplet> one_body_excitation_triplets(const Eigen::MatrixXcd& H,
                                                  const CappedBasis& basis) {
    const int m = basis.num_modes;
    auto trip = assemble_columns(basis.dim, [&](std::int64_t j, std::vector<Triplet>& out) {
        Scratch scratch;
        const std::uint8_t* s = basis.state(j);
        cplx diag = 0.0;
        for (int p = 0; p < m; ++p) {
            if (s[p] > 0 && H(p, p) != 0.0) diag += H(p, p) * static_cast<double>(s[p]);
        }
        if (diag != 0.0) out.push_back({j, j, diag});
        for (int q = 0; q < m; ++q) {
            if (s[q] == 0) continue;
            for (int p = 0; p < m; ++p) {
                if (p == q || H(p, q) == 0.0) continue;
                scratch.load(s, m);
                scratch.annihilate(q);
                scratch.create(p);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, H(p, q) * scratch.amp});
            }
        }
    });
    return trip;
}

}  // namespace

SparseOperator one_body_excitation(const Eigen::MatrixXcd& H, const CappedBasis& basis) {
    if (H.rows() != basis.num_modes || H.cols() != basis.num_modes) {
        throw ValidationError("one_body_excitation: matrix does not match the basis mode set");
    }
    return from_triplets(basis.dim, one_body_excitation_triplets(H, basis), true);
}

SparseOperator one_body_excitation_general(const Eigen::MatrixXcd& M, const CappedBasis& basis) {
    if (M.rows() != basis.num_modes || M.cols() != basis.num_modes) {
        throw ValidationError("one_body_excitation: matrix does not match the basis mode set");
    }
    return from_triplets(basis.dim, one_body_excitation_triplets(M, basis), false);
}

SparseOperator hamiltonian_sector(const MomentumLattice& lat, const Potential& pot,
                                  const SectorBasis& basis, int N) {
    if (N < 2) throw ValidationError("hamiltonian needs N >= 2");
    if (basis.num_modes != lat.size() || basis.total != N) {
        throw ValidationError("hamiltonian_sector: basis does not match lattice / N");
    }
    const int m = lat.size();
    const double quartic_scale = 1.0 / (2.0 * (N - 1));
    auto trip = assemble_columns(basis.dim, [&](std::int64_t j, std::vector<Triplet>& out) {
        Scratch scratch;
        const std::uint8_t* s = basis.state(j);
        double kinetic = 0.0;
        for (int p = 0; p < m; ++p) {
            if (s[p] > 0) kinetic += lat.p_squared(p) * static_cast<double>(s[p]);
        }
        if (kinetic != 0.0) out.push_back({j, j, cplx(kinetic, 0.0)});

        for (int q = 0; q < m; ++q) {
            if (s[q] == 0) continue;
            for (int p = 0; p < m; ++p) {
                for (int k = 0; k < m; ++k) {
                    const double vk = pot.vhat[k];
                    if (vk == 0.0) continue;
                    const int out1 = lat.index_of_diff(p, k);
                    const int out2 = lat.index_of_sum(q, k);
                    if (out1 < 0 || out2 < 0) continue;
                    scratch.load(s, m);
                    if (!scratch.annihilate(q)) continue;
                    if (!scratch.annihilate(p)) continue;
                    scratch.create(out2);
                    scratch.create(out1);
                    const std::int64_t i = locate(basis, scratch.occ);
                    if (i >= 0) out.push_back({i, j, cplx(vk * quartic_scale * scratch.amp, 0.0)});
                }
            }
        }
    });
    return from_triplets(basis.dim, std::move(trip), true);
}

SparseOperator nplus_capped(const CappedBasis& basis) {
    Eigen::VectorXd d(basis.dim);
    for (std::int64_t i = 0; i < basis.dim; ++i) {
        d[i] = static_cast<double>(basis.total_occ[static_cast<std::size_t>(i)]);
    }
    return diagonal_operator(d);
}

SparseOperator nplus_sector(const MomentumLattice& lat, const SectorBasis& basis) {
    Eigen::VectorXd d(basis.dim);
    for (std::int64_t i = 0; i < basis.dim; ++i) {
        d[i] = static_cast<double>(basis.total) -
               static_cast<double>(basis.state(i)[lat.zero_index]);
    }
    return diagonal_operator(d);
}

SparseOperator quadratic_Q(const MomentumLattice& lat, const Potential& pot,
                           const CappedBasis& basis) {
    const ExcContext ctx(lat, pot, basis);
    const int m = basis.num_modes;
    auto trip = assemble_columns(basis.dim, [&](std::int64_t j, std::vector<Triplet>& out) {
        Scratch scratch;
        const std::uint8_t* s = basis.state(j);
        double diag = 0.0;
        for (int e = 0; e < m; ++e) {
            if (s[e] > 0) {
                diag += (ctx.p2[static_cast<std::size_t>(e)] +
                         ctx.vhat[static_cast<std::size_t>(e)]) * static_cast<double>(s[e]);
            }
        }
        if (diag != 0.0) out.push_back({j, j, cplx(diag, 0.0)});

        for (int e = 0; e < m; ++e) {
            const double v = ctx.vhat[static_cast<std::size_t>(e)];
            if (v == 0.0) continue;
            const int pe = ctx.partner[static_cast<std::size_t>(e)];
            // a^dag_p a^dag_{-p}
            scratch.load(s, m);
            scratch.create(pe);
            scratch.create(e);
            std::int64_t i = locate(basis, scratch.occ);
            if (i >= 0) out.push_back({i, j, cplx(0.5 * v * scratch.amp, 0.0)});
            // a_p a_{-p}
            scratch.load(s, m);
            if (scratch.annihilate(pe) && scratch.annihilate(e)) {
                i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, cplx(0.5 * v * scratch.amp, 0.0)});
            }
        }
    });
    return from_triplets(basis.dim, std::move(trip), true);
}

SparseOperator remainder_transcribed(const MomentumLattice& lat, const Potential& pot,
                                     const CappedBasis& basis, int N) {
    if (N < 2) throw ValidationError("remainder needs N >= 2");
    const ExcContext ctx(lat, pot, basis);
    const int m = basis.num_modes;
    const double nd = static_cast<double>(N);
    auto trip = assemble_columns(basis.dim, [&](std::int64_t j, std::vector<Triplet>& out) {
        Scratch scratch;
        const std::uint8_t* s = basis.state(j);
        const int t = basis.total_occ[static_cast<std::size_t>(j)];

        // density correction -(N_+ - 1)/(N - 1) sum v(p) n_p
        double density = 0.0;
        for (int e = 0; e < m; ++e) {
            if (s[e] > 0) density += ctx.vhat[static_cast<std::size_t>(e)] * s[e];
        }
        if (density != 0.0) {
            out.push_back({j, j, cplx(-density * (t - 1.0) / (nd - 1.0), 0.0)});
        }

        for (int e = 0; e < m; ++e) {
            const double v = ctx.vhat[static_cast<std::size_t>(e)];
            if (v == 0.0) continue;
            const int pe = ctx.partner[static_cast<std::size_t>(e)];
            const double c_pair = nd / (2.0 * (nd - 1.0)) * v;

            // b^dag_p b^dag_{-p}: exact diagonal sqrt factors at N_+ = t
            if (t + 2 <= N) {
                scratch.load(s, m);
                scratch.create(pe);
                scratch.create(e);
                const double factor = std::sqrt((nd - t) / nd) * std::sqrt((nd - t - 1.0) / nd);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, cplx(c_pair * factor * scratch.amp, 0.0)});
            }
            // b_p b_{-p}
            scratch.load(s, m);
            if (scratch.annihilate(pe) && scratch.annihilate(e)) {
                const double factor =
                    std::sqrt((nd - t + 1.0) / nd) * std::sqrt((nd - t + 2.0) / nd);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, cplx(c_pair * factor * scratch.amp, 0.0)});
            }
            // -1/2 v(p) [a^dag_p a^dag_{-p} + a_p a_{-p}]
            scratch.load(s, m);
            scratch.create(pe);
            scratch.create(e);
            std::int64_t i = locate(basis, scratch.occ);
            if (i >= 0) out.push_back({i, j, cplx(-0.5 * v * scratch.amp, 0.0)});
            scratch.load(s, m);
            if (scratch.annihilate(pe) && scratch.annihilate(e)) {
                i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, cplx(-0.5 * v * scratch.amp, 0.0)});
            }
        }

        // cubic exchange with the condensate:
        // sqrt(N)/(N-1) sum v(q) [b^dag_{p+q} a^dag_{-q} a_p + h.c.]
        const double c_cubic = std::sqrt(nd) / (nd - 1.0);
        for (int q = 0; q < m; ++q) {
            const double vq = ctx.vhat[static_cast<std::size_t>(q)];
            if (vq == 0.0) continue;
            const int mq = ctx.partner[static_cast<std::size_t>(q)];
            for (int p = 0; p < m; ++p) {
                const int lat_sum =
                    lat.index_of_sum(ctx.exc_to_lat[static_cast<std::size_t>(p)],
                                     ctx.exc_to_lat[static_cast<std::size_t>(q)]);
                if (lat_sum < 0) continue;
                const int pq = ctx.lat_to_exc[static_cast<std::size_t>(lat_sum)];
                if (pq < 0) continue;  // p + q = 0 excluded

                // b^dag_{p+q} a^dag_{-q} a_p ; diagonal factor at N_+ = t
                if (s[p] > 0 && t + 1 <= N) {
                    scratch.load(s, m);
                    scratch.annihilate(p);
                    scratch.create(mq);
                    scratch.create(pq);
                    const double factor = std::sqrt((nd - t) / nd);
                    const std::int64_t i = locate(basis, scratch.occ);
                    if (i >= 0) {
                        out.push_back({i, j, cplx(c_cubic * vq * factor * scratch.amp, 0.0)});
                    }
                }
                // h.c.: a^dag_p a_{-q} b_{p+q}
                scratch.load(s, m);
                if (scratch.annihilate(pq)) {
                    const double factor = std::sqrt((nd - t + 1.0) / nd);
                    if (scratch.annihilate(mq)) {
                        scratch.create(p);
                        const std::int64_t i = locate(basis, scratch.occ);
                        if (i >= 0) {
                            out.push_back(
                                {i, j, cplx(c_cubic * vq * factor * scratch.amp, 0.0)});
                        }
                    }
                }
            }
        }

        // purely excited quartic: 1/(2(N-1)) sum_{k != 0} v(k) a*_{p-k} a*_{q+k} a_p a_q
        const double c_quartic = 1.0 / (2.0 * (nd - 1.0));
        for (int q = 0; q < m; ++q) {
            if (s[q] == 0) continue;
            for (int p = 0; p < m; ++p) {
                for (int ke = 0; ke < m; ++ke) {
                    const double vk = ctx.vhat[static_cast<std::size_t>(ke)];
                    if (vk == 0.0) continue;
                    const int lat_k = ctx.exc_to_lat[static_cast<std::size_t>(ke)];
                    const int lat_out1 =
                        lat.index_of_diff(ctx.exc_to_lat[static_cast<std::size_t>(p)], lat_k);
                    const int lat_out2 =
                        lat.index_of_sum(ctx.exc_to_lat[static_cast<std::size_t>(q)], lat_k);
                    if (lat_out1 < 0 || lat_out2 < 0) continue;
                    const int out1 = ctx.lat_to_exc[static_cast<std::size_t>(lat_out1)];
                    const int out2 = ctx.lat_to_exc[static_cast<std::size_t>(lat_out2)];
                    if (out1 < 0 || out2 < 0) continue;
                    scratch.load(s, m);
                    if (!scratch.annihilate(q)) continue;
                    if (!scratch.annihilate(p)) continue;
                    scratch.create(out2);
                    scratch.create(out1);
                    const std::int64_t i = locate(basis, scratch.occ);
                    if (i >= 0) out.push_back({i, j, cplx(c_quartic * vk * scratch.amp, 0.0)});
                }
            }
        }
    });
    return from_triplets(basis.dim, std::move(trip), true);
}

SparseOperator phi_plus(const Eigen::VectorXcd& h, const CappedBasis& basis, int N) {
    if (h.size() != basis.num_modes) throw ValidationError("phi_plus: h size mismatch");
    const int m = basis.num_modes;
    const double nd = static_cast<double>(N);
    auto trip = assemble_columns(basis.dim, [&](std::int64_t j, std::vector<Triplet>& out) {
        Scratch scratch;
        const std::uint8_t* s = basis.state(j);
        const int t = basis.total_occ[static_cast<std::size_t>(j)];
        for (int e = 0; e < m; ++e) {
            if (h[e] == 0.0) continue;
            if (t + 1 <= N) {
                scratch.load(s, m);
                scratch.create(e);
                const double factor = std::sqrt((nd - t) / nd);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, h[e] * factor * scratch.amp});
            }
            scratch.load(s, m);
            if (scratch.annihilate(e)) {
                const double factor = std::sqrt((nd - t + 1.0) / nd);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, std::conj(h[e]) * factor * scratch.amp});
            }
        }
    });
    return from_triplets(basis.dim, std::move(trip), true);
}

SparseOperator i_phi_minus(const Eigen::VectorXcd& h, const CappedBasis& basis, int N) {
    if (h.size() != basis.num_modes) throw ValidationError("i_phi_minus: h size mismatch");
    const int m = basis.num_modes;
    const double nd = static_cast<double>(N);
    auto trip = assemble_columns(basis.dim, [&](std::int64_t j, std::vector<Triplet>& out) {
        Scratch scratch;
        const std::uint8_t* s = basis.state(j);
        const int t = basis.total_occ[static_cast<std::size_t>(j)];
        for (int e = 0; e < m; ++e) {
            if (h[e] == 0.0) continue;
            if (t + 1 <= N) {
                scratch.load(s, m);
                scratch.create(e);
                const double factor = std::sqrt((nd - t) / nd);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, -h[e] * factor * scratch.amp});
            }
            scratch.load(s, m);
            if (scratch.annihilate(e)) {
                const double factor = std::sqrt((nd - t + 1.0) / nd);
                const std::int64_t i = locate(basis, scratch.occ);
                if (i >= 0) out.push_back({i, j, std::conj(h[e]) * factor * scratch.amp});
            }
        }
    });
    return from_triplets(basis.dim, std::move(trip), false);
}

SparseOperator b_annihilator(int exc_mode, const CappedBasis& basis, int N) {
    const int m = basis.num_modes;
    const double nd = static_cast<double>(N);
    std::vector<Triplet> trip;
    Scratch scratch;
    for (std::int64_t j = 0; j < basis.dim; ++j) {
        const int t = basis.total_occ[static_cast<std::size_t>(j)];
        scratch.load(basis.state(j), m);
        if (!scratch.annihilate(exc_mode)) continue;
        const double factor = std::sqrt((nd - t + 1.0) / nd);
        const std::int64_t i = locate(basis, scratch.occ);
        if (i >= 0) trip.push_back({i, j, cplx(factor * scratch.amp, 0.0)});
    }
    return from_triplets(basis.dim, std::move(trip), false);
}

SparseOperator b_creator(int exc_mode, const CappedBasis& basis, int N) {
    const int m = basis.num_modes;
    const double nd = static_cast<double>(N);
    std::vector<Triplet> trip;
    Scratch scratch;
    for (std::int64_t j = 0; j < basis.dim; ++j) {
        const int t = basis.total_occ[static_cast<std::size_t>(j)];
        if (t + 1 > N) continue;
        scratch.load(basis.state(j), m);
        scratch.create(exc_mode);
        const double factor = std::sqrt((nd - t) / nd);
        const std::int64_t i = locate(basis, scratch.occ);
        if (i >= 0) trip.push_back({i, j, cplx(factor * scratch.amp, 0.0)});
    }
    return from_triplets(basis.dim, std::move(trip), false);
}

SparseOperator permute_rows_cols(const SparseOperator& A, const std::vector<std::int64_t>& perm) {
    if (static_cast<std::int64_t>(perm.size()) != A.dim) {
        throw ValidationError("permutation size mismatch");
    }
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(A.nnz()));
    for (std::int64_t r = 0; r < A.dim; ++r) {
        for (std::int64_t k = A.row_ptr[static_cast<std::size_t>(r)];
             k < A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k) {
            trip.push_back({perm[static_cast<std::size_t>(r)],
                            perm[static_cast<std::size_t>(A.col[static_cast<std::size_t>(k)])],
                            A.val[static_cast<std::size_t>(k)]});
        }
    }
    // A row relabeling of an exactly Hermitian matrix stays exactly Hermitian.
    return from_triplets(A.dim, std::move(trip), A.hermitian);
}

SparseOperator excitation_hamiltonian(const MomentumLattice& lat, const Potential& pot,
                                      const SectorBasis& sector, const CappedBasis& capped,
                                      const ExcitationMap& map, int N) {
    const SparseOperator h = hamiltonian_sector(lat, pot, sector, N);
    const SparseOperator permuted = permute_rows_cols(h, map.sec_to_cap);
    const double shift = 0.5 * N * pot.at_zero(lat);
    return linear_combination(permuted, 1.0, identity_operator(capped.dim), -shift);
}

ExcitationFamily build_excitation_family(const MomentumLattice& lat, const Potential& pot,
                                         const SectorBasis& sector, const CappedBasis& capped,
                                         const ExcitationMap& map, int N) {
    ExcitationFamily fam;
    fam.Q = quadratic_Q(lat, pot, capped);
    fam.G = excitation_hamiltonian(lat, pot, sector, capped, map, N);
    fam.R_operational = linear_combination(fam.G, 1.0, fam.Q, -1.0);
    return fam;
}

SparseOperator interpolated_G(const ExcitationFamily& family, double s) {
    if (s < 0.0 || s > 1.0) throw ValidationError("interpolation parameter must be in [0,1]");
    if (s == 0.0) return family.Q;
    return linear_combination(family.Q, 1.0, family.R_operational, s);
}

Eigen::VectorXcd to_excitation_vector(const Eigen::VectorXcd& full, const MomentumLattice& lat) {
    if (full.size() != lat.size()) throw ValidationError("excitation vector: size mismatch");
    Eigen::VectorXcd out(lat.size() - 1);
    int k = 0;
    for (int i = 0; i < lat.size(); ++i) {
        if (i != lat.zero_index) out[k++] = full[i];
    }
    return out;
}

Eigen::MatrixXcd excitation_block(const Eigen::MatrixXcd& centered, const MomentumLattice& lat) {
    const int m = lat.size();
    Eigen::MatrixXcd out(m - 1, m - 1);
    int r = 0;
    for (int i = 0; i < m; ++i) {
        if (i == lat.zero_index) continue;
        int c = 0;
        for (int j = 0; j < m; ++j) {
            if (j == lat.zero_index) continue;
            out(r, c++) = centered(i, j);
        }
        ++r;
    }
    return out;
}

}  // namespace bosegas
