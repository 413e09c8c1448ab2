#include "bosegas/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bosegas/errors.hpp"
#include "bosegas/parallel.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

namespace {

double normal_cdf(double x, double sigma) {
    return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ScgfCurve scgf(const SparseOperator& d_gamma, const Eigen::VectorXcd& psi,
               const std::vector<double>& lambda_grid, int N, const SolverOptions& opts) {
    if (lambda_grid.empty()) throw ValidationError("scgf: empty lambda grid");
    ScgfCurve curve;
    curve.lambda = lambda_grid;
    curve.value.assign(lambda_grid.size(), 0.0);
    parallel_for_items(static_cast<std::int64_t>(lambda_grid.size()), [&](std::int64_t i) {
        const double lambda = lambda_grid[static_cast<std::size_t>(i)];
        if (lambda == 0.0) {
            curve.value[static_cast<std::size_t>(i)] = 0.0;
            return;
        }
        const Eigen::VectorXcd evolved = expm_multiply(d_gamma, psi, lambda, opts);
        curve.value[static_cast<std::size_t>(i)] =
            std::log(std::real(psi.dot(evolved))) / static_cast<double>(N);
    });

    curve.min_slope_increase = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < curve.lambda.size(); ++i) {
        const double left =
            (curve.value[i] - curve.value[i - 1]) / (curve.lambda[i] - curve.lambda[i - 1]);
        const double right =
            (curve.value[i + 1] - curve.value[i]) / (curve.lambda[i + 1] - curve.lambda[i]);
        curve.min_slope_increase = std::min(curve.min_slope_increase, right - left);
    }
    if (curve.lambda.size() < 3) curve.min_slope_increase = 0.0;
    for (std::size_t i = 1; i < curve.value.size(); ++i) {
        if (curve.value[i] < curve.value[i - 1] - 1e-12) curve.weakly_monotone = false;
    }
    return curve;
}

Cumulants cumulants(const SparseOperator& d_gamma, const Eigen::VectorXcd& psi, int N) {
    const double nd = static_cast<double>(N);
    const Eigen::VectorXcd a_psi = d_gamma.apply(psi);
    const double m1 = std::real(psi.dot(a_psi));
    const Eigen::VectorXcd u1 = a_psi - m1 * psi;
    const Eigen::VectorXcd u2 = d_gamma.apply(u1) - m1 * u1;
    const double m2 = std::real(u1.dot(u1));
    const double m3 = std::real(u1.dot(u2));
    const double m4 = std::real(u2.dot(u2));
    Cumulants c;
    c.k1 = m1 / nd;
    c.k2 = m2 / nd;
    c.k3 = m3 / nd;
    c.k4 = (m4 - 3.0 * m2 * m2) / nd;
    return c;
}

TailTable tail_probabilities(const SpectralMeasure& measure, int N,
                             const std::vector<double>& x_grid) {
    if (x_grid.empty()) throw ValidationError("tail_probabilities: empty x grid");
    TailTable t;
    t.x = x_grid;
    const double nd = static_cast<double>(N);
    for (double x : x_grid) {
        const double pg = measure.tail_greater(nd * x);
        const double pge = measure.tail_geq(nd * x);
        t.p_greater.push_back(pg);
        t.p_geq.push_back(pge);
        t.empirical_rate.push_back(pge > 0.0 ? -std::log(pge) / nd
                                             : std::numeric_limits<double>::infinity());
    }
    return t;
}

TailTable tail_probabilities_kpm(const KpmCdf& cdf, int N, const std::vector<double>& x_grid) {
    if (x_grid.empty()) throw ValidationError("tail_probabilities: empty x grid");
    TailTable t;
    t.x = x_grid;
    const double nd = static_cast<double>(N);
    for (double x : x_grid) {
        const double p = std::clamp(1.0 - cdf.cdf(nd * x), 0.0, 1.0);
        t.p_greater.push_back(p);
        t.p_geq.push_back(p);  // smoothed CDF cannot resolve single atoms
        t.empirical_rate.push_back(p > 0.0 ? -std::log(p) / nd
                                           : std::numeric_limits<double>::infinity());
    }
    return t;
}

double clt_distance_kpm(const KpmCdf& cdf, int N, double f_norm_sq) {
    const double scale = std::sqrt(static_cast<double>(N));
    const double sigma = std::sqrt(std::max(f_norm_sq, 0.0));
    double worst = 0.0;
    const int samples = 2000;
    for (int i = 0; i <= samples; ++i) {
        const double s_value = cdf.lower + (cdf.upper - cdf.lower) * i / samples;
        const double x = s_value / scale;
        const double target =
            sigma > 0.0 ? normal_cdf(x, sigma) : (x >= 0.0 ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(cdf.cdf(s_value) - target));
    }
    return worst;
}

LegendreResult legendre(const ScgfCurve& curve, const std::vector<double>& x_grid) {
    LegendreResult r;
    r.x = x_grid;
    for (double x : x_grid) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t i = 0; i < curve.lambda.size(); ++i) {
            const double v = curve.lambda[i] * x - curve.value[i];
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        if (arg + 1 == curve.lambda.size() && curve.lambda.size() > 1) ++r.boundary_hits;
        r.value.push_back(best);
    }
    return r;
}

std::vector<ChernoffRow> chernoff_check(const ScgfCurve& curve, const TailTable& tails,
                                        const LegendreResult& rate) {
    (void)curve;
    std::vector<ChernoffRow> rows;
    for (std::size_t i = 0; i < tails.x.size(); ++i) {
        ChernoffRow row;
        row.x = tails.x[i];
        row.vacuous = !(tails.p_geq[i] > 0.0);
        row.margin = row.vacuous ? std::numeric_limits<double>::infinity()
                                 : tails.empirical_rate[i] - rate.value[i];
        if (!row.vacuous && row.margin < -1e-10) {
            throw IdentityAssertionError(
                "Chernoff margin violated at x = " + std::to_string(row.x) +
                " (margin = " + std::to_string(row.margin) + "); solver or measure bug");
        }
        rows.push_back(row);
    }
    return rows;
}

double clt_distance(const SpectralMeasure& measure, int N, double f_norm_sq) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    const double sigma = std::sqrt(std::max(f_norm_sq, 0.0));
    double worst = 0.0;
    double cdf = 0.0;
    for (Eigen::Index i = 0; i < measure.points.size(); ++i) {
        const double atom = measure.points[i] * scale;
        const double target_left =
            sigma > 0.0 ? normal_cdf(atom, sigma) : (atom > 0.0 ? 1.0 : 0.0);
        const double target_right =
            sigma > 0.0 ? normal_cdf(atom, sigma) : (atom >= 0.0 ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(cdf - target_left));  // left limits
        cdf += measure.weights[i];
        worst = std::max(worst, std::abs(cdf - target_right));  // right values
    }
    return worst;
}

std::vector<TailAtom> clustered_tail_atoms(const SpectralMeasure& measure) {
    std::vector<TailAtom> atoms;
    if (measure.points.size() == 0) return atoms;
    const double span =
        std::max(measure.points[measure.points.size() - 1] - measure.points[0], 1e-30);
    const double tol = 1e-9 * span;
    // points ascend; cluster, then suffix-sum the closed tails
    std::vector<std::pair<double, double>> clusters;
    for (Eigen::Index i = 0; i < measure.points.size(); ++i) {
        if (measure.weights[i] <= 0.0) continue;
        if (!clusters.empty() && measure.points[i] - clusters.back().first <= tol) {
            clusters.back().second += measure.weights[i];
        } else {
            clusters.emplace_back(measure.points[i], measure.weights[i]);
        }
    }
    // Parity-forbidden lattice positions carry only round-off mass; they are
    // not atoms of the law and would fake tail-rate samples.
    const double weight_floor = 1e-12;
    std::erase_if(clusters, [&](const auto& c) { return c.second <= weight_floor; });
    double suffix = 0.0;
    atoms.resize(clusters.size());
    for (std::size_t i = clusters.size(); i-- > 0;) {
        suffix += clusters[i].second;
        atoms[i] = {clusters[i].first, suffix};
    }
    return atoms;
}

LdpSlice ldp_slice(const MomentumLattice& lat, const Potential& pot, const Observable& obs,
                   int N, const std::vector<double>& lambda_grid,
                   const std::vector<double>& x_grid, double f_norm_sq, double f_alt_norm_sq,
                   const SolverOptions& opts) {
    LdpSlice slice;
    slice.n_particles = N;

    const SectorBasis sector = enumerate_sector(lat.size(), N, 0);
    const SparseOperator h_n = hamiltonian_sector(lat, pot, sector, N);
    const GroundStateResult gs = ground_state(h_n, opts);
    slice.ground_energy = gs.energy;
    slice.gap = gs.gap;

    const SparseOperator d_gamma = one_body_sector(obs.centered, sector);
    slice.curve = scgf(d_gamma, gs.vector, lambda_grid, N, opts);
    slice.cum = cumulants(d_gamma, gs.vector, N);
    slice.var_over_n = slice.cum.k2;

    slice.rate = legendre(slice.curve, x_grid);
    if (sector.dim <= opts.dense_limit) {
        const SpectralMeasure measure = spectral_measure(d_gamma, gs.vector, opts);
        slice.tails = tail_probabilities(measure, N, x_grid);
        slice.chernoff = chernoff_check(slice.curve, slice.tails, slice.rate);
        slice.atoms = clustered_tail_atoms(measure);
        slice.clt_dist_active = clt_distance(measure, N, f_norm_sq);
        slice.clt_dist_alt = clt_distance(measure, N, f_alt_norm_sq);
    } else {
        // beyond the dense limit: smoothed tails only, Chernoff margins and
        // atom-anchored rate samples need exact atoms and are skipped
        slice.kpm_fallback = true;
        const KpmCdf cdf = kpm_spectral_cdf(d_gamma, gs.vector, opts);
        slice.tails = tail_probabilities_kpm(cdf, N, x_grid);
        slice.clt_dist_active = clt_distance_kpm(cdf, N, f_norm_sq);
        slice.clt_dist_alt = clt_distance_kpm(cdf, N, f_alt_norm_sq);
    }
    return slice;
}

std::pair<double, double> default_rate_window(double f_norm_sq, double op_norm, int n_max) {
    const double scale = f_norm_sq / std::max(op_norm, 1e-300);
    const double floor = std::sqrt(3.0 * f_norm_sq / std::max(n_max, 1));
    return {std::max(0.35 * scale, floor), 0.7 * scale};
}

namespace {

// Tilt point (grid argmax of lambda x - Lambda) and tilted per-particle
// variance Lambda''(lambda*) by a second difference on the grid.
struct TiltInfo {
    double lambda_star = 0.0;
    double sigma_sq = 0.0;
    bool boundary = false;
};

TiltInfo tilt_at(const ScgfCurve& curve, double x) {
    TiltInfo info;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < curve.lambda.size(); ++i) {
        const double v = curve.lambda[i] * x - curve.value[i];
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    info.lambda_star = curve.lambda[arg];
    info.boundary = arg + 1 == curve.lambda.size();
    const std::size_t j = std::min(std::max<std::size_t>(arg, 1), curve.lambda.size() - 2);
    const double h = curve.lambda[j + 1] - curve.lambda[j];
    info.sigma_sq =
        (curve.value[j + 1] - 2.0 * curve.value[j] + curve.value[j - 1]) / (h * h);
    return info;
}

}  // namespace

SweepResult n_sweep(const MomentumLattice& lat, const Potential& pot, const Observable& obs,
                    const std::vector<int>& n_list, const std::vector<double>& lambda_grid,
                    const std::vector<double>& x_grid, const SolverOptions& opts,
                    double window_lo, double window_hi) {
    if (n_list.empty()) throw ValidationError("n_sweep: empty N list");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) throw ValidationError("n_sweep: N list must ascend");
    }
    SweepResult sweep;
    sweep.n_list = n_list;
    sweep.bog = bogoliubov_data(pot, obs, lat);

    sweep.slices.resize(n_list.size());
    parallel_for_items(static_cast<std::int64_t>(n_list.size()), [&](std::int64_t i) {
        sweep.slices[static_cast<std::size_t>(i)] =
            ldp_slice(lat, pot, obs, n_list[static_cast<std::size_t>(i)], lambda_grid, x_grid,
                      sweep.bog.f_norm_sq, sweep.bog.f_alt_norm_sq, opts);
    });

    // Variance extrapolation in 1/N.
    std::vector<double> inv_n, var_n;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        inv_n.push_back(1.0 / n_list[i]);
        var_n.push_back(sweep.slices[i].var_over_n);
    }
    if (n_list.size() >= 2) {
        const LinearFit fit = linear_fit(inv_n, var_n);
        sweep.var_extrapolated = fit.intercept;
        sweep.var_fit_r_squared = fit.r_squared;
        const std::size_t last = n_list.size() - 1;
        const double n1 = n_list[last - 1], n2 = n_list[last];
        sweep.var_richardson_last2 = (n2 * var_n[last] - n1 * var_n[last - 1]) / (n2 - n1);
    } else {
        sweep.var_extrapolated = var_n[0];
        sweep.var_richardson_last2 = var_n[0];
    }

    // Convention selection by extrapolated-variance error.
    const double err_active = std::abs(sweep.var_extrapolated - sweep.bog.f_norm_sq);
    const double err_alt = std::abs(sweep.var_extrapolated - sweep.bog.f_alt_norm_sq);
    if (err_alt < err_active) {
        sweep.active_convention = "conjugate-g-negated";
        sweep.f_norm_sq_active = sweep.bog.f_alt_norm_sq;
    } else {
        sweep.active_convention = "conjugate-g";
        sweep.f_norm_sq_active = sweep.bog.f_norm_sq;
    }

    for (const auto& slice : sweep.slices) {
        sweep.clt_distances.push_back(sweep.active_convention == "conjugate-g"
                                          ? slice.clt_dist_active
                                          : slice.clt_dist_alt);
    }

    // Rate-function window and extrapolation.
    auto window = default_rate_window(sweep.f_norm_sq_active, obs.op_norm, n_list.back());
    if (window_hi > window_lo && window_hi > 0.0) window = {window_lo, window_hi};
    sweep.window_lo = window.first;
    sweep.window_hi = window.second;
    const double f2 = sweep.f_norm_sq_active;

    // (a) tail route on spectral atoms with the Bahadur-Rao prefactor removed.
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const LdpSlice& slice = sweep.slices[i];
        const double nd = static_cast<double>(n_list[i]);

        // local lattice spacing of the spectrum near the window
        std::vector<double> gaps;
        for (std::size_t a = 1; a < slice.atoms.size(); ++a) {
            const double x_here = slice.atoms[a].position / nd;
            if (x_here >= 0.5 * sweep.window_lo && x_here <= 1.5 * sweep.window_hi) {
                gaps.push_back(slice.atoms[a].position - slice.atoms[a - 1].position);
            }
        }
        const double spacing = median(gaps);

        for (const TailAtom& atom : slice.atoms) {
            const double x = atom.position / nd;
            if (x < sweep.window_lo || x > sweep.window_hi || atom.p_geq <= 0.0) continue;
            const TiltInfo tilt = tilt_at(slice.curve, x);
            if (tilt.lambda_star <= 0.0 || tilt.sigma_sq <= 0.0) continue;
            TailRateSample sample;
            sample.x = x;
            sample.n_particles = n_list[i];
            sample.rate_raw = -std::log(atom.p_geq) / nd;
            sample.tilt_on_boundary = tilt.boundary;
            const double sigma_star = std::sqrt(tilt.sigma_sq);
            const double prefactor =
                spacing > 0.0
                    ? spacing / ((1.0 - std::exp(-spacing * tilt.lambda_star)) * sigma_star *
                                 std::sqrt(2.0 * M_PI))
                    : 1.0 / (tilt.lambda_star * sigma_star * std::sqrt(2.0 * M_PI));
            sample.rate_corrected =
                sample.rate_raw + (std::log(prefactor) - 0.5 * std::log(nd)) / nd;
            sweep.tail_samples.push_back(sample);
        }
    }
    if (sweep.tail_samples.size() >= 3 && n_list.size() >= 2) {
        const bool affine = sweep.tail_samples.size() >= 6;
        const int cols = affine ? 3 : 2;
        Eigen::MatrixXd A(sweep.tail_samples.size(), cols);
        Eigen::VectorXd b(sweep.tail_samples.size());
        for (std::size_t i = 0; i < sweep.tail_samples.size(); ++i) {
            const auto& s = sweep.tail_samples[i];
            A(static_cast<Eigen::Index>(i), 0) = s.x * s.x / (2.0 * f2);
            A(static_cast<Eigen::Index>(i), 1) = 1.0 / s.n_particles;
            if (affine) A(static_cast<Eigen::Index>(i), 2) = s.x / s.n_particles;
            b[static_cast<Eigen::Index>(i)] = s.rate_corrected;
        }
        const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
        sweep.rate_ratio_tail = sol[0];
        sweep.tail_fit_parameters = cols;
    }

    // (b) Legendre route: pointwise 1/N extrapolation of the smooth rate.
    std::vector<double> ratio_samples, res_x, res_y;
    for (std::size_t xi = 0; xi < x_grid.size(); ++xi) {
        const double x = x_grid[xi];
        if (x < sweep.window_lo || x > sweep.window_hi) continue;
        RateExtrapolationRow row;
        row.x = x;
        if (n_list.size() >= 2) {
            std::vector<double> inv, rate;
            for (std::size_t i = 0; i < n_list.size(); ++i) {
                inv.push_back(1.0 / n_list[i]);
                rate.push_back(sweep.slices[i].rate.value[xi]);
            }
            row.rate_extrapolated = linear_fit(inv, rate).intercept;
        } else {
            row.rate_extrapolated = sweep.slices[0].rate.value[xi];
        }
        row.leading_term = x * x / (2.0 * f2);
        row.ratio = row.rate_extrapolated / row.leading_term;
        row.residual = row.rate_extrapolated - row.leading_term;
        sweep.rate_rows.push_back(row);
        ratio_samples.push_back(row.ratio);
        res_x.push_back(x);
        res_y.push_back(row.residual);
    }
    sweep.rate_ratio_legendre = median(ratio_samples);
    sweep.residual_exponent = power_law_exponent(res_x, res_y);
    return sweep;
}

}  // namespace bosegas
