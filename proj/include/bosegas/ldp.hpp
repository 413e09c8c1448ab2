#pragma once

#include <string>
#include <vector>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/model.hpp"
#include "bosegas/operators.hpp"
#include "bosegas/solver.hpp"

namespace bosegas {

// Scaled log-moment generating function on a lambda grid:
//   Lambda_N(lambda) = ln <psi, e^{lambda dGamma(centered O)} psi> / N.
// The exponent carries the total (unnormalized) observable sum; the 1/N
// lives outside the logarithm. Reports carry this convention note.
struct ScgfCurve {
    std::vector<double> lambda;
    std::vector<double> value;
    double min_slope_increase = 0.0;  // discrete convexity margin (>= 0 up to round-off)
    bool weakly_monotone = true;
};

ScgfCurve scgf(const SparseOperator& d_gamma, const Eigen::VectorXcd& psi,
               const std::vector<double>& lambda_grid, int N, const SolverOptions& opts);

// Scaled cumulants of the total sum S = dGamma(centered O): kappa_j(S)/N.
struct Cumulants {
    double k1 = 0.0;
    double k2 = 0.0;  // Var(S)/N
    double k3 = 0.0;
    double k4 = 0.0;
};

Cumulants cumulants(const SparseOperator& d_gamma, const Eigen::VectorXcd& psi, int N);

// Exact tails of O_N = S/N from the dense spectral measure.
struct TailTable {
    std::vector<double> x;
    std::vector<double> p_greater;       // P[O_N > x]
    std::vector<double> p_geq;           // P[O_N >= x]
    std::vector<double> empirical_rate;  // -ln P[O_N >= x] / N, +inf when P = 0
};

TailTable tail_probabilities(const SpectralMeasure& measure, int N,
                             const std::vector<double>& x_grid);

// Kernel-polynomial fallback beyond the dense limit; accurate only to the
// KPM resolution, so Chernoff margins and atom samples are not derived
// from it.
TailTable tail_probabilities_kpm(const KpmCdf& cdf, int N, const std::vector<double>& x_grid);

double clt_distance_kpm(const KpmCdf& cdf, int N, double f_norm_sq);

// Grid Legendre transform sup_lambda (lambda x - Lambda(lambda)); the grid
// sup is a lower bound to the true sup. boundary_hits counts x values whose
// maximizer sits on the last grid lambda.
struct LegendreResult {
    std::vector<double> x;
    std::vector<double> value;
    int boundary_hits = 0;
};

LegendreResult legendre(const ScgfCurve& curve, const std::vector<double>& x_grid);

// Finite-N Chernoff margins: empirical_rate(x) - Lambda*_N(x) must be
// >= -1e-10 wherever the tail is nonzero. Violations throw
// IdentityAssertionError (they indicate a solver or measure bug).
struct ChernoffRow {
    double x = 0.0;
    double margin = 0.0;
    bool vacuous = false;  // P[O_N >= x] = 0
};

std::vector<ChernoffRow> chernoff_check(const ScgfCurve& curve, const TailTable& tails,
                                        const LegendreResult& rate);

// Kolmogorov distance between the law of sqrt(N) O_N and a centered
// Gaussian with variance f_norm_sq (degenerate comparison when 0).
double clt_distance(const SpectralMeasure& measure, int N, double f_norm_sq);

// One spectral atom of the total sum S with its closed upper tail.
struct TailAtom {
    double position = 0.0;  // in S units
    double p_geq = 0.0;     // P[S >= position]
};

// Everything the paper-facing convergence summary needs, per particle number.
struct LdpSlice {
    int n_particles = 0;
    double ground_energy = 0.0;
    double gap = 0.0;
    double var_over_n = 0.0;
    ScgfCurve curve;
    Cumulants cum;
    TailTable tails;
    LegendreResult rate;
    std::vector<ChernoffRow> chernoff;
    std::vector<TailAtom> atoms;   // clustered spectral atoms (ascending)
    double clt_dist_active = 0.0;  // against the active f convention
    double clt_dist_alt = 0.0;
    bool kpm_fallback = false;     // dense path overflowed; tails are smoothed
};

// Degenerate eigenvalues split only by round-off are merged before tail
// rates are read off atom by atom.
std::vector<TailAtom> clustered_tail_atoms(const SpectralMeasure& measure);

LdpSlice ldp_slice(const MomentumLattice& lat, const Potential& pot, const Observable& obs,
                   int N, const std::vector<double>& lambda_grid,
                   const std::vector<double>& x_grid, double f_norm_sq, double f_alt_norm_sq,
                   const SolverOptions& opts);

struct RateExtrapolationRow {
    double x = 0.0;
    double rate_extrapolated = 0.0;  // Legendre rate, affine fit in 1/N
    double leading_term = 0.0;       // x^2 / (2 ||f||^2)
    double ratio = 0.0;
    double residual = 0.0;           // extrapolated - leading
};

// Pooled sample of the measured tail rate at a spectral atom, after the
// Bahadur-Rao prefactor is removed (lattice form, spacing measured from
// the atoms; tilt point and tilted variance read off the finite-N SCGF):
//   P[S >= a] ~ exp(-N rate) * d / ((1 - e^{-d lam*}) sigma* sqrt(2 pi N)).
struct TailRateSample {
    double x = 0.0;
    int n_particles = 0;
    double rate_raw = 0.0;        // -ln P[S >= a] / N
    double rate_corrected = 0.0;  // prefactor removed
    bool tilt_on_boundary = false;
};

struct SweepResult {
    std::vector<int> n_list;
    std::vector<LdpSlice> slices;
    BogoliubovData bog;

    // Variance convergence and the f-convention selection.
    double var_extrapolated = 0.0;     // affine fit in 1/N
    double var_fit_r_squared = 0.0;
    double var_richardson_last2 = 0.0;
    std::string active_convention;      // "conjugate-g" or "conjugate-g-negated"
    double f_norm_sq_active = 0.0;

    // Rate-function comparison inside the reference window, two routes:
    // (a) tail route: pooled fit rate = alpha x^2/(2||f||^2) + (c0 + c1 x)/N
    //     over the prefactor-corrected atom samples;
    // (b) Legendre route: pointwise 1/N extrapolation of the smooth
    //     Lambda*_N(x), median ratio over the window.
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::vector<TailRateSample> tail_samples;
    double rate_ratio_tail = 0.0;       // alpha of the pooled fit
    int tail_fit_parameters = 0;        // 2 or 3 depending on sample count
    std::vector<RateExtrapolationRow> rate_rows;
    double rate_ratio_legendre = 0.0;   // median over the window
    double residual_exponent = 0.0;     // fitted x-exponent of |residual|

    std::vector<double> clt_distances;  // per N, active convention
};

// Reference window for the rate comparison unless overridden:
//   [max(0.35 f^2/||O||, sqrt(3 f^2 / N_max)), 0.7 f^2/||O||].
// The lower edge keeps N Lambda*(x) >= 1.5 at the largest N so tails
// genuinely decay inside the window.
std::pair<double, double> default_rate_window(double f_norm_sq, double op_norm, int n_max);

SweepResult n_sweep(const MomentumLattice& lat, const Potential& pot, const Observable& obs,
                    const std::vector<int>& n_list, const std::vector<double>& lambda_grid,
                    const std::vector<double>& x_grid, const SolverOptions& opts,
                    double window_lo = 0.0, double window_hi = 0.0);

}  // namespace bosegas
