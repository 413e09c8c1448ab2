#include "bosegas/stats.hpp"

#include <cmath>

#include "bosegas/errors.hpp"

namespace bosegas {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("linear_fit needs at least two points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    if (sxx == 0.0) throw ValidationError("linear_fit: degenerate abscissae");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    if (x.size() > 2) {
        fit.slope_stderr = std::sqrt(ss_res / (n - 2.0) / sxx);
    }
    return fit;
}

double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y,
                          double floor) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || std::abs(y[i]) <= floor) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    if (lx.size() < 2) return 0.0;
    return linear_fit(lx, ly).slope;
}

}  // namespace bosegas
