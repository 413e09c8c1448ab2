#pragma once

#include <vector>

namespace bosegas {

// Ordinary least squares y = intercept + slope * x with the usual
// standard error of the slope (needs >= 3 points for a finite stderr).
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Fitted exponent of |y| ~ C x^alpha via log-log regression; points with
// nonpositive x or |y| below floor are skipped.
double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y,
                          double floor = 1e-300);

}  // namespace bosegas
