#pragma once

#include <vector>

namespace drs {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t points = 0;
};

// Least squares y = slope * x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Least squares in log-log coordinates; x and y must be positive.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// n points log-spaced on [lo, hi], endpoints included.
std::vector<double> log_space(double lo, double hi, std::size_t n);

} // namespace drs
