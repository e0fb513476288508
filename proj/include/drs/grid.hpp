#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace drs {

struct UniformGrid {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    double step() const { return (hi - lo) / static_cast<double>(count - 1); }
    double at(std::size_t i) const {
        return i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    std::vector<double> points() const;
};

// Throws ValidationError unless lo < hi and count >= 2.
UniformGrid make_grid(double lo, double hi, std::size_t count);

struct Interval {
    double lo;
    double hi;
};

// Sampled radial function s -> f(s).
struct RadialProfile {
    UniformGrid grid;
    std::vector<std::complex<double>> values;
};

// Sampled spectrum lambda -> fh(lambda). Values are taken to vanish outside
// the grid, and outside support_hint when one is present.
struct SpectralProfile {
    UniformGrid grid;
    std::vector<std::complex<double>> values;
    std::optional<Interval> support_hint;
};

// Composite Simpson weights for a uniform grid; an even number of intervals
// is Simpson throughout, an odd number ends with a 3/8 panel.
std::vector<double> simpson_weights(const UniformGrid& g);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace drs
