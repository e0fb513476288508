#pragma once

#include <functional>

#include "drs/grid.hpp"
#include "drs/space.hpp"
#include "drs/spherical.hpp"

namespace drs {

RadialProfile sample_radial(const std::function<double(double)>& f, const UniformGrid& grid);

// fh(lambda) = int f(s) phi_lambda(s) A(s) ds by composite Simpson on the
// profile's grid. Throws ResolutionError if s-step * lambda_max > pi/4 and
// DomainError if the profile's mass at S_max exceeds 1e-10 of its norm.
SpectralProfile sft_forward(const SpaceParams& p, const RadialProfile& f, const UniformGrid& lambda_grid,
                            const PhiConfig& cfg = {});

// f(s) = C int fh(lambda) phi_lambda(s) |c(lambda)|^{-2} dlambda with the
// calibrated C. Throws CalibrationError if params have not been calibrated
// and ResolutionError if lambda-step * s_max > pi/4.
RadialProfile sft_inverse(const SpaceParams& p, const SpectralProfile& fh, const UniformGrid& s_grid,
                          const PhiConfig& cfg = {});

// Same quadrature with an explicit constant (no calibration needed).
RadialProfile sft_inverse_with_constant(const SpaceParams& p, const SpectralProfile& fh,
                                        const UniformGrid& s_grid, double constant, const PhiConfig& cfg = {});

struct CalibrationReport {
    double constant = 0.0;
    double per_profile[3] = {0.0, 0.0, 0.0};
    double spread = 0.0; // max/min - 1 over the three profiles
};

// Fits C in ||f||^2_{L^2(A ds)} = C ||fh||^2_{L^2(|c|^{-2} dlambda)} on
// e^{-s^2}, e^{-2 s^2} and s^2 e^{-s^2}; cached per space. Throws
// CalibrationError if the three disagree by more than 1e-3.
double calibrate_inversion_constant(const SpaceParams& p);
CalibrationReport calibration_report(const SpaceParams& p);
bool is_calibrated(const SpaceParams& p);
void reset_calibration_cache();

// Grids used by the calibration.
UniformGrid calibration_s_grid();
UniformGrid calibration_lambda_grid();

// L^2(A ds) norm of a radial profile.
double radial_l2_norm(const SpaceParams& p, const RadialProfile& f);

// (int (lambda^2 + Q^2/4)^beta |fh|^2 |c|^{-2} dlambda)^{1/2}.
double sobolev_norm(const SpaceParams& p, const SpectralProfile& fh, double beta);

// Fg(lambda) = |c(lambda)|^{-2} fh(lambda) / lambda^{n-1}. Requires a
// support hint with positive lower end (DomainError otherwise).
SpectralProfile euclidean_correspondence(const SpaceParams& p, const SpectralProfile& fh);
SpectralProfile euclidean_correspondence_inverse(const SpaceParams& p, const SpectralProfile& Fg);

// (int (1 + lambda^2)^beta |Fg|^2 lambda^{n-1} dlambda)^{1/2}: the radial
// H^beta(R^n) norm up to the sphere-area factor.
double euclidean_sobolev_norm(int n, const SpectralProfile& Fg, double beta);

struct SobolevComparison {
    double norm_low = 0.0;  // ||f||_{beta1}
    double norm_high = 0.0; // ||f||_{beta2}
    double factor = 1.0;    // c^{-(beta2-beta1)}
    double ratio = 0.0;     // norm_low / norm_high
    bool holds = true;
};

// Checks ||f||_{beta1} <= c^{-(beta2-beta1)} ||f||_{beta2} for spectra
// vanishing on [0, c]. Throws DomainError on a support violation.
SobolevComparison sobolev_comparison_check(const SpaceParams& p, const SpectralProfile& fh, double c,
                                           double beta1, double beta2);

} // namespace drs
