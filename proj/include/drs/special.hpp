#pragma once

#include <complex>

#include "drs/space.hpp"

namespace drs {

using CValue = std::complex<double>;

// Principal-branch log Gamma (Lanczos, g = 7, with reflection for Re z < 0.5).
// Throws PoleError at non-positive integers.
std::complex<double> ln_gamma_complex(std::complex<double> z);

// Bessel function of the first kind J_mu(x), mu >= 0, x >= 0.
double bessel_j(double mu, double x);

// Normalised Bessel function 2^mu sqrt(pi) Gamma(mu+1/2) J_mu(x) / x^mu,
// continuous at x = 0 with value sqrt(pi) Gamma(mu+1/2) / Gamma(mu+1).
double script_j(double mu, double x);
double script_j_at_zero(double mu);

// Harish-Chandra c-function. Throws PoleError at lambda = 0.
CValue c_function(const SpaceParams& p, double lambda);

// |c(lambda)|^{-2}, even in lambda, with the lambda^2 limit near 0.
double plancherel_density(const SpaceParams& p, double lambda);

// lim_{lambda -> 0} |c(lambda)|^{-2} / lambda^2, extracted numerically and
// cached per space.
double plancherel_small_lambda_limit(const SpaceParams& p);

} // namespace drs
