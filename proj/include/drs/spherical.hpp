#pragma once

#include <complex>
#include <string>
#include <vector>

#include "drs/grid.hpp"
#include "drs/space.hpp"

namespace drs {

struct BesselSeriesEval {
    double value = 0.0;
    int truncation_order = 0;
    double error_bound = 0.0;
};

struct HcSeriesEval {
    std::complex<double> value;
    int mu_max = 0;
    std::vector<std::complex<double>> gamma_coeffs;
    // |last retained term| / |partial sum|; above 1e-12 the series is flagged.
    double tail_ratio = 0.0;
    bool converged = true;
};

enum class PhiMethod { Bessel, Hc, Ode };
std::string to_string(PhiMethod m);

struct PhiResult {
    double value = 0.0;
    PhiMethod method = PhiMethod::Ode;
};

// Regime boundaries and truncation defaults for the dispatcher.
struct PhiConfig {
    double bessel_max_s = 0.75;
    double hc_min_s = 2.0;
    double hc_min_lambda = 1.0;
    double bessel_radius = 2.0; // R_0
    int bessel_order = 12;
    int hc_terms = 40;
    double tolerance = 1e-12;
};

// Small-s expansion in normalised Bessel functions with coefficients a_l(s)
// from the transport recursion. Throws DomainError for s outside [0, R_0].
BesselSeriesEval phi_bessel(const SpaceParams& p, double lambda, double s, int M, double R0 = 2.0);

// Same, with M raised from cfg.bessel_order until the last term is below
// cfg.tolerance relative to the sum.
BesselSeriesEval phi_bessel_auto(const SpaceParams& p, double lambda, double s,
                                 const PhiConfig& cfg = {});

// a_l(s) for l = 0..L. Exposed for tests and diagnostics.
std::vector<double> bessel_series_coefficients(const SpaceParams& p, double s, int L);

// Expansion of the radial potential in powers of e^{-s}:
// (1/4)(A'/A)^2 + (1/2)(A'/A)' - Q^2/4 = sum_{k>=1} omega_k e^{-ks}.
// Returns omega_0..omega_K with omega_0 = 0.
std::vector<double> hc_potential_coefficients(const SpaceParams& p, int K);

// Gamma_0..Gamma_{mu_max} from (mu^2 - 2 i mu lambda) Gamma_mu = sum_{j<mu} omega_{mu-j} Gamma_j.
std::vector<std::complex<double>> gamma_coeffs(const SpaceParams& p, double lambda, int mu_max);

HcSeriesEval phi_hc(const SpaceParams& p, double lambda, double s, int mu_max, double s_min = 0.75);
HcSeriesEval phi_hc_auto(const SpaceParams& p, double lambda, double s, const PhiConfig& cfg = {});

// Radial ODE phi'' + (A'/A) phi' + (lambda^2 + Q^2/4) phi = 0 from a series
// start at s = 1e-3, sampled on a uniform grid of [0, s_max] with spacing
// close to `step`. Throws ResolutionError if step * sqrt(lambda^2+Q^2/4) > 0.05.
RadialProfile phi_ode_oracle(const SpaceParams& p, double lambda, double s_max, double step);

struct OdeSample {
    double value;
    double derivative;
};

// ODE solution at sorted points s_points (all >= 0). step = 0 picks a default.
std::vector<OdeSample> phi_ode_at(const SpaceParams& p, double lambda,
                                  const std::vector<double>& s_points, double step = 0.0);

double default_ode_step(const SpaceParams& p, double lambda);

// Regime dispatcher.
PhiResult phi(const SpaceParams& p, double lambda, double s, const PhiConfig& cfg = {});

// phi(lambda_i, s_j) for all pairs, row-major by lambda, using the same
// regimes as phi() but sharing work across the grid.
std::vector<double> phi_table(const SpaceParams& p, const std::vector<double>& lambdas,
                              const std::vector<double>& s_points, const PhiConfig& cfg = {});

} // namespace drs
