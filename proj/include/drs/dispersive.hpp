#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "drs/grid.hpp"
#include "drs/space.hpp"
#include "drs/spherical.hpp"

namespace drs {

enum class PhaseVariant { Frac, FracShifted, Boussinesq, BoussinesqShifted, Beam, BeamShifted, Generic };

// Phase function of a dispersive multiplier with its small/large frequency
// exponents (delta_low, delta_high).
struct PhaseKind {
    PhaseVariant variant = PhaseVariant::FracShifted;
    double a = 2.0; // order of the fractional variants
    double delta_low = 2.0;
    double delta_high = 2.0;
    // Generic only. Missing derivatives fall back to finite differences.
    std::function<double(double)> fn;
    std::function<double(double)> fn_d1;
    std::function<double(double)> fn_d2;

    static PhaseKind frac(double a);
    static PhaseKind frac_shifted(double a);
    static PhaseKind boussinesq();
    static PhaseKind boussinesq_shifted();
    static PhaseKind beam();
    static PhaseKind beam_shifted();
    static PhaseKind generic(double delta_low, double delta_high, std::function<double(double)> fn,
                             std::function<double(double)> d1 = {}, std::function<double(double)> d2 = {});

    bool shifted() const;
    // Selector string as accepted by parse_phase_kind.
    std::string name() const;
};

// Accepts frac:a, frac-shifted:a, boussinesq, boussinesq-shifted, beam,
// beam-shifted.
PhaseKind parse_phase_kind(const std::string& spec);

double phase(const PhaseKind& kind, const SpaceParams& p, double lambda);
long double phase_ld(const PhaseKind& kind, const SpaceParams& p, long double lambda);
// (psi', psi'') at lambda > 0.
std::pair<double, double> phase_derivs(const PhaseKind& kind, const SpaceParams& p, double lambda);

struct PhaseAsymptoticsReport {
    // ratio ranges on the sampled grids
    double low_d1_sup = 0.0;  // |psi'| / l^{dl-1} on (1e-3, 1)
    double high_d1_sup = 0.0; // |psi'| / l^{dh-1} on [1, 1e4]
    double high_d2_inf = 0.0; // |psi''| / l^{dh-2} on [1, 1e4]
    double high_d2_sup = 0.0;
    // log-log slopes of the ratios on the extreme decades
    double low_d1_slope = 0.0;
    double high_d1_slope = 0.0;
    double high_d2_slope = 0.0;
    bool pass = false;
};

PhaseAsymptoticsReport verify_phase_asymptotics(const PhaseKind& kind, const SpaceParams& p);

// S_t f(s) = C int phi_l(s) e^{i t psi(l)} fh(l) |c(l)|^{-2} dl; needs the
// calibrated constant. Throws ResolutionError if lambda-step * t * max psi'
// exceeds pi/8.
RadialProfile propagate(const SpaceParams& p, const SpectralProfile& fh, const PhaseKind& kind, double t,
                        const UniformGrid& s_grid, const PhiConfig& cfg = {});

struct MaximalResult {
    RadialProfile sup;             // max over the t grid of |S_t f|
    std::vector<double> argmax_t;  // maximizing t per s sample
    double refinement_increment = 0.0; // max increase after inserting t midpoints
};

// 512 log-spaced times in (1e-4, 1), densified until consecutive gaps
// satisfy dt * psi(lambda_max) <= pi/4.
std::vector<double> default_t_grid(const SpaceParams& p, const PhaseKind& kind, double lambda_max);

// t_grid must increase inside (0, 1]. Throws ResolutionError if some gap of t_grid violates dt * psi(lambda_max)
// <= pi/4. When refine is set the midpoint-refined grid is also evaluated.
MaximalResult maximal_function(const SpaceParams& p, const SpectralProfile& fh, const PhaseKind& kind,
                               const std::vector<double>& t_grid, const UniformGrid& s_grid, bool refine = true,
                               const PhiConfig& cfg = {});

// Smooth cutoff equal to 1 on [-1, 1] and 0 outside (-2, 2).
double lp_low_cutoff(double xi);
// Dyadic bump lp_low_cutoff(xi) - lp_low_cutoff(2 xi), supported in 1/2 < |xi| < 2.
double lp_bump(double xi);

// exp(1 - 1/(1 - x^2)) on (-1, 1), zero outside; maximum 1 at x = 0.
double unit_bump(double x);

// (fh * low cutoff, fh * (1 - low cutoff)) with low + high == fh exactly.
std::pair<SpectralProfile, SpectralProfile> littlewood_paley_split(const SpectralProfile& fh);

} // namespace drs
