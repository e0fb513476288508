#pragma once

#include <cstdint>
#include <vector>

#include "drs/dispersive.hpp"
#include "drs/space.hpp"

namespace drs {

struct WindowIntegralResult {
    int k = 1;
    double value = 0.0;
    double quadrature_error = 0.0;
    std::size_t panels = 0; // 0 when the integration-by-parts bound was used
    bool bounded_only = false;
};

// Shortcut threshold: windows whose integration-by-parts bound times 2^{k/2}
// is below this are reported as value 0 with that bound as the error.
inline constexpr double kNegligibleWindow = 1e-12;

// I_k = 2^{k/2} |int_{1/2}^{2} exp(i (2^k l (s'-s) + d psi(2^k l))) eta(l) dl|
// with eta the dyadic bump. Uniform 4-point Gauss-Legendre panels with phase
// increment <= pi/8 per panel, checked against the doubled panel count.
// Throws ResolutionError if doubling moves the value by more than 1e-6
// relative or the panel count would exceed max_panels.
WindowIntegralResult window_integral(const PhaseKind& kind, const SpaceParams& p, int k, double s, double s_prime,
                                     double d, std::size_t max_panels = std::size_t{1} << 24);

// Upper bound for |int exp(i theta) eta| from repeated integration by parts,
// minimized over 1..6 steps; infinite when theta' vanishes on (1/2, 2) or the
// phase has no Taylor evaluation (generic kinds).
double window_ibp_bound(const PhaseKind& kind, const SpaceParams& p, int k, double s, double s_prime, double d);

// int eta over (1/2, 2); exactly 3/4 for the dyadic bump.
double window_bump_mass();

// Constants of the dyadic-sum argument, measured from phase_derivs:
// c1 = sup_{l>=1} |psi'| / l^{dh-1}, c4 = 2^{dh-1}, c5 = 1/(2 max(c1 c4, 2)),
// c6 = c5^{1/(dh-1)}.
struct ProofConstants {
    double delta_high = 2.0;
    double c1 = 0.0;
    double c4 = 0.0;
    double c5 = 0.0;
    double c6 = 0.0;
};
ProofConstants proof_constants(const PhaseKind& kind, const SpaceParams& p);

struct Triple {
    double s = 0.0;
    double s_prime = 0.0;
    double d = 0.0;
    int regime = 0; // 1: |s-s'| <= d^{1/dh}/c6, 2: up to 1, 3: |s-s'| >= 1
};

int classify_triple(const ProofConstants& c, double gap, double d);

// Deterministic stratified sample over the three regimes with s, s' in
// (2, 7) and d in [1e-3, 1). Triples whose stationary band 2^k reaches
// beyond 2^{K-3} are rejected so that the partial sum to K contains it.
std::vector<Triple> sample_triples(const PhaseKind& kind, const SpaceParams& p, std::size_t count, int K,
                                   std::uint64_t seed);

struct DyadicSumRow {
    Triple triple;
    int K = 0;
    double normalized = 0.0;        // |s-s'|^{1/2} sum_{k<=K} I_k
    double normalized_double = 0.0; // same with 2K
    double rel_change = 0.0;
    double tail_bound = 0.0; // bound on |s-s'|^{1/2} sum_{k>2K} I_k
    double max_quadrature_error = 0.0;
};

struct DyadicSumReport {
    std::vector<DyadicSumRow> rows;
    double max_normalized = 0.0;
    double max_rel_change = 0.0;
    double regime_max[3] = {0.0, 0.0, 0.0};
    bool pass = false; // finite max and every K -> 2K change below 1%
};

DyadicSumReport dyadic_sum_check(const PhaseKind& kind, const SpaceParams& p, const std::vector<Triple>& triples,
                                 int K);

enum class WindowShape { Bump, LowPass };

// Even window: unit_bump on (-1, 1), or the low-pass
// cutoff, each dilated by scale.
struct WindowSpec {
    WindowShape shape = WindowShape::Bump;
    double scale = 1.0;
    double operator()(double x) const;
    double support_radius() const;
};

struct VanDerCorputReport {
    std::vector<double> curvatures;
    std::vector<double> normalized; // M^{1/2} |int exp(i M x^2) w(x) dx|
    double sup_norm = 0.0;          // ||w||_inf
    double variation = 0.0;         // ||w'||_1
    double lemma_bound = 0.0;       // 8 * 2^{-1/2} (||w||_inf + ||w'||_1)
    double spread = 0.0;            // max/min of normalized
    bool pass = false;
};

// Curvatures must be positive. Passes iff every normalized value is below
// the lemma bound and the spread is below 20.
VanDerCorputReport van_der_corput_check(const std::vector<double>& curvatures, const WindowSpec& window);

} // namespace drs
