#pragma once

#include <map>
#include <string>
#include <vector>

#include "drs/dispersive.hpp"
#include "drs/grid.hpp"
#include "drs/space.hpp"

namespace drs {

struct SlopeRecord {
    std::string quantity;
    double slope = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    double residual_rms = 0.0;
    std::size_t points = 0;
    bool within = false; // |slope - expected| <= tolerance, residual_rms < 0.02, points >= 5
};

struct ScalarRecord {
    std::string quantity;
    double value = 0.0;
    bool holds = true;
    std::string check; // human-readable condition, empty for plain measurements
};

enum class Verdict { Pass, Fail, NoVerdict };
std::string to_string(Verdict v);

struct ExperimentReport {
    std::string name;
    std::vector<SlopeRecord> fitted_slopes;
    std::vector<ScalarRecord> scalars;
    Verdict verdict = Verdict::NoVerdict;
    std::string outcome; // free-form conclusion, e.g. "comparable"
    std::vector<std::string> notes;
    std::map<std::string, std::string> provenance;
    // raw per-N (or per-lambda) rows for the companion CSV
    std::vector<std::string> table_columns;
    std::vector<std::vector<double>> table_rows;

    // Pass iff every slope is within tolerance and every scalar holds.
    void settle();
};

// Fits a log-log slope with the acceptance rules for fitted slopes.
SlopeRecord fit_slope(const std::string& quantity, const std::vector<double>& x, const std::vector<double>& y,
                      double expected, double tolerance);

// ---- Case 1: concentrated spectra near N ----

// fh_N(l) = N^{-1/2} bump(sqrt(N) - l / sqrt(N)) |c(l)| on [N - sqrt N, N + sqrt N].
SpectralProfile case1_family(const SpaceParams& p, int N, std::size_t points = 513);

struct Case1Options {
    std::vector<double> betas{0.1, 0.25, 0.4};
    std::vector<int> Ns{64, 128, 256, 512, 1024, 2048, 4096};
    double epsilon = 0.05;
    std::size_t s_points = 11;
    int xi_panels = 32; // 8-point Gauss-Legendre panels on [-1, 1]
};

// |T f_N(s)| with t(s) = s / (a N^{a-1}), computed in xi = sqrt(N) - l/sqrt(N);
// includes the calibrated inversion constant. Returns one value per s.
std::vector<double> case1_linearized(const SpaceParams& p, const PhaseKind& kind, int N,
                                     const std::vector<double>& s_points, int xi_panels = 32);

// kind must be a fractional variant (frac or frac-shifted).
ExperimentReport case1_run(const SpaceParams& p, const PhaseKind& kind, const Case1Options& opt = {});

// ---- Case 2: dilated Euclidean bumps transferred to the space ----

// Bump supported in (1, 2) with maximum 1.
double shifted_bump(double x);

// fh_N(l) = l^{n-1} bump(l / N) |c(l)|^2 on [N, 2N].
SpectralProfile case2_family(const SpaceParams& p, int N, std::size_t points = 1025);

struct Case2Options {
    double beta = 0.5;
    std::vector<int> Ns{8, 12, 16, 24, 32, 48, 64};
    double epsilon = 0.25;
    std::size_t s_points = 17;
};

// 2n / (n - 2 beta).
double sobolev_embedding_exponent(int n, double beta);

ExperimentReport case2_run(const SpaceParams& p, const Case2Options& opt = {});

// ---- Comparable oscillation ----

struct TransferenceOptions {
    double Lambda = 1.0;
    double lambda_max = 1e4;
    std::size_t points = 2001;
};

// Verdict carries the measurement's validity; the conclusion is in outcome
// ("comparable" / "not comparable"). If expect is non-empty the verdict
// requires outcome == expect.
ExperimentReport transference_check(const SpaceParams& p, const PhaseKind& kind1, const PhaseKind& kind2,
                                    const TransferenceOptions& opt = {}, const std::string& expect = "");

} // namespace drs
