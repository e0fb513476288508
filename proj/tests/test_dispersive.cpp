#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

#include "drs/dispersive.hpp"
#include "drs/errors.hpp"
#include "drs/fit.hpp"
#include "drs/transform.hpp"

using namespace drs;

namespace {

using cd = std::complex<double>;

struct Tabulated {
    const char* name;
    double d1, d2;
    std::function<long double(long double, long double)> psi; // (lambda, Q^2/4)
};

const std::vector<Tabulated>& table() {
    static const std::vector<Tabulated> t = {
        {"frac:1.5", 2, 1.5, [](long double l, long double g) { return std::pow(l * l + g, 0.75L); }},
        {"frac-shifted:1.5", 1.5, 1.5, [](long double l, long double) { return std::pow(l, 1.5L); }},
        {"frac:3", 2, 3, [](long double l, long double g) { return std::pow(l * l + g, 1.5L); }},
        {"boussinesq", 2, 2, [](long double l, long double g) { return std::sqrt(l * l + g) * std::sqrt(l * l + g + 1); }},
        {"boussinesq-shifted", 1, 2, [](long double l, long double) { return l * std::sqrt(l * l + 1); }},
        {"beam", 2, 2, [](long double l, long double g) { return std::sqrt(1 + (l * l + g) * (l * l + g)); }},
        {"beam-shifted", 4, 2, [](long double l, long double) { return std::sqrt(l * l * l * l + 1); }},
    };
    return t;
}

// e^{-s^2} evolved under e^{it(l^2 + shift)} on real hyperbolic 3-space:
// sinh(s/2) f(s) is an odd pair of Gaussians on the line, each of which
// evolves in closed form.
cd gauss_evolved_h3(double s, double t, double shift) {
    const cd w = 1.0 - cd(0.0, 4.0 * t);
    auto G = [&](double x) { return std::exp(-x * x / w) / std::sqrt(w); };
    return std::polar(1.0, t * shift) * std::exp(1.0 / 16) * (G(s - 0.25) - G(s + 0.25)) / (2 * std::sinh(s / 2));
}

} // namespace

TEST_CASE("phases match the tabulated formulas") {
    for (auto [mv, mz] : {std::pair{2, 1}, std::pair{4, 3}}) {
        const SpaceParams p = new_space(mv, mz);
        const long double g = p.spectral_gap();
        for (const auto& row : table()) {
            const PhaseKind k = parse_phase_kind(row.name);
            CHECK(k.name() == row.name);
            CHECK(k.delta_low == row.d1);
            CHECK(k.delta_high == row.d2);
            for (double l : {0.01, 0.5, 3.0, 250.0}) {
                CAPTURE(row.name);
                CAPTURE(l);
                CHECK(phase(k, p, l) == doctest::Approx(static_cast<double>(row.psi(l, g))).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("closed-form derivatives against finite differences") {
    const SpaceParams p = new_space(2, 1);
    const long double g = p.spectral_gap();
    for (const auto& row : table()) {
        const PhaseKind k = parse_phase_kind(row.name);
        for (long double l : {0.05L, 0.9L, 7.0L, 400.0L}) {
            const long double h = 1e-4L * l;
            const long double d1 = (row.psi(l + h, g) - row.psi(l - h, g)) / (2 * h);
            const long double d2 = (row.psi(l + h, g) - 2 * row.psi(l, g) + row.psi(l - h, g)) / (h * h);
            const auto [a1, a2] = phase_derivs(k, p, static_cast<double>(l));
            CAPTURE(row.name);
            CAPTURE(static_cast<double>(l));
            CHECK(a1 == doctest::Approx(static_cast<double>(d1)).epsilon(1e-7));
            CHECK(a2 == doctest::Approx(static_cast<double>(d2)).epsilon(1e-5));
        }
    }
}

TEST_CASE("selector parsing") {
    CHECK(parse_phase_kind("frac:2.5").a == 2.5);
    CHECK(parse_phase_kind("frac-shifted:2").shifted());
    CHECK_FALSE(parse_phase_kind("beam").shifted());
    CHECK_THROWS_AS(parse_phase_kind("frac"), ValidationError);
    CHECK_THROWS_AS(parse_phase_kind("frac:x"), ValidationError);
    CHECK_THROWS_AS(parse_phase_kind("beam:2"), ValidationError);
    CHECK_THROWS_AS(parse_phase_kind("kdv"), ValidationError);
}

TEST_CASE("asymptotic exponents") {
    for (auto [mv, mz] : {std::pair{2, 1}, std::pair{8, 1}}) {
        const SpaceParams p = new_space(mv, mz);
        for (const char* name : {"frac:1.5", "frac-shifted:1.5", "frac:2", "frac-shifted:2", "boussinesq",
                                 "boussinesq-shifted", "beam", "beam-shifted"}) {
            CAPTURE(name);
            CHECK(verify_phase_asymptotics(parse_phase_kind(name), p).pass);
        }
        // lambda^3 declared with the wrong high-frequency exponent
        const PhaseKind wrong = PhaseKind::generic(3.0, 2.0, [](double l) { return l * l * l; });
        CHECK_FALSE(verify_phase_asymptotics(wrong, p).pass);
        const PhaseKind right = PhaseKind::generic(3.0, 3.0, [](double l) { return l * l * l; });
        CHECK(verify_phase_asymptotics(right, p).pass);
    }
}

TEST_CASE("propagation of a Gaussian on real hyperbolic 3-space") {
    const SpaceParams p = new_space(2, 0);
    calibrate_inversion_constant(p);
    const RadialProfile f = sample_radial([](double s) { return std::exp(-s * s); }, make_grid(0.0, 12.0, 4097));
    const SpectralProfile fh = sft_forward(p, f, make_grid(0.0, 24.0, 1201));
    const UniformGrid og = make_grid(0.2, 4.0, 39);
    for (const char* name : {"frac:2", "frac-shifted:2"}) {
        const PhaseKind k = parse_phase_kind(name);
        const double shift = k.shifted() ? 0.0 : 0.25;
        for (double t : {0.0, 0.05, 0.3}) {
            const RadialProfile u = propagate(p, fh, k, t, og);
            for (std::size_t j = 0; j < og.count; ++j) {
                CAPTURE(name);
                CAPTURE(t);
                CAPTURE(og.at(j));
                CHECK(std::abs(u.values[j] - gauss_evolved_h3(og.at(j), t, shift)) < 1e-8);
            }
        }
    }
}

TEST_CASE("propagation at t = 0 is the inverse transform") {
    const SpaceParams p = new_space(2, 1);
    calibrate_inversion_constant(p);
    const RadialProfile f = sample_radial([](double s) { return std::exp(-2 * s * s); }, make_grid(0.0, 12.0, 2049));
    const SpectralProfile fh = sft_forward(p, f, make_grid(0.0, 20.0, 641));
    const UniformGrid og = make_grid(0.0, 3.0, 13);
    const RadialProfile u = propagate(p, fh, PhaseKind::beam(), 0.0, og);
    const RadialProfile v = sft_inverse(p, fh, og);
    for (std::size_t j = 0; j < og.count; ++j)
        CHECK(u.values[j] == v.values[j]);
    CHECK_THROWS_AS(propagate(p, fh, PhaseKind::beam(), 5.0, og), ResolutionError);
}

TEST_CASE("maximal function against the closed-form evolution") {
    const SpaceParams p = new_space(2, 0);
    calibrate_inversion_constant(p);
    const RadialProfile f = sample_radial([](double s) { return std::exp(-s * s); }, make_grid(0.0, 12.0, 4097));
    const SpectralProfile fh = sft_forward(p, f, make_grid(0.0, 12.0, 801));
    const UniformGrid og = make_grid(0.5, 3.0, 11);
    std::vector<double> ts;
    for (int i = 1; i <= 400; ++i)
        ts.push_back(i / 400.0);
    const PhaseKind k = PhaseKind::frac_shifted(2.0);
    const MaximalResult m = maximal_function(p, fh, k, ts, og);
    for (std::size_t j = 0; j < og.count; ++j) {
        double best = 0.0;
        for (double t : ts)
            best = std::max(best, std::abs(gauss_evolved_h3(og.at(j), t, 0.0)));
        CHECK(m.sup.values[j].real() == doctest::Approx(best).epsilon(1e-7));
        CHECK(std::abs(gauss_evolved_h3(og.at(j), m.argmax_t[j], 0.0)) == doctest::Approx(best).epsilon(1e-7));
    }
    CHECK(m.refinement_increment >= 0.0);
    CHECK(m.refinement_increment < 1e-3);

    CHECK_THROWS_AS(maximal_function(p, fh, k, {0.5, 0.2}, og), ValidationError);
    CHECK_THROWS_AS(maximal_function(p, fh, k, {0.0, 0.5}, og), ValidationError);
    CHECK_THROWS_AS(maximal_function(p, fh, k, {0.1, 0.9}, og), ResolutionError);
}

TEST_CASE("default time grid respects the phase increment") {
    const SpaceParams p = new_space(2, 1);
    const PhaseKind k = PhaseKind::frac(2.0);
    const auto ts = default_t_grid(p, k, 30.0);
    CHECK(ts.front() == doctest::Approx(1e-4));
    CHECK(ts.back() == 1.0);
    const double psi_max = phase(k, p, 30.0);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        CHECK(ts[i] > ts[i - 1]);
        CHECK((ts[i] - ts[i - 1]) * psi_max <= std::numbers::pi / 4 * (1 + 1e-12));
    }
}

TEST_CASE("Littlewood-Paley pieces") {
    CHECK(unit_bump(0.0) == 1.0);
    CHECK(unit_bump(1.0) == 0.0);
    CHECK(unit_bump(-1.5) == 0.0);
    for (double x : {0.0, 0.5, 1.0, -1.0})
        CHECK(lp_low_cutoff(x) == 1.0);
    for (double x : {2.0, -2.0, 7.0})
        CHECK(lp_low_cutoff(x) == 0.0);
    CHECK(lp_bump(0.5) == 0.0);
    CHECK(lp_bump(2.0) == 0.0);
    // the dyadic bumps telescope: chi(x) + sum_{k>=1} bump(x / 2^k) = 1 for |x| < 2^{K}
    for (double x : {0.3, 1.7, 5.0, 77.0, 900.0}) {
        double sum = lp_low_cutoff(x);
        for (int k = 1; k <= 12; ++k)
            sum += lp_bump(x / std::ldexp(1.0, k));
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("Littlewood-Paley split is exact") {
    SpectralProfile fh;
    fh.grid = make_grid(0.0, 5.0, 1001);
    for (std::size_t i = 0; i < fh.grid.count; ++i)
        fh.values.push_back({std::cos(fh.grid.at(i)), std::sin(3 * fh.grid.at(i))});
    const auto [lo, hi] = littlewood_paley_split(fh);
    for (std::size_t i = 0; i < fh.grid.count; ++i) {
        CHECK(lo.values[i] + hi.values[i] == fh.values[i]);
        const double l = fh.grid.at(i);
        if (l <= 1.0)
            CHECK(hi.values[i] == cd(0.0));
        if (l >= 2.0)
            CHECK(lo.values[i] == cd(0.0));
    }
}
