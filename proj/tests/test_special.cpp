#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "drs/errors.hpp"
#include "drs/special.hpp"
#include "drs/spherical.hpp"

using namespace drs;

namespace {

using cld = std::complex<long double>;

// Stirling series after shifting the argument by 30, in long double.
cld ln_gamma_oracle(cld z) {
    cld shift = 0.0L;
    for (int k = 0; k < 30; ++k)
        shift += std::log(z + static_cast<long double>(k));
    const cld w = z + 30.0L;
    const cld w2 = w * w;
    const long double half_log_2pi = 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    const cld series = 1.0L / (12.0L * w) - 1.0L / (360.0L * w * w2) + 1.0L / (1260.0L * w * w2 * w2) -
                       1.0L / (1680.0L * w * w2 * w2 * w2);
    return (w - 0.5L) * std::log(w) - w + half_log_2pi + series - shift;
}

double wrap_angle(double x) { return std::remainder(x, 2 * std::numbers::pi); }

// J_mu(x) by its power series in long double (small x only).
double bessel_series(double mu, double x) {
    long double sum = 0.0L;
    const long double h = x / 2.0L;
    for (int k = 0; k < 80; ++k) {
        const long double term = std::pow(-1.0L, k) * std::pow(h, 2 * k + mu) /
                                 (std::tgamma(static_cast<long double>(k + 1)) * std::tgamma(k + mu + 1.0L));
        sum += term;
    }
    return static_cast<double>(sum);
}

// J_m(x) = (1/pi) int_0^pi cos(m t - x sin t) dt; the integrand is smooth and
// periodic so the trapezoid rule converges geometrically.
double bessel_integral(int m, double x) {
    const int N = 4000;
    double sum = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double t = std::numbers::pi * i / N;
        const double w = (i == 0 || i == N) ? 0.5 : 1.0;
        sum += w * std::cos(m * t - x * std::sin(t));
    }
    return sum / N;
}

} // namespace

TEST_CASE("log gamma on the real axis") {
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 30.0, 171.5}) {
        const auto v = ln_gamma_complex({x, 0.0});
        CHECK(v.real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
        CHECK(std::fabs(v.imag()) < 1e-14);
    }
}

TEST_CASE("log gamma in the complex plane") {
    const std::complex<double> pts[] = {{0.5, 3.0}, {2.0, -7.5}, {-3.3, 1.2}, {1.0, 40.0}, {-0.5, -0.25}, {12.0, 0.1}};
    for (auto z : pts) {
        const auto got = ln_gamma_complex(z);
        const cld want = ln_gamma_oracle(cld(z.real(), z.imag()));
        CAPTURE(z);
        CHECK(got.real() == doctest::Approx(static_cast<double>(want.real())).epsilon(1e-12));
        CHECK(std::fabs(wrap_angle(got.imag() - static_cast<double>(want.imag()))) < 1e-10);
    }
}

TEST_CASE("log gamma poles") {
    CHECK_THROWS_AS(ln_gamma_complex({0.0, 0.0}), PoleError);
    CHECK_THROWS_AS(ln_gamma_complex({-1.0, 0.0}), PoleError);
    CHECK_THROWS_AS(ln_gamma_complex({-4.0, 0.0}), PoleError);
    CHECK_NOTHROW(ln_gamma_complex({-4.0, 1e-3}));
}

TEST_CASE("Bessel J at half-integer order matches the elementary forms") {
    for (double x : {0.3, 1.0, 5.0, 20.0, 75.0}) {
        const double pre = std::sqrt(2.0 / (std::numbers::pi * x));
        CHECK(bessel_j(0.5, x) == doctest::Approx(pre * std::sin(x)).epsilon(1e-12).scale(pre));
        CHECK(bessel_j(1.5, x) ==
              doctest::Approx(pre * (std::sin(x) / x - std::cos(x))).epsilon(1e-12).scale(pre));
    }
}

TEST_CASE("Bessel J at integer order against the integral representation") {
    for (int m : {0, 1, 3, 4}) {
        for (double x : {0.5, 2.0, 9.0, 33.0}) {
            CAPTURE(m);
            CAPTURE(x);
            CHECK(bessel_j(m, x) == doctest::Approx(bessel_integral(m, x)).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("Bessel J at non-integer order against the power series") {
    for (double mu : {0.25, 1.3, 2.5, 3.7}) {
        for (double x : {0.01, 0.7, 3.0}) {
            CHECK(bessel_j(mu, x) == doctest::Approx(bessel_series(mu, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalised Bessel function is continuous at the origin") {
    for (double mu : {0.5, 1.0, 4.0}) {
        const double at0 = script_j_at_zero(mu);
        CHECK(at0 == doctest::Approx(std::sqrt(std::numbers::pi) * std::tgamma(mu + 0.5) / std::tgamma(mu + 1.0)));
        CHECK(script_j(mu, 1e-6) == doctest::Approx(at0).epsilon(1e-10));
        CHECK(script_j(mu, 0.0) == doctest::Approx(at0));
    }
}

TEST_CASE("c-function of the m_z = 0 space is 1/(2 i lambda)") {
    // A(s) = (2 sinh(s/2))^2 is real hyperbolic 3-space with curvature -1/4,
    // where phi_lambda(s) = sin(lambda s) / (2 lambda sinh(s/2)).
    const SpaceParams p = new_space(2, 0);
    for (double l : {0.1, 0.5, 2.0, 30.0}) {
        const CValue c = c_function(p, l);
        CHECK(std::abs(c - CValue(0.0, -0.5 / l)) < 1e-12 * std::abs(c));
        CHECK(plancherel_density(p, l) == doctest::Approx(4 * l * l).epsilon(1e-12));
    }
    CHECK(plancherel_small_lambda_limit(p) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("c-function against the large-radius asymptotics of the ODE solution") {
    // phi ~ e^{-Qs/2} (c e^{i l s} + conj), so with u = phi e^{Qs/2} and
    // v = (phi' + Q phi / 2) e^{Qs/2} one gets c e^{i l s} = u/2 - i v / (2 l).
    for (auto [mv, mz] : {std::pair{2, 1}, std::pair{4, 3}}) {
        const SpaceParams p = new_space(mv, mz);
        for (double l : {0.7, 3.0}) {
            const double s = 18.0;
            const auto o = phi_ode_at(p, l, {s});
            const double e = std::exp(p.Q() * s / 2);
            const double u = o[0].value * e;
            const double v = (o[0].derivative + p.Q() * o[0].value / 2) * e;
            const CValue est = CValue(u / 2, -v / (2 * l)) * std::polar(1.0, -l * s);
            const CValue c = c_function(p, l);
            CAPTURE(l);
            CHECK(std::abs(est - c) < 1e-5 * std::abs(c));
        }
    }
}

TEST_CASE("Plancherel density is even and quadratic at the origin") {
    const SpaceParams p = new_space(4, 3);
    CHECK(plancherel_density(p, 2.5) == doctest::Approx(plancherel_density(p, -2.5)));
    const double lim = plancherel_small_lambda_limit(p);
    CHECK(plancherel_density(p, 1e-4) / 1e-8 == doctest::Approx(lim).epsilon(1e-6));
    CHECK(plancherel_density(p, 0.0) == 0.0);
    CHECK_THROWS_AS(c_function(p, 0.0), PoleError);
}
