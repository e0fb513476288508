#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drs/errors.hpp"
#include "drs/spherical.hpp"

using namespace drs;

namespace {

// Real hyperbolic 3-space in the normalisation A(s) = (2 sinh(s/2))^2.
double phi_exact_h3(double l, double s) { return s == 0.0 ? 1.0 : std::sin(l * s) / (2 * l * std::sinh(s / 2)); }

} // namespace

TEST_CASE("all evaluators reproduce the closed form on real hyperbolic 3-space") {
    const SpaceParams p = new_space(2, 0);
    for (double l : {0.5, 2.0, 10.0, 50.0}) {
        for (double s : {0.05, 0.4, 0.75})
            CHECK(phi_bessel_auto(p, l, s).value == doctest::Approx(phi_exact_h3(l, s)).epsilon(1e-10).scale(1e-3));
        for (double s : {2.0, 3.5, 5.0}) {
            const auto hc = phi_hc_auto(p, l, s);
            CHECK(hc.value.real() == doctest::Approx(phi_exact_h3(l, s)).epsilon(1e-10).scale(1e-3));
            CHECK(std::fabs(hc.value.imag()) < 1e-12);
        }
        const auto ode = phi_ode_at(p, l, {0.3, 1.2, 4.0});
        CHECK(ode[0].value == doctest::Approx(phi_exact_h3(l, 0.3)).epsilon(1e-9).scale(1e-3));
        CHECK(ode[1].value == doctest::Approx(phi_exact_h3(l, 1.2)).epsilon(1e-9).scale(1e-3));
        CHECK(ode[2].value == doctest::Approx(phi_exact_h3(l, 4.0)).epsilon(1e-9).scale(1e-3));
    }
}

TEST_CASE("the potential of real hyperbolic 3-space vanishes") {
    for (double w : hc_potential_coefficients(new_space(2, 0), 12))
        CHECK(w == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("potential coefficients resum to the potential") {
    for (auto [mv, mz] : {std::pair{2, 1}, std::pair{4, 3}, std::pair{8, 1}}) {
        const SpaceParams p = new_space(mv, mz);
        const auto w = hc_potential_coefficients(p, 80);
        CHECK(w[0] == 0.0);
        for (double s : {2.0, 3.5}) {
            const double h = 1e-4;
            const double g = log_density_derivative(p, s);
            const double dg = (log_density_derivative(p, s + h) - log_density_derivative(p, s - h)) / (2 * h);
            const double V = 0.25 * g * g + 0.5 * dg - p.Q() * p.Q() / 4;
            double sum = 0.0;
            for (std::size_t k = 1; k < w.size(); ++k)
                sum += w[k] * std::exp(-static_cast<double>(k) * s);
            CHECK(sum == doctest::Approx(V).epsilon(1e-7).scale(1e-6));
        }
    }
}

TEST_CASE("series and ODE agree in the overlap of their regimes") {
    for (auto [mv, mz] : {std::pair{2, 1}, std::pair{4, 3}, std::pair{8, 1}}) {
        const SpaceParams p = new_space(mv, mz);
        for (double l : {0.5, 2.0, 10.0}) {
            const auto ode = phi_ode_at(p, l, {0.2, 0.7, 2.5, 4.0});
            CHECK(phi_bessel_auto(p, l, 0.2).value == doctest::Approx(ode[0].value).epsilon(1e-8));
            CHECK(phi_bessel_auto(p, l, 0.7).value == doctest::Approx(ode[1].value).epsilon(1e-8).scale(1e-3));
            CHECK(phi_hc_auto(p, l, 2.5).value.real() == doctest::Approx(ode[2].value).epsilon(1e-8).scale(1e-4));
            CHECK(phi_hc_auto(p, l, 4.0).value.real() == doctest::Approx(ode[3].value).epsilon(1e-8).scale(1e-5));
        }
    }
}

TEST_CASE("normalisation and bound") {
    const SpaceParams p = new_space(4, 3);
    for (double l : {0.0, 0.3, 7.0})
        CHECK(phi(p, l, 0.0).value == doctest::Approx(1.0));
    for (double l : {0.0, 1.0, 25.0})
        for (double s = 0.0; s <= 8.0; s += 0.37)
            CHECK(std::fabs(phi(p, l, s).value) <= 1.0 + 1e-12);
}

TEST_CASE("Bessel series error estimate is honest") {
    const SpaceParams p = new_space(2, 0);
    for (int M : {2, 4, 8}) {
        const auto b = phi_bessel(p, 3.0, 0.6, M);
        CHECK(b.truncation_order == M);
        CHECK(std::fabs(b.value - phi_exact_h3(3.0, 0.6)) <= b.error_bound + 1e-14);
    }
}

TEST_CASE("dispatcher regimes") {
    const SpaceParams p = new_space(2, 1);
    CHECK(phi(p, 2.0, 0.5).method == PhiMethod::Bessel);
    CHECK(phi(p, 2.0, 3.0).method == PhiMethod::Hc);
    CHECK(phi(p, 2.0, 1.3).method == PhiMethod::Ode);
    CHECK(to_string(PhiMethod::Hc) == "hc");
}

TEST_CASE("table matches pointwise evaluation") {
    const SpaceParams p = new_space(8, 1);
    const std::vector<double> ls{0.0, 0.8, 6.0};
    const std::vector<double> ss{0.0, 0.3, 1.1, 2.6, 6.0};
    const auto t = phi_table(p, ls, ss);
    for (std::size_t i = 0; i < ls.size(); ++i)
        for (std::size_t j = 0; j < ss.size(); ++j)
            CHECK(t[i * ss.size() + j] == doctest::Approx(phi(p, ls[i], ss[j]).value).epsilon(1e-9).scale(1e-6));
}

TEST_CASE("errors") {
    const SpaceParams p = new_space(2, 1);
    CHECK_THROWS_AS(phi_bessel(p, 1.0, 2.5, 8), DomainError);
    CHECK_THROWS_AS(phi_ode_oracle(p, 100.0, 2.0, 0.01), ResolutionError);
    const RadialProfile r = phi_ode_oracle(p, 1.0, 2.0, 0.01);
    CHECK(r.values.front().real() == doctest::Approx(1.0));
}
