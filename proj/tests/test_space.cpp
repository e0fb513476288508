#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drs/errors.hpp"
#include "drs/space.hpp"

using namespace drs;

TEST_CASE("construction rejects invalid structure constants") {
    CHECK_THROWS_AS(new_space(3, 1), ValidationError);
    CHECK_THROWS_AS(new_space(0, 1), ValidationError);
    CHECK_THROWS_AS(new_space(2, -1), ValidationError);
    CHECK_NOTHROW(new_space(2, 0));
}

TEST_CASE("derived dimensions") {
    const SpaceParams p = new_space(2, 1);
    CHECK(p.n() == 4);
    CHECK(p.Q() == 2.0);
    CHECK(p.spectral_gap() == 1.0);

    const SpaceParams q = new_space(8, 1);
    CHECK(q.n() == 10);
    CHECK(q.twice_Q() == 10);
    CHECK(q.spectral_gap() == doctest::Approx(6.25));

    const SpaceParams r = new_space(4, 3);
    CHECK(r.Q() == 5.0);
    CHECK(r.label() == "m_v=4,m_z=3");
}

TEST_CASE("density against the product formula") {
    for (auto [mv, mz] : {std::pair{2, 1}, std::pair{4, 3}, std::pair{8, 1}, std::pair{2, 0}}) {
        const SpaceParams p = new_space(mv, mz);
        for (double s : {0.01, 0.3, 1.0, 4.0, 9.0}) {
            const double direct =
                std::pow(2.0, mv + mz) * std::pow(std::sinh(s / 2), mv + mz) * std::pow(std::cosh(s / 2), mz);
            CHECK(density(p, s) == doctest::Approx(direct).epsilon(1e-13));
            CHECK(log_density(p, s) == doctest::Approx(std::log(direct)).epsilon(1e-13));
        }
    }
}

TEST_CASE("log-density derivative") {
    const SpaceParams p = new_space(4, 3);
    for (double s : {0.2, 1.0, 3.0, 12.0}) {
        const double h = 1e-5;
        const double fd = (log_density(p, s + h) - log_density(p, s - h)) / (2 * h);
        CHECK(log_density_derivative(p, s) == doctest::Approx(fd).epsilon(1e-8));
    }
    // behaves like (n-1)/s at the origin
    CHECK(log_density_derivative(p, 1e-8) * 1e-8 == doctest::Approx(p.n() - 1).epsilon(1e-10));
    // tends to Q at infinity
    CHECK(log_density_derivative(p, 40.0) == doctest::Approx(p.Q()).epsilon(1e-12));
}

TEST_CASE("no overflow at large radius") {
    const SpaceParams p = new_space(8, 1);
    CHECK(std::isfinite(log_density(p, 2000.0)));
    // A(s) ~ 2^{-m_z} e^{Qs}
    CHECK(log_density(p, 2000.0) == doctest::Approx(p.Q() * 2000.0 - std::log(2.0)).epsilon(1e-14));
}
