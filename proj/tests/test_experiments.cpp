#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drs/errors.hpp"
#include "drs/experiments.hpp"
#include "drs/fit.hpp"
#include "drs/special.hpp"
#include "drs/transform.hpp"

using namespace drs;

TEST_CASE("log-log fitting") {
    const std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x)
        y.push_back(3.0 * std::pow(v, -0.4));
    const LineFit f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
    CHECK(f.residual_rms < 1e-12);
    CHECK(fit_slope("q", x, y, -0.4, 0.01).within);
    CHECK_FALSE(fit_slope("q", x, y, 0.0, 0.01).within);
    // fewer than five points never qualifies
    CHECK_FALSE(fit_slope("q", {1, 2, 4, 8}, {1, 2, 4, 8}, 1.0, 0.1).within);
    const auto ls = log_space(1.0, 1000.0, 4);
    CHECK(ls[1] == doctest::Approx(10.0));
    CHECK(ls.back() == 1000.0);
}

TEST_CASE("case 1 spectra") {
    const SpaceParams p = new_space(2, 1);
    for (int N : {16, 256}) {
        const SpectralProfile fh = case1_family(p, N);
        const double r = std::sqrt(double(N));
        REQUIRE(fh.support_hint);
        CHECK(fh.support_hint->lo == doctest::Approx(N - r));
        CHECK(fh.support_hint->hi == doctest::Approx(N + r));
        CHECK(fh.grid.count >= 256);
        CHECK(fh.grid.lo >= N - r - 1e-9);
        CHECK(fh.grid.hi <= N + r + 1e-9);
        for (std::size_t i = 0; i < fh.grid.count; ++i) {
            const double l = fh.grid.at(i);
            // the bare bump is recovered from fh |c|^{-1} N^{1/2}
            const double bare = fh.values[i].real() * std::sqrt(plancherel_density(p, l)) * r;
            CHECK(bare >= 0.0);
            CHECK(bare == doctest::Approx(unit_bump(r - l / r)).epsilon(1e-12).scale(1e-12));
        }
    }
}

TEST_CASE("case 1 propagator agrees with the general inversion quadrature") {
    const SpaceParams p = new_space(2, 1);
    calibrate_inversion_constant(p);
    const int N = 64;
    const PhaseKind kind = PhaseKind::frac(2.0);
    const SpectralProfile fh = case1_family(p, N);
    const std::vector<double> ss{0.05, 0.075, 0.1};
    const std::vector<double> lin = case1_linearized(p, kind, N, ss);
    for (std::size_t j = 0; j < ss.size(); ++j) {
        const double t = ss[j] / (2.0 * N);
        const RadialProfile u = propagate(p, fh, kind, t, make_grid(ss[j], ss[j] + 1e-3, 2));
        CHECK(lin[j] == doctest::Approx(std::abs(u.values[0])).epsilon(1e-7));
    }
}

TEST_CASE("case 1 run reproduces the beta - 1/4 law") {
    const SpaceParams p = new_space(2, 1);
    calibrate_inversion_constant(p);
    Case1Options opt;
    opt.Ns = {64, 128, 256, 512, 1024};
    const ExperimentReport r = case1_run(p, PhaseKind::frac_shifted(1.5), opt);
    CHECK(r.verdict == Verdict::Pass);
    REQUIRE(r.fitted_slopes.size() == 3);
    for (const auto& s : r.fitted_slopes)
        CHECK(s.within);
    CHECK(r.table_rows.size() == 5);

    Case1Options small;
    small.Ns = {16, 32, 64, 128, 256};
    CHECK(case1_run(p, PhaseKind::frac(2.0), small).verdict == Verdict::NoVerdict);
    CHECK_THROWS(case1_run(p, PhaseKind::boussinesq(), opt));
}

TEST_CASE("case 2 spectra") {
    const SpaceParams p = new_space(2, 1);
    const int N = 10;
    const SpectralProfile fh = case2_family(p, N);
    REQUIRE(fh.support_hint);
    CHECK(fh.support_hint->lo >= N);
    CHECK(fh.support_hint->hi <= 2 * N);
    CHECK(fh.grid.count >= 512);
    const SpectralProfile Fg = euclidean_correspondence(p, fh);
    for (std::size_t i = 0; i < Fg.grid.count; ++i)
        CHECK(Fg.values[i].real() == doctest::Approx(shifted_bump(Fg.grid.at(i) / N)).epsilon(1e-12).scale(1e-12));
    CHECK(shifted_bump(1.5) == 1.0);
    CHECK(shifted_bump(1.0) == 0.0);
    CHECK(shifted_bump(2.0) == 0.0);
}

TEST_CASE("Sobolev embedding exponent") {
    CHECK(sobolev_embedding_exponent(4, 0.5) == doctest::Approx(8.0 / 3.0));
    CHECK(sobolev_embedding_exponent(4, 0.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(sobolev_embedding_exponent(4, 2.0), ValidationError);
}

TEST_CASE("case 2 run") {
    const SpaceParams p = new_space(2, 1);
    calibrate_inversion_constant(p);
    Case2Options opt;
    opt.Ns = {8, 12, 16, 24, 32};
    const ExperimentReport r = case2_run(p, opt);
    CHECK(r.verdict == Verdict::Pass);
    for (const auto& s : r.fitted_slopes)
        CHECK(s.within);
}

TEST_CASE("comparable oscillation") {
    const SpaceParams p = new_space(2, 1);
    const ExperimentReport a = transference_check(p, PhaseKind::frac(1.5), PhaseKind::frac_shifted(1.5));
    CHECK(a.outcome == "comparable");
    const ExperimentReport b = transference_check(p, PhaseKind::frac_shifted(1.5), PhaseKind::frac(1.5));
    CHECK(a.table_rows == b.table_rows);

    // (l^2 + Q^2/4)^{3/2} - l^3 = (3 Q^2 / 8) l + O(1/l) by the binomial series
    const ExperimentReport c = transference_check(p, PhaseKind::frac(3.0), PhaseKind::frac_shifted(3.0), {},
                                                  "not comparable");
    CHECK(c.outcome == "not comparable");
    CHECK(c.verdict == Verdict::Pass);
    const auto& last = c.table_rows.back();
    const double Q2 = p.Q() * p.Q();
    CHECK(last[1] == doctest::Approx(3.0 * Q2 / 8.0 * last[0]).epsilon(1e-4));
    bool found = false;
    for (const auto& s : c.scalars)
        if (s.quantity == "growth_exponent") {
            found = true;
            CHECK(s.value == doctest::Approx(1.0).epsilon(0.01));
        }
    CHECK(found);
    CHECK(transference_check(p, PhaseKind::frac(3.0), PhaseKind::frac_shifted(3.0), {}, "comparable").verdict ==
          Verdict::Fail);
}

TEST_CASE("report verdict rule") {
    ExperimentReport r;
    r.fitted_slopes.push_back({"a", 1.0, 1.0, 0.1, 0.0, 5, true});
    r.scalars.push_back({"b", 2.0, true, ""});
    r.settle();
    CHECK(r.verdict == Verdict::Pass);
    r.scalars.push_back({"c", 0.0, false, "> 0"});
    r.settle();
    CHECK(r.verdict == Verdict::Fail);
    CHECK(to_string(Verdict::NoVerdict) == "no-verdict");
}
