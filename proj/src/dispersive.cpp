#include "drs/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "drs/detail/phase_eval.hpp"
#include "drs/errors.hpp"
#include "drs/fit.hpp"
#include "drs/special.hpp"
#include "drs/transform.hpp"

namespace drs {

namespace {

// psi = sqrt(h) with h, h', h'' given.
std::pair<double, double> from_square(double h, double h1, double h2) {
    const double psi = std::sqrt(h);
    return {h1 / (2.0 * psi), h2 / (2.0 * psi) - h1 * h1 / (4.0 * psi * psi * psi)};
}

double central_diff(const std::function<double(double)>& f, double l, int order) {
    const double h = 1e-4 * l;
    if (order == 1)
        return (f(l + h) - f(l - h)) / (2.0 * h);
    return (f(l + h) - 2.0 * f(l) + f(l - h)) / (h * h);
}

double sigma(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Precomputed pieces of the inversion integral for repeated multipliers.
struct InversionKernel {
    std::vector<double> lambdas;
    std::vector<std::complex<double>> base; // C w |c|^{-2} fh
    std::vector<double> table;
    std::size_t s_count = 0;

    InversionKernel(const SpaceParams& p, const SpectralProfile& fh, const UniformGrid& s_grid,
                    const PhiConfig& cfg) {
        const UniformGrid& lg = fh.grid;
        const double smax = std::max(std::fabs(s_grid.lo), std::fabs(s_grid.hi));
        if (lg.step() * smax > std::numbers::pi / 4.0)
            throw ResolutionError("propagate: lambda-step " + std::to_string(lg.step()) +
                                  " does not resolve s_max " + std::to_string(smax));
        const double constant = calibrate_constant_or_throw(p);
        const std::vector<double> lw = simpson_weights(lg);
        for (std::size_t i = 0; i < lg.count; ++i) {
            const double l = lg.at(i);
            if (fh.values[i] == 0.0)
                continue;
            if (fh.support_hint && (l < fh.support_hint->lo || l > fh.support_hint->hi))
                continue;
            lambdas.push_back(l);
            base.push_back(constant * lw[i] * plancherel_density(p, l) * fh.values[i]);
        }
        s_count = s_grid.count;
        if (!lambdas.empty())
            table = phi_table(p, lambdas, s_grid.points(), cfg);
    }

    static double calibrate_constant_or_throw(const SpaceParams& p) {
        if (!is_calibrated(p))
            throw CalibrationError("propagate: inversion constant not calibrated for " + p.label());
        return calibrate_inversion_constant(p);
    }

    void apply(const std::vector<double>& psi, double t, std::vector<std::complex<double>>& out) const {
        out.assign(s_count, 0.0);
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            const std::complex<double> w = base[i] * std::polar(1.0, t * psi[i]);
            const double* row = table.data() + i * s_count;
            for (std::size_t j = 0; j < s_count; ++j)
                out[j] += w * row[j];
        }
    }
};

} // namespace

PhaseKind PhaseKind::frac(double a) {
    if (!(a > 1.0))
        throw ValidationError("frac: order a must exceed 1");
    return {PhaseVariant::Frac, a, 2.0, a, {}, {}, {}};
}
PhaseKind PhaseKind::frac_shifted(double a) {
    if (!(a > 1.0))
        throw ValidationError("frac-shifted: order a must exceed 1");
    return {PhaseVariant::FracShifted, a, a, a, {}, {}, {}};
}
PhaseKind PhaseKind::boussinesq() { return {PhaseVariant::Boussinesq, 2.0, 2.0, 2.0, {}, {}, {}}; }
PhaseKind PhaseKind::boussinesq_shifted() { return {PhaseVariant::BoussinesqShifted, 2.0, 1.0, 2.0, {}, {}, {}}; }
PhaseKind PhaseKind::beam() { return {PhaseVariant::Beam, 2.0, 2.0, 2.0, {}, {}, {}}; }
PhaseKind PhaseKind::beam_shifted() { return {PhaseVariant::BeamShifted, 2.0, 4.0, 2.0, {}, {}, {}}; }
PhaseKind PhaseKind::generic(double delta_low, double delta_high, std::function<double(double)> fn,
                             std::function<double(double)> d1, std::function<double(double)> d2) {
    if (!fn)
        throw ValidationError("generic phase: missing phase callable");
    if (!(delta_low > 0.0) || !(delta_high > 1.0))
        throw ValidationError("generic phase: need delta_low > 0 and delta_high > 1");
    return {PhaseVariant::Generic, 2.0, delta_low, delta_high, std::move(fn), std::move(d1), std::move(d2)};
}

bool PhaseKind::shifted() const {
    return variant == PhaseVariant::FracShifted || variant == PhaseVariant::BoussinesqShifted ||
           variant == PhaseVariant::BeamShifted;
}

std::string PhaseKind::name() const {
    auto num = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (s.back() == '.')
            s.pop_back();
        return s;
    };
    switch (variant) {
    case PhaseVariant::Frac:
        return "frac:" + num(a);
    case PhaseVariant::FracShifted:
        return "frac-shifted:" + num(a);
    case PhaseVariant::Boussinesq:
        return "boussinesq";
    case PhaseVariant::BoussinesqShifted:
        return "boussinesq-shifted";
    case PhaseVariant::Beam:
        return "beam";
    case PhaseVariant::BeamShifted:
        return "beam-shifted";
    case PhaseVariant::Generic:
        return "generic";
    }
    return "unknown";
}

PhaseKind parse_phase_kind(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    auto order = [&]() {
        if (colon == std::string::npos)
            throw ValidationError("phase '" + spec + "': fractional variants need an order, e.g. frac:2");
        std::size_t used = 0;
        double a = 0.0;
        try {
            a = std::stod(spec.substr(colon + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || colon + 1 + used != spec.size())
            throw ValidationError("phase '" + spec + "': malformed order");
        return a;
    };
    if (head == "frac")
        return PhaseKind::frac(order());
    if (head == "frac-shifted")
        return PhaseKind::frac_shifted(order());
    if (colon != std::string::npos)
        throw ValidationError("phase '" + spec + "': only fractional variants take an order");
    if (head == "boussinesq")
        return PhaseKind::boussinesq();
    if (head == "boussinesq-shifted")
        return PhaseKind::boussinesq_shifted();
    if (head == "beam")
        return PhaseKind::beam();
    if (head == "beam-shifted")
        return PhaseKind::beam_shifted();
    throw ValidationError("unknown phase '" + spec + "'");
}

double phase(const PhaseKind& kind, const SpaceParams& p, double lambda) {
    if (lambda < 0.0)
        throw DomainError("phase: lambda must be non-negative");
    return detail::phase_eval<double>(kind, p, lambda);
}

long double phase_ld(const PhaseKind& kind, const SpaceParams& p, long double lambda) {
    if (lambda < 0.0L)
        throw DomainError("phase: lambda must be non-negative");
    return detail::phase_eval<long double>(kind, p, lambda);
}

std::pair<double, double> phase_derivs(const PhaseKind& kind, const SpaceParams& p, double l) {
    if (!(l > 0.0))
        throw DomainError("phase_derivs: lambda must be positive");
    const double x = kind.shifted() ? l * l : l * l + p.spectral_gap();
    const double a = kind.a;
    switch (kind.variant) {
    case PhaseVariant::Frac:
        return {a * l * std::pow(x, a / 2.0 - 1.0),
                a * std::pow(x, a / 2.0 - 1.0) + a * (a - 2.0) * l * l * std::pow(x, a / 2.0 - 2.0)};
    case PhaseVariant::FracShifted:
        return {a * std::pow(l, a - 1.0), a * (a - 1.0) * std::pow(l, a - 2.0)};
    case PhaseVariant::Boussinesq:
        return from_square(x * x + x, (2.0 * x + 1.0) * 2.0 * l, 8.0 * l * l + 2.0 * (2.0 * x + 1.0));
    case PhaseVariant::BoussinesqShifted: {
        // direct form; the squared form cancels badly as lambda -> 0
        const double r = std::sqrt(1.0 + l * l);
        return {(1.0 + 2.0 * l * l) / r, l * (2.0 * l * l + 3.0) / (r * r * r)};
    }
    case PhaseVariant::Beam:
    case PhaseVariant::BeamShifted:
        return from_square(1.0 + x * x, 4.0 * x * l, 8.0 * l * l + 4.0 * x);
    case PhaseVariant::Generic: {
        const double d1 = kind.fn_d1 ? kind.fn_d1(l) : central_diff(kind.fn, l, 1);
        const double d2 = kind.fn_d2 ? kind.fn_d2(l) : central_diff(kind.fn, l, 2);
        return {d1, d2};
    }
    }
    return {0.0, 0.0};
}

PhaseAsymptoticsReport verify_phase_asymptotics(const PhaseKind& kind, const SpaceParams& p) {
    const std::size_t per_decade = 50;
    const std::vector<double> low = log_space(1e-3, 1.0, 3 * per_decade + 1);
    const std::vector<double> high = log_space(1.0, 1e4, 4 * per_decade + 1);
    PhaseAsymptoticsReport r;
    r.high_d2_inf = std::numeric_limits<double>::infinity();
    std::vector<double> lo_x, lo_y, hi_x, hi_y1, hi_y2;
    bool finite = true;
    for (std::size_t i = 0; i < low.size(); ++i) {
        const double l = low[i];
        const double v = std::fabs(phase_derivs(kind, p, l).first) / std::pow(l, kind.delta_low - 1.0);
        finite = finite && std::isfinite(v);
        r.low_d1_sup = std::max(r.low_d1_sup, v);
        if (i <= per_decade) {
            lo_x.push_back(l);
            lo_y.push_back(std::max(v, 1e-300));
        }
    }
    for (std::size_t i = 0; i < high.size(); ++i) {
        const double l = high[i];
        const auto [d1, d2] = phase_derivs(kind, p, l);
        const double v1 = std::fabs(d1) / std::pow(l, kind.delta_high - 1.0);
        const double v2 = std::fabs(d2) / std::pow(l, kind.delta_high - 2.0);
        finite = finite && std::isfinite(v1) && std::isfinite(v2);
        r.high_d1_sup = std::max(r.high_d1_sup, v1);
        r.high_d2_sup = std::max(r.high_d2_sup, v2);
        r.high_d2_inf = std::min(r.high_d2_inf, v2);
        if (i + per_decade + 1 >= high.size()) {
            hi_x.push_back(l);
            hi_y1.push_back(std::max(v1, 1e-300));
            hi_y2.push_back(std::max(v2, 1e-300));
        }
    }
    r.low_d1_slope = fit_loglog(lo_x, lo_y).slope;
    r.high_d1_slope = fit_loglog(hi_x, hi_y1).slope;
    r.high_d2_slope = fit_loglog(hi_x, hi_y2).slope;
    // Upper envelopes must not blow up toward the ends of the ranges; the
    // second-derivative ratio must level off at a positive value.
    const double tol = 0.05;
    r.pass = finite && r.low_d1_slope >= -tol && r.high_d1_slope <= tol && std::fabs(r.high_d2_slope) <= tol &&
             r.high_d2_inf > 0.0;
    return r;
}

RadialProfile propagate(const SpaceParams& p, const SpectralProfile& fh, const PhaseKind& kind, double t,
                        const UniformGrid& s_grid, const PhiConfig& cfg) {
    const InversionKernel ker(p, fh, s_grid, cfg);
    std::vector<double> psi(ker.lambdas.size());
    double max_rate = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        psi[i] = phase(kind, p, ker.lambdas[i]);
        if (ker.lambdas[i] > 0.0)
            max_rate = std::max(max_rate, std::fabs(phase_derivs(kind, p, ker.lambdas[i]).first));
    }
    const double incr = fh.grid.step() * std::fabs(t) * max_rate;
    if (incr > std::numbers::pi / 8.0)
        throw ResolutionError("propagate: phase increment " + std::to_string(incr) + " per lambda-step " +
                              std::to_string(fh.grid.step()) + " exceeds pi/8 at t=" + std::to_string(t));
    RadialProfile out;
    out.grid = s_grid;
    ker.apply(psi, t, out.values);
    return out;
}

std::vector<double> default_t_grid(const SpaceParams& p, const PhaseKind& kind, double lambda_max) {
    const double bound = std::numbers::pi / (4.0 * std::max(phase(kind, p, lambda_max), 1e-300));
    const std::vector<double> base = log_space(1e-4, 1.0, 512);
    std::vector<double> out{base.front()};
    for (std::size_t i = 1; i < base.size(); ++i) {
        const double gap = base[i] - base[i - 1];
        const auto pieces = static_cast<std::size_t>(std::ceil(gap / bound));
        if (pieces > (std::size_t{1} << 22))
            throw ResolutionError("default_t_grid: lambda_max too large for a dense t grid");
        for (std::size_t q = 1; q < pieces; ++q)
            out.push_back(base[i - 1] + gap * static_cast<double>(q) / static_cast<double>(pieces));
        out.push_back(base[i]);
        if (out.size() > (std::size_t{1} << 22))
            throw ResolutionError("default_t_grid: lambda_max too large for a dense t grid");
    }
    return out;
}

MaximalResult maximal_function(const SpaceParams& p, const SpectralProfile& fh, const PhaseKind& kind,
                               const std::vector<double>& t_grid, const UniformGrid& s_grid, bool refine,
                               const PhiConfig& cfg) {
    if (t_grid.empty())
        throw ValidationError("maximal_function: empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0 && t_grid[i] <= 1.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
            throw ValidationError("maximal_function: t grid must be increasing inside (0, 1]");
    }
    const InversionKernel ker(p, fh, s_grid, cfg);
    std::vector<double> psi(ker.lambdas.size());
    double psi_max = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        psi[i] = phase(kind, p, ker.lambdas[i]);
        psi_max = std::max(psi_max, std::fabs(psi[i]));
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double incr = (t_grid[i] - t_grid[i - 1]) * psi_max;
        if (incr > std::numbers::pi / 4.0)
            throw ResolutionError("maximal_function: t gap at t=" + std::to_string(t_grid[i - 1]) +
                                  " gives phase increment " + std::to_string(incr) + " > pi/4");
    }
    MaximalResult res;
    res.sup.grid = s_grid;
    res.sup.values.assign(s_grid.count, 0.0);
    res.argmax_t.assign(s_grid.count, t_grid.front());
    std::vector<double> best(s_grid.count, -1.0);
    std::vector<std::complex<double>> buf;
    for (double t : t_grid) {
        ker.apply(psi, t, buf);
        for (std::size_t j = 0; j < s_grid.count; ++j) {
            const double m = std::abs(buf[j]);
            if (m > best[j]) {
                best[j] = m;
                res.argmax_t[j] = t;
            }
        }
    }
    for (std::size_t j = 0; j < s_grid.count; ++j)
        res.sup.values[j] = best[j];
    if (refine) {
        std::vector<double> fine(best);
        for (std::size_t i = 1; i < t_grid.size(); ++i) {
            ker.apply(psi, 0.5 * (t_grid[i - 1] + t_grid[i]), buf);
            for (std::size_t j = 0; j < s_grid.count; ++j)
                fine[j] = std::max(fine[j], std::abs(buf[j]));
        }
        for (std::size_t j = 0; j < s_grid.count; ++j)
            res.refinement_increment = std::max(res.refinement_increment, fine[j] - best[j]);
    }
    return res;
}

double lp_low_cutoff(double xi) {
    const double r = std::fabs(xi);
    if (r <= 1.0)
        return 1.0;
    if (r >= 2.0)
        return 0.0;
    const double a = sigma(2.0 - r), b = sigma(r - 1.0);
    return a / (a + b);
}

double unit_bump(double x) {
    const double q = 1.0 - x * x;
    return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

double lp_bump(double xi) { return lp_low_cutoff(xi) - lp_low_cutoff(2.0 * xi); }

std::pair<SpectralProfile, SpectralProfile> littlewood_paley_split(const SpectralProfile& fh) {
    SpectralProfile low = fh, high = fh;
    // split one real component so that lo + hi reproduces x exactly
    auto split = [](double x, double chi, double& lo, double& hi) {
        hi = x * (1.0 - chi);
        lo = x - hi;
        for (int it = 0; it < 64 && lo + hi != x; ++it)
            lo = std::nextafter(lo, lo + hi < x ? std::numeric_limits<double>::infinity()
                                                : -std::numeric_limits<double>::infinity());
        if (lo + hi != x) {
            lo = x;
            hi = 0.0;
        }
    };
    for (std::size_t i = 0; i < fh.grid.count; ++i) {
        const double chi = lp_low_cutoff(fh.grid.at(i));
        double lr, hr, li, hi;
        split(fh.values[i].real(), chi, lr, hr);
        split(fh.values[i].imag(), chi, li, hi);
        low.values[i] = {lr, li};
        high.values[i] = {hr, hi};
    }
    const Interval full = fh.support_hint.value_or(Interval{fh.grid.lo, fh.grid.hi});
    low.support_hint = Interval{full.lo, std::min(full.hi, 2.0)};
    high.support_hint = Interval{std::max(full.lo, 1.0), full.hi};
    return {low, high};
}

} // namespace drs
