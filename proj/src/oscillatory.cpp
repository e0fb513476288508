#include "drs/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <cstdio>
#include <random>
#include <string>

#include "drs/detail/phase_eval.hpp"
#include "drs/errors.hpp"
#include "drs/fit.hpp"
#include "drs/grid.hpp"
#include "drs/jet.hpp"

namespace drs {

namespace {

constexpr int kJetOrder = 9;
constexpr int kMaxIbpSteps = 6;
constexpr std::size_t kIbpNodes = 1201;
constexpr double kInf = std::numeric_limits<double>::infinity();

using J = Jet<kJetOrder>;

J sigma_jet(const J& x) { return exp(-1.0 / x); }

J low_cutoff_jet(const J& r) {
    const double r0 = r.value();
    if (r0 <= 1.0)
        return J(1.0);
    if (r0 >= 2.0)
        return J(0.0);
    const J a = sigma_jet(2.0 - r), b = sigma_jet(r - 1.0);
    return a / (a + b);
}

// Taylor data of the dyadic bump at the bound nodes; independent of k.
const std::vector<J>& bump_jets() {
    static const std::vector<J> jets = [] {
        std::vector<J> out(kIbpNodes);
        const UniformGrid g = make_grid(0.5, 2.0, kIbpNodes);
        for (std::size_t i = 0; i < kIbpNodes; ++i) {
            const J l = J::variable(g.at(i));
            out[i] = low_cutoff_jet(l) - low_cutoff_jet(2.0 * l);
        }
        return out;
    }();
    return jets;
}

double max_phase_rate(const PhaseKind& kind, const SpaceParams& p, double scale) {
    double m = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double l = scale * (0.5 + 1.5 * i / 64.0);
        m = std::max(m, std::fabs(phase_derivs(kind, p, l).first));
    }
    return m;
}

std::complex<double> window_quadrature(const PhaseKind& kind, const SpaceParams& p, double scale, double gap,
                                       double d, std::size_t panels) {
    static const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                   0.8611363115940526};
    static const double gl_w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                   0.3478548451374538};
    const double h = 1.5 / static_cast<double>(panels);
    std::complex<double> acc = 0.0;
    for (std::size_t q = 0; q < panels; ++q) {
        const double mid = 0.5 + (static_cast<double>(q) + 0.5) * h;
        std::complex<double> part = 0.0;
        for (int j = 0; j < 4; ++j) {
            const double l = mid + 0.5 * h * gl_x[j];
            const double w = lp_bump(l);
            if (w == 0.0)
                continue;
            const double theta = scale * l * gap + (d != 0.0 ? d * phase(kind, p, scale * l) : 0.0);
            part += gl_w[j] * w * std::polar(1.0, theta);
        }
        acc += part;
    }
    return acc * (0.5 * h);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * uniform01(rng));
}

// mu with psi'(mu) = target, psi' increasing; infinity if out of reach.
double stationary_frequency(const PhaseKind& kind, const SpaceParams& p, double target) {
    double lo = 1e-12, hi = 1e12;
    if (phase_derivs(kind, p, hi).first < target)
        return kInf;
    if (phase_derivs(kind, p, lo).first >= target)
        return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (phase_derivs(kind, p, mid).first < target ? lo : hi) = mid;
    }
    return hi;
}

} // namespace

double window_bump_mass() { return 0.75; }

double window_ibp_bound(const PhaseKind& kind, const SpaceParams& p, int k, double s, double s_prime, double d) {
    if (kind.variant == PhaseVariant::Generic)
        return kInf;
    const double scale = std::ldexp(1.0, k);
    const double gap = s_prime - s;
    const std::vector<J>& eta = bump_jets();
    const UniformGrid g = make_grid(0.5, 2.0, kIbpNodes);
    std::vector<double> integrals(kMaxIbpSteps + 1, 0.0);
    int sign = 0;
    for (std::size_t i = 0; i < kIbpNodes; ++i) {
        const J l = J::variable(g.at(i));
        J theta = l * (scale * gap);
        if (d != 0.0)
            theta += d * detail::phase_eval(kind, p, l * scale);
        const J rate = theta.derivative();
        const double r0 = rate.value();
        const int sg = r0 > 0.0 ? 1 : (r0 < 0.0 ? -1 : 0);
        if (sg == 0 || (sign != 0 && sg != sign))
            return kInf;
        sign = sg;
        J gj = eta[i];
        const double w = (i == 0 || i + 1 == kIbpNodes) ? 0.5 : 1.0;
        for (int m = 1; m <= kMaxIbpSteps; ++m) {
            gj = (gj / rate).derivative();
            integrals[m] += w * std::fabs(gj.value());
        }
    }
    double best = kInf;
    for (int m = 1; m <= kMaxIbpSteps; ++m) {
        // 5% margin for the trapezoid sum of |g_m|
        best = std::min(best, 1.05 * integrals[m] * g.step());
    }
    return best;
}

WindowIntegralResult window_integral(const PhaseKind& kind, const SpaceParams& p, int k, double s, double s_prime,
                                     double d, std::size_t max_panels) {
    if (k < 1)
        throw ValidationError("window_integral: k must be >= 1");
    if (!(d >= 0.0 && d < 1.0))
        throw ValidationError("window_integral: d must lie in [0, 1)");
    const double scale = std::ldexp(1.0, k);
    const double amp = std::sqrt(scale);
    const double gap = s_prime - s;
    const double rate = scale * std::fabs(gap) + (d != 0.0 ? d * scale * max_phase_rate(kind, p, scale) : 0.0);
    const double need = std::ceil(1.5 * rate / (std::numbers::pi / 8.0));
    WindowIntegralResult res;
    res.k = k;
    if (need > 4096.0) {
        const double bound = amp * window_ibp_bound(kind, p, k, s, s_prime, d);
        if (bound <= kNegligibleWindow) {
            res.value = 0.0;
            res.quadrature_error = bound;
            res.bounded_only = true;
            return res;
        }
    }
    if (need > static_cast<double>(max_panels))
        throw ResolutionError("window_integral: k=" + std::to_string(k) + " needs " + sci(need) +
                              " panels, above the cap");
    const auto panels = static_cast<std::size_t>(std::max(64.0, need));
    const std::complex<double> coarse = window_quadrature(kind, p, scale, gap, d, panels);
    const std::complex<double> fine = window_quadrature(kind, p, scale, gap, d, 2 * panels);
    res.value = amp * std::abs(fine);
    res.quadrature_error = amp * std::abs(fine - coarse);
    res.panels = 2 * panels;
    // relative test, floored at 1e-6 of the trivial bound for near-zero values
    if (std::abs(fine - coarse) > 1e-6 * std::max(std::abs(fine), 1e-6 * window_bump_mass()))
        throw ResolutionError("window_integral: panel doubling changed the value by " +
                              sci(std::abs(fine - coarse)) + " (value " + sci(std::abs(fine)) + ") at k=" + std::to_string(k));
    return res;
}

ProofConstants proof_constants(const PhaseKind& kind, const SpaceParams& p) {
    ProofConstants c;
    c.delta_high = kind.delta_high;
    for (double l : log_space(1.0, 1e6, 601))
        c.c1 = std::max(c.c1, std::fabs(phase_derivs(kind, p, l).first) / std::pow(l, kind.delta_high - 1.0));
    c.c4 = std::pow(2.0, kind.delta_high - 1.0);
    c.c5 = 1.0 / (2.0 * std::max(c.c1 * c.c4, 2.0));
    c.c6 = std::pow(c.c5, 1.0 / (kind.delta_high - 1.0));
    return c;
}

int classify_triple(const ProofConstants& c, double gap, double d) {
    const double g = std::fabs(gap);
    if (g <= std::pow(d, 1.0 / c.delta_high) / c.c6)
        return 1;
    return g < 1.0 ? 2 : 3;
}

std::vector<Triple> sample_triples(const PhaseKind& kind, const SpaceParams& p, std::size_t count, int K,
                                   std::uint64_t seed) {
    const ProofConstants c = proof_constants(kind, p);
    std::mt19937_64 rng(seed);
    const double d_lo = 1e-3, d_hi = 0.99, gap_lo = 1e-3, gap_hi = 4.9;
    const double band_cap = std::ldexp(1.0, K - 3);
    std::vector<Triple> out;
    for (std::size_t i = 0; i < count; ++i) {
        const int regime = static_cast<int>(i % 3) + 1;
        bool placed = false;
        for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
            double d = 0.0, gap = 0.0;
            if (regime == 1) {
                d = log_uniform(rng, d_lo, d_hi);
                const double top = std::min(std::pow(d, 1.0 / c.delta_high) / c.c6, gap_hi);
                if (top <= gap_lo)
                    continue;
                gap = log_uniform(rng, gap_lo, top);
            } else if (regime == 2) {
                const double top_d = std::min(d_hi, std::pow(c.c6, c.delta_high));
                if (top_d <= d_lo)
                    break;
                d = log_uniform(rng, d_lo, top_d);
                gap = log_uniform(rng, std::pow(d, 1.0 / c.delta_high) / c.c6, 1.0);
            } else {
                d = log_uniform(rng, d_lo, d_hi);
                gap = 1.0 + (gap_hi - 1.0) * uniform01(rng);
            }
            const bool backward = uniform01(rng) < 0.5;
            const double left = 2.0 + 1e-9 + (5.0 - gap - 2e-9) * uniform01(rng);
            Triple t;
            t.s = backward ? left + gap : left;
            t.s_prime = backward ? left : left + gap;
            t.d = d;
            t.regime = classify_triple(c, t.s_prime - t.s, d);
            if (t.regime != regime || t.s_prime == t.s)
                continue;
            if (t.s_prime < t.s) {
                // stationary band 2^k in (mu/2, 2 mu) must sit inside k <= K-3
                const double mu = stationary_frequency(kind, p, (t.s - t.s_prime) / d);
                if (2.0 * mu > band_cap)
                    continue;
            }
            out.push_back(t);
            placed = true;
        }
        if (!placed)
            throw ValidationError("sample_triples: regime " + std::to_string(regime) +
                                  " cannot be sampled for phase " + kind.name());
    }
    return out;
}

DyadicSumReport dyadic_sum_check(const PhaseKind& kind, const SpaceParams& p, const std::vector<Triple>& triples,
                                 int K) {
    if (K < 1)
        throw ValidationError("dyadic_sum_check: K must be >= 1");
    DyadicSumReport rep;
    bool finite = true;
    for (const Triple& t : triples) {
        if (t.s == t.s_prime || !(t.d > 0.0 && t.d < 1.0))
            throw ValidationError("dyadic_sum_check: need s != s' and 0 < d < 1");
        DyadicSumRow row;
        row.triple = t;
        row.K = K;
        const double root = std::sqrt(std::fabs(t.s_prime - t.s));
        double sum = 0.0;
        for (int k = 1; k <= 2 * K; ++k) {
            const WindowIntegralResult w = window_integral(kind, p, k, t.s, t.s_prime, t.d);
            sum += w.value;
            row.max_quadrature_error = std::max(row.max_quadrature_error, w.quadrature_error);
            if (k == K)
                row.normalized = root * sum;
        }
        row.normalized_double = root * sum;
        row.rel_change = row.normalized > 0.0 ? std::fabs(row.normalized_double - row.normalized) / row.normalized
                                              : kInf;
        double tail = 0.0, last = 0.0;
        for (int k = 2 * K + 1; k <= 2 * K + 8; ++k) {
            last = std::sqrt(std::ldexp(1.0, k)) * window_ibp_bound(kind, p, k, t.s, t.s_prime, t.d);
            tail += last;
        }
        row.tail_bound = root * (tail + last);
        finite = finite && std::isfinite(row.normalized_double);
        rep.max_normalized = std::max(rep.max_normalized, row.normalized_double);
        rep.max_rel_change = std::max(rep.max_rel_change, row.rel_change);
        if (t.regime >= 1 && t.regime <= 3)
            rep.regime_max[t.regime - 1] = std::max(rep.regime_max[t.regime - 1], row.normalized_double);
        rep.rows.push_back(row);
    }
    rep.pass = finite && !rep.rows.empty() && rep.max_rel_change < 0.01;
    return rep;
}

double WindowSpec::operator()(double x) const {
    const double u = x / scale;
    return shape == WindowShape::Bump ? unit_bump(u) : lp_low_cutoff(u);
}

double WindowSpec::support_radius() const { return (shape == WindowShape::Bump ? 1.0 : 2.0) * scale; }

VanDerCorputReport van_der_corput_check(const std::vector<double>& curvatures, const WindowSpec& window) {
    if (!(window.scale > 0.0))
        throw ValidationError("van_der_corput_check: window scale must be positive");
    VanDerCorputReport rep;
    rep.curvatures = curvatures;
    const double R = window.support_radius();
    {
        const std::size_t m = 200001;
        double prev = window(-R);
        for (std::size_t i = 0; i < m; ++i) {
            const double x = -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(m - 1);
            const double v = window(x);
            rep.sup_norm = std::max(rep.sup_norm, std::fabs(v));
            rep.variation += std::fabs(v - prev);
            prev = v;
        }
    }
    rep.lemma_bound = 8.0 / std::sqrt(2.0) * (rep.sup_norm + rep.variation);
    static const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                   0.8611363115940526};
    static const double gl_w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                   0.3478548451374538};
    auto integrate = [&](double M, std::size_t panels) {
        // even integrand: twice the integral over [0, R]
        const double h = R / static_cast<double>(panels);
        std::complex<double> acc = 0.0;
        for (std::size_t q = 0; q < panels; ++q) {
            const double mid = (static_cast<double>(q) + 0.5) * h;
            for (int j = 0; j < 4; ++j) {
                const double x = mid + 0.5 * h * gl_x[j];
                acc += gl_w[j] * window(x) * std::polar(1.0, M * x * x);
            }
        }
        return acc * h;
    };
    double lo = kInf, hi = 0.0;
    bool ok = !curvatures.empty();
    for (double M : curvatures) {
        if (!(M > 0.0))
            throw ValidationError("van_der_corput_check: curvatures must be positive");
        const auto panels = static_cast<std::size_t>(
            std::max(256.0, std::ceil(R * 2.0 * M * R / (std::numbers::pi / 8.0))));
        const std::complex<double> coarse = integrate(M, panels);
        const std::complex<double> fine = integrate(M, 2 * panels);
        if (std::abs(fine - coarse) > 1e-6 * std::max(std::abs(fine), 1e-9))
            throw ResolutionError("van_der_corput_check: quadrature unresolved at M=" + std::to_string(M));
        const double v = std::sqrt(M) * std::abs(fine);
        rep.normalized.push_back(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ok = ok && v <= rep.lemma_bound;
    }
    rep.spread = lo > 0.0 ? hi / lo : kInf;
    rep.pass = ok && rep.spread < 20.0;
    return rep;
}

} // namespace drs
