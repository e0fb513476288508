#include "drs/spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "drs/errors.hpp"
#include "drs/special.hpp"

namespace drs {

namespace {

// Power series are stored in t = s^2.
constexpr int kSeriesTerms = 110;
constexpr int kMaxOrder = 40;
constexpr int kBoundExtra = 6;
constexpr double kOdeStart = 1e-3;

struct SeriesData {
    std::vector<double> b;              // s A'(s)/A(s)
    std::vector<std::vector<double>> a; // a_0 .. a_kMaxOrder
};

std::vector<double> series_div(const std::vector<double>& num, const std::vector<double>& den) {
    std::vector<double> c(num.size(), 0.0);
    for (std::size_t i = 0; i < num.size(); ++i) {
        double acc = num[i];
        for (std::size_t j = 0; j < i; ++j)
            acc -= c[j] * den[i - j];
        c[i] = acc / den[0];
    }
    return c;
}

std::vector<double> series_mul(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> c(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            c[i] += x[j] * y[i - j];
    return c;
}

std::unique_ptr<SeriesData> build_series(const SpaceParams& p) {
    const int D = kSeriesTerms;
    const int n = p.n();
    const double mu = 0.5 * (n - 2);
    // x = s/2, x^2 = t/4
    std::vector<double> ch(D), shx(D);
    double fact_even = 1.0; // (2j)!
    double pow4 = 1.0;      // 4^{-j}
    for (int j = 0; j < D; ++j) {
        if (j > 0) {
            fact_even *= (2.0 * j - 1.0) * (2.0 * j);
            pow4 *= 0.25;
        }
        ch[j] = pow4 / fact_even;
        shx[j] = pow4 / (fact_even * (2.0 * j + 1.0));
    }
    const std::vector<double> xcoth = series_div(ch, shx);
    const std::vector<double> tanh_x = series_div(shx, ch);
    std::vector<double> xtanh(D, 0.0);
    for (int j = 1; j < D; ++j)
        xtanh[j] = 0.25 * tanh_x[j - 1];

    auto data = std::make_unique<SeriesData>();
    data->b.resize(D);
    for (int j = 0; j < D; ++j)
        data->b[j] = (p.m_v() + p.m_z()) * xcoth[j] + p.m_z() * xtanh[j];
    const auto& b = data->b;

    // Remainder potential of the Bessel-normalised equation,
    // w'' + ((n-1)/s) w' + lambda^2 w = q(s) w.
    const std::vector<double> bb = series_mul(b, b);
    std::vector<double> num(D);
    for (int j = 0; j < D; ++j)
        num[j] = 0.25 * bb[j] - 0.5 * b[j] + j * b[j];
    num[0] -= 0.25 * (n - 1.0) * (n - 3.0);
    std::vector<double> q(D, 0.0);
    for (int i = 0; i + 1 < D; ++i)
        q[i] = num[i + 1];
    q[0] -= p.spectral_gap();

    data->a.assign(kMaxOrder + 1, std::vector<double>(D, 0.0));
    data->a[0][0] = 1.0;
    for (int l = 0; l < kMaxOrder; ++l) {
        const auto& al = data->a[l];
        const std::vector<double> qa = series_mul(q, al);
        auto& next = data->a[l + 1];
        for (int i = 0; i < D; ++i) {
            const double c1 = i + 1 < D ? al[i + 1] : 0.0;
            const double r = qa[i] - 2.0 * (i + 1) * (2.0 * i + 1) * c1 + (2.0 * mu - 1.0) * 2.0 * (i + 1) * c1;
            next[i] = r / ((l + 2.0 * i + 1.0) * 2.0 * (n - 1.0 + 2.0 * l));
        }
    }
    return data;
}

std::mutex g_series_mutex;
std::map<std::pair<int, int>, std::unique_ptr<SeriesData>> g_series;

const SeriesData& series_for(const SpaceParams& p) {
    std::lock_guard<std::mutex> lock(g_series_mutex);
    auto key = std::make_pair(p.m_v(), p.m_z());
    auto it = g_series.find(key);
    if (it == g_series.end())
        it = g_series.emplace(key, build_series(p)).first;
    return *it->second;
}

double horner(const std::vector<double>& c, int degree, double t) {
    double acc = 0.0;
    for (int i = degree; i >= 0; --i)
        acc = acc * t + c[i];
    return acc;
}

// Per-s data shared by every lambda: normalising prefactor and a_l(s) s^{2l}.
struct BesselPoint {
    double s = 0.0;
    double scale = 1.0;
    std::array<double, kMaxOrder + 1> weight{};
};

BesselPoint bessel_point(const SpaceParams& p, double s) {
    const SeriesData& data = series_for(p);
    BesselPoint bp;
    bp.s = s;
    const int n = p.n();
    const double mu = 0.5 * (n - 2);
    double pref = 1.0;
    if (s > 1e-8)
        pref = std::exp(0.5 * ((n - 1) * std::log(s) - log_density(p, s)));
    bp.scale = pref / script_j_at_zero(mu);
    const double t = s * s;
    double s2l = 1.0;
    for (int l = 0; l <= kMaxOrder; ++l) {
        bp.weight[l] = horner(data.a[l], kSeriesTerms - 1 - l, t) * s2l;
        s2l *= t;
    }
    return bp;
}

// sup_{z >= 1} |J_nu(z)| z^{nu+1/2}, sampled and padded, cached per order.
double script_j_decay_constant(double nu) {
    static std::mutex m;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(nu);
        if (it != cache.end())
            return it->second;
    }
    double best = std::exp((nu + 0.5) * std::log(2.0) + std::lgamma(nu + 0.5));
    const double z_end = 4.0 * nu + 60.0;
    for (double z = 1.0; z <= z_end; z += 0.05)
        best = std::max(best, std::fabs(script_j(nu, z)) * std::pow(z, nu + 0.5));
    best *= 1.05;
    std::lock_guard<std::mutex> lock(m);
    cache.emplace(nu, best);
    return best;
}

double script_j_envelope(double nu, double z) {
    const double at_zero = script_j_at_zero(nu);
    if (z <= 1.0)
        return at_zero;
    return std::min(at_zero, script_j_decay_constant(nu) * std::pow(z, -(nu + 0.5)));
}

struct BesselSum {
    double value;
    int order;
};

// Sums terms until two consecutive terms fall below tol relative to the
// largest term, starting the test at min_order.
BesselSum bessel_sum_auto(const SpaceParams& p, const BesselPoint& bp, double lambda, int min_order, double tol) {
    const double mu = 0.5 * (p.n() - 2);
    const double z = std::fabs(lambda) * bp.s;
    double sum = 0.0;
    double scale = 0.0;
    int quiet = 0;
    const int cap = kMaxOrder - kBoundExtra;
    int l = 0;
    for (; l <= cap; ++l) {
        const double term = bp.weight[l] * script_j(mu + l, z);
        sum += term;
        scale = std::max(scale, std::fabs(term));
        quiet = std::fabs(term) <= tol * scale ? quiet + 1 : 0;
        if (l >= min_order && quiet >= 2)
            break;
        if (bp.weight[l + 1] == 0.0 && l >= min_order)
            break;
    }
    return {bp.scale * sum, std::min(l, cap)};
}

void ode_rhs(const SpaceParams& p, double k2, const std::array<double, 2>& y, std::array<double, 2>& dy, double s) {
    dy[0] = y[1];
    dy[1] = -log_density_derivative(p, s) * y[1] - k2 * y[0];
}

// Regular series solution near the origin: phi = sum f_m s^{2m}.
std::vector<double> frobenius(const SpaceParams& p, double k2, int terms) {
    const auto& b = series_for(p).b;
    std::vector<double> f(terms, 0.0);
    f[0] = 1.0;
    const int n = p.n();
    for (int m = 1; m < terms; ++m) {
        double acc = k2 * f[m - 1];
        for (int i = 1; i < m; ++i)
            acc += 2.0 * (m - i) * b[i] * f[m - i];
        f[m] = -acc / (2.0 * m * (2.0 * m - 2.0 + n));
    }
    return f;
}

OdeSample frobenius_eval(const std::vector<double>& f, double s) {
    const double t = s * s;
    double v = 0.0, d = 0.0;
    for (int m = static_cast<int>(f.size()) - 1; m >= 0; --m) {
        v = v * t + f[m];
        if (m > 0)
            d = d * t + 2.0 * m * f[m];
    }
    return {v, d * s};
}

} // namespace

std::string to_string(PhiMethod m) {
    switch (m) {
    case PhiMethod::Bessel:
        return "bessel";
    case PhiMethod::Hc:
        return "hc";
    case PhiMethod::Ode:
        return "ode";
    }
    return "unknown";
}

std::vector<double> bessel_series_coefficients(const SpaceParams& p, double s, int L) {
    if (L < 0 || L > kMaxOrder)
        throw ValidationError("bessel_series_coefficients: order out of range");
    const SeriesData& data = series_for(p);
    std::vector<double> out(L + 1);
    for (int l = 0; l <= L; ++l)
        out[l] = horner(data.a[l], kSeriesTerms - 1 - l, s * s);
    return out;
}

BesselSeriesEval phi_bessel(const SpaceParams& p, double lambda, double s, int M, double R0) {
    if (!(s >= 0.0) || s > R0)
        throw DomainError("phi_bessel: s must lie in [0, R_0]");
    if (M < 0 || M > kMaxOrder - kBoundExtra)
        throw ValidationError("phi_bessel: truncation order must be in [0, " +
                              std::to_string(kMaxOrder - kBoundExtra) + "]");
    const BesselPoint bp = bessel_point(p, s);
    const double mu = 0.5 * (p.n() - 2);
    const double z = std::fabs(lambda) * s;
    double sum = 0.0;
    for (int l = 0; l <= M; ++l)
        sum += bp.weight[l] * script_j(mu + l, z);
    double bound = 0.0;
    for (int l = M + 1; l <= M + kBoundExtra; ++l)
        bound += std::fabs(bp.weight[l]) * script_j_envelope(mu + l, z);
    return {bp.scale * sum, M, 1.5 * bp.scale * bound};
}

BesselSeriesEval phi_bessel_auto(const SpaceParams& p, double lambda, double s, const PhiConfig& cfg) {
    if (!(s >= 0.0) || s > cfg.bessel_radius)
        throw DomainError("phi_bessel: s must lie in [0, R_0]");
    const BesselPoint bp = bessel_point(p, s);
    const BesselSum sum = bessel_sum_auto(p, bp, lambda, cfg.bessel_order, cfg.tolerance);
    BesselSeriesEval out = phi_bessel(p, lambda, s, sum.order, cfg.bessel_radius);
    return out;
}

std::vector<double> hc_potential_coefficients(const SpaceParams& p, int K) {
    std::vector<double> b(K + 1, 0.0), w(K + 1, 0.0);
    for (int k = 1; k <= K; ++k)
        b[k] = (p.m_v() + p.m_z()) + p.m_z() * (k % 2 == 0 ? 1.0 : -1.0);
    const double Q = p.Q();
    for (int k = 1; k <= K; ++k) {
        double conv = 0.0;
        for (int i = 1; i < k; ++i)
            conv += b[i] * b[k - i];
        w[k] = 0.25 * (2.0 * Q * b[k] + conv) - 0.5 * k * b[k];
    }
    return w;
}

std::vector<std::complex<double>> gamma_coeffs(const SpaceParams& p, double lambda, int mu_max) {
    if (lambda == 0.0)
        throw DomainError("gamma_coeffs: lambda must be nonzero");
    if (mu_max < 1)
        throw ValidationError("gamma_coeffs: mu_max must be >= 1");
    const std::vector<double> w = hc_potential_coefficients(p, mu_max);
    std::vector<std::complex<double>> g(mu_max + 1);
    g[0] = 1.0;
    for (int mu = 1; mu <= mu_max; ++mu) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < mu; ++j)
            acc += w[mu - j] * g[j];
        const std::complex<double> den(static_cast<double>(mu) * mu, -2.0 * mu * lambda);
        if (std::abs(den) < 1e-300)
            throw DomainError("gamma_coeffs: degenerate recursion denominator");
        g[mu] = acc / den;
    }
    return g;
}

namespace {

struct HcSums {
    std::complex<double> value;
    double tail_ratio;
};

HcSums hc_sum(const SpaceParams& p, double lambda, double s, const std::vector<std::complex<double>>& gp,
              const std::vector<std::complex<double>>& gm, const CValue& cp, const CValue& cm) {
    const int M = static_cast<int>(gp.size()) - 1;
    const std::complex<double> rot_p = std::exp(std::complex<double>(0.0, lambda * s));
    const double decay = std::exp(-s);
    std::complex<double> sp = 0.0, sm = 0.0;
    double e = 1.0;
    double last = 0.0;
    for (int mu = 0; mu <= M; ++mu) {
        sp += gp[mu] * e;
        sm += gm[mu] * e;
        last = std::abs(gp[mu]) * e;
        e *= decay;
    }
    sp *= rot_p;
    sm *= std::conj(rot_p);
    const double pref = std::exp(-0.5 * p.m_z() * std::log(2.0) - 0.5 * log_density(p, s));
    const double denom = std::max(std::abs(sp), 1e-300);
    return {pref * (cp * sp + cm * sm), last / denom};
}

} // namespace

HcSeriesEval phi_hc(const SpaceParams& p, double lambda, double s, int mu_max, double s_min) {
    if (lambda == 0.0)
        throw DomainError("phi_hc: lambda must be nonzero");
    if (!(s >= s_min))
        throw DomainError("phi_hc: s below the series' minimum radius");
    HcSeriesEval out;
    out.mu_max = mu_max;
    out.gamma_coeffs = gamma_coeffs(p, lambda, mu_max);
    const auto gm = gamma_coeffs(p, -lambda, mu_max);
    const HcSums r = hc_sum(p, lambda, s, out.gamma_coeffs, gm, c_function(p, lambda), c_function(p, -lambda));
    out.value = r.value;
    out.tail_ratio = r.tail_ratio;
    out.converged = r.tail_ratio <= 1e-12;
    return out;
}

HcSeriesEval phi_hc_auto(const SpaceParams& p, double lambda, double s, const PhiConfig& cfg) {
    int terms = cfg.hc_terms;
    HcSeriesEval out = phi_hc(p, lambda, s, terms, cfg.bessel_max_s);
    while (out.tail_ratio > cfg.tolerance && terms < 640) {
        terms *= 2;
        out = phi_hc(p, lambda, s, terms, cfg.bessel_max_s);
    }
    return out;
}

double default_ode_step(const SpaceParams& p, double lambda) {
    const double k = std::sqrt(lambda * lambda + p.spectral_gap());
    return std::min(0.02, 0.02 / k);
}

std::vector<OdeSample> phi_ode_at(const SpaceParams& p, double lambda, const std::vector<double>& s_points,
                                  double step) {
    const double k2 = lambda * lambda + p.spectral_gap();
    const double k = std::sqrt(k2);
    if (step <= 0.0)
        step = default_ode_step(p, lambda);
    if (step * k > 0.05 * (1.0 + 1e-12))
        throw ResolutionError("phi_ode_oracle: step " + std::to_string(step) +
                              " violates step*sqrt(lambda^2+Q^2/4) <= 0.05");
    for (std::size_t i = 0; i < s_points.size(); ++i) {
        if (!(s_points[i] >= 0.0) || (i > 0 && s_points[i] < s_points[i - 1]))
            throw ValidationError("phi_ode_at: points must be sorted and non-negative");
    }
    const std::vector<double> f = frobenius(p, k2, 40);
    std::vector<OdeSample> out(s_points.size());
    const OdeSample start = frobenius_eval(f, kOdeStart);
    std::array<double, 2> y = {start.value, start.derivative};
    double s = kOdeStart;
    boost::numeric::odeint::runge_kutta_fehlberg78<std::array<double, 2>> stepper;
    auto rhs = [&](const std::array<double, 2>& yy, std::array<double, 2>& dy, double ss) { ode_rhs(p, k2, yy, dy, ss); };
    const double near_origin = 0.03 / (p.n() - 1.0);
    for (std::size_t i = 0; i < s_points.size(); ++i) {
        const double target = s_points[i];
        if (target <= kOdeStart) {
            out[i] = frobenius_eval(f, target);
            continue;
        }
        while (s < target) {
            double h = std::min(step, near_origin * s);
            if (s + h >= target || target - (s + h) < 1e-3 * h)
                h = target - s;
            stepper.do_step(rhs, y, s, h);
            s = (h == target - s) ? target : s + h;
        }
        out[i] = {y[0], y[1]};
    }
    return out;
}

RadialProfile phi_ode_oracle(const SpaceParams& p, double lambda, double s_max, double step) {
    if (!(s_max > 0.0) || !(step > 0.0))
        throw ValidationError("phi_ode_oracle: s_max and step must be positive");
    const std::size_t count = static_cast<std::size_t>(std::ceil(s_max / step - 1e-9)) + 1;
    RadialProfile out;
    out.grid = make_grid(0.0, s_max, std::max<std::size_t>(count, 2));
    const auto samples = phi_ode_at(p, lambda, out.grid.points(), std::min(step, out.grid.step()));
    out.values.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.values[i] = samples[i].value;
    return out;
}

PhiResult phi(const SpaceParams& p, double lambda, double s, const PhiConfig& cfg) {
    if (!(s >= 0.0))
        throw DomainError("phi: s must be non-negative");
    if (s <= cfg.bessel_max_s)
        return {phi_bessel_auto(p, lambda, s, cfg).value, PhiMethod::Bessel};
    if (s >= cfg.hc_min_s && std::fabs(lambda) >= cfg.hc_min_lambda)
        return {phi_hc_auto(p, lambda, s, cfg).value.real(), PhiMethod::Hc};
    return {phi_ode_at(p, lambda, {s}).front().value, PhiMethod::Ode};
}

std::vector<double> phi_table(const SpaceParams& p, const std::vector<double>& lambdas,
                              const std::vector<double>& s_points, const PhiConfig& cfg) {
    const std::size_t ns = s_points.size();
    std::vector<double> table(lambdas.size() * ns, 0.0);
    std::vector<std::size_t> order(ns);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s_points[a] < s_points[b]; });

    std::vector<std::size_t> bessel_idx, hc_idx, rest_idx;
    for (std::size_t j : order) {
        if (s_points[j] < 0.0)
            throw DomainError("phi_table: s must be non-negative");
        if (s_points[j] <= cfg.bessel_max_s)
            bessel_idx.push_back(j);
        else if (s_points[j] >= cfg.hc_min_s)
            hc_idx.push_back(j);
        else
            rest_idx.push_back(j);
    }
    std::vector<BesselPoint> bpoints;
    bpoints.reserve(bessel_idx.size());
    for (std::size_t j : bessel_idx)
        bpoints.push_back(bessel_point(p, s_points[j]));

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double lambda = lambdas[i];
        double* row = table.data() + i * ns;
        for (std::size_t q = 0; q < bessel_idx.size(); ++q)
            row[bessel_idx[q]] = bessel_sum_auto(p, bpoints[q], lambda, cfg.bessel_order, cfg.tolerance).value;

        const bool use_hc = std::fabs(lambda) >= cfg.hc_min_lambda && !hc_idx.empty();
        std::vector<double> ode_s;
        std::vector<std::size_t> ode_j;
        for (std::size_t j : rest_idx) {
            ode_s.push_back(s_points[j]);
            ode_j.push_back(j);
        }
        if (!use_hc) {
            for (std::size_t j : hc_idx) {
                ode_s.push_back(s_points[j]);
                ode_j.push_back(j);
            }
        }
        if (!ode_s.empty()) {
            const auto vals = phi_ode_at(p, lambda, ode_s);
            for (std::size_t q = 0; q < ode_j.size(); ++q)
                row[ode_j[q]] = vals[q].value;
        }
        if (use_hc) {
            // the smallest s needs the most terms; reuse that truncation for the rest
            const double s0 = s_points[hc_idx.front()];
            const HcSeriesEval first = phi_hc_auto(p, lambda, s0, cfg);
            const auto gm = gamma_coeffs(p, -lambda, first.mu_max);
            const CValue cp = c_function(p, lambda), cm = c_function(p, -lambda);
            for (std::size_t j : hc_idx)
                row[j] = hc_sum(p, lambda, s_points[j], first.gamma_coeffs, gm, cp, cm).value.real();
        }
    }
    return table;
}

} // namespace drs
