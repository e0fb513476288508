#include "drs/special.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include <boost/math/special_functions/bessel.hpp>

#include "drs/errors.hpp"

namespace drs {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> lanczos_right(std::complex<double> z) {
    z -= 1.0;
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        x += kLanczos[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log(sin(pi z)) without overflow for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z) {
    const std::complex<double> i(0.0, 1.0);
    if (z.imag() > 1.0)
        return -i * kPi * z + std::log((std::exp(2.0 * i * kPi * z) - 1.0) / (2.0 * i));
    if (z.imag() < -1.0)
        return i * kPi * z + std::log((1.0 - std::exp(-2.0 * i * kPi * z)) / (2.0 * i));
    return std::log(std::sin(kPi * z));
}

double bessel_series(double mu, double x) {
    const long double half = 0.5L * x;
    const long double h2 = half * half;
    long double term = std::exp(static_cast<long double>(mu) * std::log(half) -
                                std::lgamma(static_cast<long double>(mu) + 1.0L));
    long double sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= -h2 / (static_cast<long double>(k) * (k + mu));
        sum += term;
        if (std::fabs(term) < 1e-21L * std::fabs(sum))
            break;
    }
    return static_cast<double>(sum);
}

double bessel_hankel(double mu, double x) {
    const double m4 = 4.0 * mu * mu;
    double p = 1.0, q = 0.0;
    double a = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        a *= (m4 - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
        const double mag = std::fabs(a);
        if (mag > prev)
            break;
        // Terms alternate between Q and P with signs (+,-,-,+) per period 4.
        const int r = k % 4;
        if (r == 1)
            q += a;
        else if (r == 2)
            p -= a;
        else if (r == 3)
            q -= a;
        else
            p += a;
        if (mag < 1e-17)
            break;
        prev = mag;
    }
    const double w = x - 0.5 * mu * kPi - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(w) - q * std::sin(w));
}

std::mutex g_limit_mutex;
std::map<std::pair<int, int>, double> g_limit_cache;

} // namespace

std::complex<double> ln_gamma_complex(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw PoleError("ln_gamma_complex: pole at non-positive integer " +
                        std::to_string(z.real()));
    if (z.real() < 0.5)
        return std::log(kPi) - log_sin_pi(z) - lanczos_right(1.0 - z);
    return lanczos_right(z);
}

double bessel_j(double mu, double x) {
    if (!(x >= 0.0))
        throw DomainError("bessel_j: x must be non-negative");
    if (mu < 0.0)
        throw DomainError("bessel_j: order must be non-negative");
    if (x == 0.0)
        return mu == 0.0 ? 1.0 : 0.0;
    if (x <= 12.0)
        return bessel_series(mu, x);
    if (x >= std::max(25.0, mu * mu))
        return bessel_hankel(mu, x);
    return boost::math::cyl_bessel_j(mu, x);
}

double script_j_at_zero(double mu) {
    return std::exp(0.5 * std::log(kPi) + std::lgamma(mu + 0.5) - std::lgamma(mu + 1.0));
}

double script_j(double mu, double x) {
    if (!(x >= 0.0))
        throw DomainError("script_j: x must be non-negative");
    if (x <= 12.0) {
        const long double h2 = 0.25L * x * x;
        long double term = 1.0L;
        long double sum = 1.0L;
        for (int k = 1; k < 400; ++k) {
            term *= -h2 / (static_cast<long double>(k) * (k + mu));
            sum += term;
            if (std::fabs(term) < 1e-21L * std::fabs(sum) || term == 0.0L)
                break;
        }
        return script_j_at_zero(mu) * static_cast<double>(sum);
    }
    const double scale = std::exp(mu * std::log(2.0 / x) + 0.5 * std::log(kPi) + std::lgamma(mu + 0.5));
    return scale * bessel_j(mu, x);
}

CValue c_function(const SpaceParams& p, double lambda) {
    if (lambda == 0.0)
        throw PoleError("c_function: pole at lambda = 0");
    const std::complex<double> il(0.0, lambda);
    const double Q = p.Q();
    const double n = p.n();
    const std::complex<double> lg = (Q - 2.0 * il) * std::log(2.0) + ln_gamma_complex(2.0 * il) +
                                    std::lgamma(0.5 * n) - ln_gamma_complex(0.5 * (Q + 2.0 * il)) -
                                    ln_gamma_complex(0.25 * (static_cast<double>(p.m_v()) + 2.0 + 4.0 * il));
    return std::exp(lg);
}

double plancherel_small_lambda_limit(const SpaceParams& p) {
    const auto key = std::make_pair(p.m_v(), p.m_z());
    {
        std::lock_guard<std::mutex> lock(g_limit_mutex);
        auto it = g_limit_cache.find(key);
        if (it != g_limit_cache.end())
            return it->second;
    }
    // g(l) = |c(l)|^{-2}/l^2 is even and smooth, so one Richardson step
    // removes the l^2 term.
    auto g = [&](double l) { return 1.0 / (std::norm(c_function(p, l)) * l * l); };
    const double h = 1e-2;
    const double limit = (4.0 * g(0.5 * h) - g(h)) / 3.0;
    std::lock_guard<std::mutex> lock(g_limit_mutex);
    g_limit_cache.emplace(key, limit);
    return limit;
}

double plancherel_density(const SpaceParams& p, double lambda) {
    const double l = std::fabs(lambda);
    if (l < 1e-4)
        return l * l * plancherel_small_lambda_limit(p);
    return 1.0 / std::norm(c_function(p, l));
}

} // namespace drs
