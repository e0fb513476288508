#include "drs/space.hpp"

#include <cmath>

#include "drs/errors.hpp"

namespace drs {

std::string SpaceParams::label() const {
    return "m_v=" + std::to_string(m_v_) + ",m_z=" + std::to_string(m_z_);
}

SpaceParams new_space(int m_v, int m_z) {
    if (m_v < 2)
        throw ValidationError("m_v must be >= 2 (got " + std::to_string(m_v) + ")");
    if (m_v % 2 != 0)
        throw ValidationError("m_v must be even (got " + std::to_string(m_v) + ")");
    if (m_z < 0)
        throw ValidationError("m_z must be >= 0 (got " + std::to_string(m_z) + ")");
    return SpaceParams(m_v, m_z);
}

double density(const SpaceParams& p, double s) {
    if (!(s >= 0.0))
        throw DomainError("density: s must be non-negative");
    const int k = p.m_v() + p.m_z();
    return std::pow(2.0 * std::sinh(0.5 * s), k) * std::pow(std::cosh(0.5 * s), p.m_z());
}

double log_density(const SpaceParams& p, double s) {
    if (!(s > 0.0))
        throw DomainError("log_density: s must be positive");
    const double half = 0.5 * s;
    // log(2 sinh(x)) = x + log(1 - e^{-2x}); log cosh(x) = x + log((1 + e^{-2x})/2)
    const double e = std::exp(-2.0 * half);
    const double log_2sinh = half < 1.0 ? std::log(2.0 * std::sinh(half)) : half + std::log1p(-e);
    const double log_cosh = half + std::log1p(e) - std::log(2.0);
    return (p.m_v() + p.m_z()) * log_2sinh + p.m_z() * log_cosh;
}

double log_density_derivative(const SpaceParams& p, double s) {
    if (!(s > 0.0))
        throw DomainError("log_density_derivative: s must be positive");
    if (s < 1e-6)
        return (p.n() - 1) / s + s * ((p.m_v() + p.m_z()) / 12.0 + p.m_z() / 4.0);
    const double half = 0.5 * s;
    return 0.5 * (p.m_v() + p.m_z()) / std::tanh(half) + 0.5 * p.m_z() * std::tanh(half);
}

} // namespace drs
