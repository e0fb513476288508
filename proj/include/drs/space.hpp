#pragma once

#include <string>

namespace drs {

// Structure constants of a Damek-Ricci space. Q is a half-integer and is
// stored as the integer 2Q so that Q and Q^2/4 are exact.
class SpaceParams {
public:
    int m_v() const { return m_v_; }
    int m_z() const { return m_z_; }
    int n() const { return m_v_ + m_z_ + 1; }
    int twice_Q() const { return m_v_ + 2 * m_z_; }
    double Q() const { return 0.5 * twice_Q(); }
    // Bottom of the L^2 spectrum, Q^2/4.
    double spectral_gap() const { return twice_Q() * twice_Q() / 16.0; }

    bool operator==(const SpaceParams&) const = default;
    std::string label() const;

private:
    friend SpaceParams new_space(int m_v, int m_z);
    SpaceParams(int m_v, int m_z) : m_v_(m_v), m_z_(m_z) {}
    int m_v_;
    int m_z_;
};

// Throws ValidationError when m_v is odd or < 2, or m_z < 0.
SpaceParams new_space(int m_v, int m_z);

// A(s) = 2^{m_v+m_z} sinh(s/2)^{m_v+m_z} cosh(s/2)^{m_z}.
double density(const SpaceParams& p, double s);

// log A(s) for s > 0, without overflow at large s.
double log_density(const SpaceParams& p, double s);

// A'(s)/A(s); Laurent form (n-1)/s below s = 1e-6.
double log_density_derivative(const SpaceParams& p, double s);

} // namespace drs
