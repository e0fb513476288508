#pragma once

#include <cmath>
#include <type_traits>

#include "drs/dispersive.hpp"
#include "drs/errors.hpp"

namespace drs::detail {

// Phase formula generic over the scalar type (double, long double, Jet).
template <class T> T phase_eval(const PhaseKind& k, const SpaceParams& p, const T& l) {
    using std::pow;
    using std::sqrt;
    const double gap = p.spectral_gap();
    const T x = k.shifted() ? l * l : l * l + gap;
    switch (k.variant) {
    case PhaseVariant::Frac:
        return pow(x, k.a / 2.0);
    case PhaseVariant::FracShifted:
        return pow(l, k.a);
    case PhaseVariant::Boussinesq:
    case PhaseVariant::BoussinesqShifted:
        return sqrt(x) * sqrt(x + 1.0);
    case PhaseVariant::Beam:
    case PhaseVariant::BeamShifted:
        return sqrt(x * x + 1.0);
    case PhaseVariant::Generic:
        if constexpr (std::is_floating_point_v<T>)
            return static_cast<T>(k.fn(static_cast<double>(l)));
        else
            throw ValidationError("generic phases support scalar evaluation only");
    }
    return T(0.0);
}

} // namespace drs::detail
