#pragma once

#include <array>
#include <cmath>

namespace drs {

// Truncated Taylor series: c[i] = f^{(i)}(x0) / i!.
template <int N> struct Jet {
    std::array<double, N> c{};

    Jet() = default;
    Jet(double v) { c[0] = v; } // NOLINT: implicit constants are intended

    static Jet variable(double x0, double scale = 1.0) {
        Jet j(x0);
        if constexpr (N > 1)
            j.c[1] = scale;
        return j;
    }

    double value() const { return c[0]; }

    // Taylor coefficients of the derivative; the top coefficient is lost.
    Jet derivative() const {
        Jet d;
        for (int i = 0; i + 1 < N; ++i)
            d.c[i] = (i + 1) * c[i + 1];
        return d;
    }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < N; ++i)
            c[i] += o.c[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int i = 0; i < N; ++i)
            c[i] -= o.c[i];
        return *this;
    }
    Jet operator-() const {
        Jet r;
        for (int i = 0; i < N; ++i)
            r.c[i] = -c[i];
        return r;
    }
};

template <int N> Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N> Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N> Jet<N> operator+(Jet<N> a, double b) { return a += Jet<N>(b); }
template <int N> Jet<N> operator+(double a, Jet<N> b) { return b += Jet<N>(a); }
template <int N> Jet<N> operator-(Jet<N> a, double b) { return a -= Jet<N>(b); }
template <int N> Jet<N> operator-(double a, const Jet<N>& b) { return Jet<N>(a) -= b; }

template <int N> Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; i + j < N; ++j)
            r.c[i + j] += a.c[i] * b.c[j];
    return r;
}
template <int N> Jet<N> operator*(Jet<N> a, double b) {
    for (auto& v : a.c)
        v *= b;
    return a;
}
template <int N> Jet<N> operator*(double a, Jet<N> b) { return b * a; }

template <int N> Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    for (int i = 0; i < N; ++i) {
        double acc = a.c[i];
        for (int j = 1; j <= i; ++j)
            acc -= b.c[j] * r.c[i - j];
        r.c[i] = acc / b.c[0];
    }
    return r;
}
template <int N> Jet<N> operator/(const Jet<N>& a, double b) { return a * (1.0 / b); }
template <int N> Jet<N> operator/(double a, const Jet<N>& b) { return Jet<N>(a) / b; }

template <int N> Jet<N> exp(const Jet<N>& a) {
    // r' = a' r
    Jet<N> r;
    r.c[0] = std::exp(a.c[0]);
    for (int i = 1; i < N; ++i) {
        double acc = 0.0;
        for (int j = 1; j <= i; ++j)
            acc += j * a.c[j] * r.c[i - j];
        r.c[i] = acc / i;
    }
    return r;
}

template <int N> Jet<N> log(const Jet<N>& a) {
    // a r' = a'
    Jet<N> r;
    r.c[0] = std::log(a.c[0]);
    for (int i = 1; i < N; ++i) {
        double acc = i * a.c[i];
        for (int j = 1; j < i; ++j)
            acc -= j * r.c[j] * a.c[i - j];
        r.c[i] = acc / (i * a.c[0]);
    }
    return r;
}

template <int N> Jet<N> pow(const Jet<N>& a, double e) { return exp(e * log(a)); }
template <int N> Jet<N> sqrt(const Jet<N>& a) { return pow(a, 0.5); }

} // namespace drs
