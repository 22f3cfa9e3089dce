#pragma once

// Internal numeric helpers shared by the core modules. Not installed.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace twopoint::detail {

/// Composite Simpson weights for n uniformly spaced nodes (spacing h).
/// An odd interval count is handled by a 3/8 block at the front.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    if (n == 2) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    std::size_t i0 = 0;
    if (n % 2 == 0) { // odd number of intervals
        if (n == 4) {
            w[0] += 3.0 * h / 8.0;
            w[1] += 9.0 * h / 8.0;
            w[2] += 9.0 * h / 8.0;
            w[3] += 3.0 * h / 8.0;
            return w;
        }
        w[0] += 3.0 * h / 8.0;
        w[1] += 9.0 * h / 8.0;
        w[2] += 9.0 * h / 8.0;
        w[3] += 3.0 * h / 8.0;
        i0 = 3;
    }
    w[i0] += h / 3.0;
    w[n - 1] += h / 3.0;
    for (std::size_t i = i0 + 1; i < n - 1; i += 2) w[i] += 4.0 * h / 3.0;
    for (std::size_t i = i0 + 2; i < n - 1; i += 2) w[i] += 2.0 * h / 3.0;
    return w;
}

inline double simpson(std::span<const double> f, double h) {
    const auto w = simpson_weights(f.size(), h);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
    return acc;
}

/// Catmull-Rom cubic interpolation on a uniform grid; zero outside.
/// Also exposes first/second derivatives of the interpolant.
class CubicInterpolant {
public:
    CubicInterpolant(double x0, double dx, std::span<const double> y)
        : x0_(x0), dx_(dx), y_(y.begin(), y.end()) {}

    double value(double x) const { return eval(x, 0); }
    double d1(double x) const { return eval(x, 1); }
    double d2(double x) const { return eval(x, 2); }

private:
    double eval(double x, int deriv) const {
        const auto n = static_cast<std::ptrdiff_t>(y_.size());
        const double t = (x - x0_) / dx_;
        if (t < 0.0 || t > static_cast<double>(n - 1)) return 0.0;
        auto i = static_cast<std::ptrdiff_t>(std::floor(t));
        if (i >= n - 1) i = n - 2;
        const double u = t - static_cast<double>(i);
        // neighbours, clamped at the ends
        const double ym = y_[i > 0 ? i - 1 : 0];
        const double y0 = y_[i];
        const double y1 = y_[i + 1];
        const double yp = y_[i + 2 < n ? i + 2 : n - 1];
        const double a = -0.5 * ym + 1.5 * y0 - 1.5 * y1 + 0.5 * yp;
        const double b = ym - 2.5 * y0 + 2.0 * y1 - 0.5 * yp;
        const double c = 0.5 * (y1 - ym);
        const double d = y0;
        switch (deriv) {
            case 0: return ((a * u + b) * u + c) * u + d;
            case 1: return ((3.0 * a * u + 2.0 * b) * u + c) / dx_;
            default: return (6.0 * a * u + 2.0 * b) / (dx_ * dx_);
        }
    }

    double x0_, dx_;
    std::vector<double> y_;
};

/// SplitMix64: stateless mixing of a 64-bit counter into a stream seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Order-independent per-trial stream seed.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

} // namespace twopoint::detail
