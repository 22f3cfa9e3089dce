#include "twopoint/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "numerics.hpp"

namespace twopoint {

namespace {

constexpr double kFringeFloor = 1e-300;
constexpr double kFringeRel = 1e-15; // p below this times max(p) is "dark"

bool is_real_amplitude(const CoherenceSpec& coh) {
    if (coh.kind() != CoherenceSpec::Kind::pure) return false;
    return std::abs(std::sin(coh.phi())) < 1e-9;
}

double coverage_needed(const TwoPointState& st) {
    return std::abs(st.s0()) + 0.5 * std::abs(st.s()) + 10.0 * st.psf().sigma_eff();
}

/// Unnormalised density q(x) = sum_ab R_ab Psi_a(x) Psi_b(x) on the grid,
/// plus its Simpson mass.
struct RawDensity {
    std::vector<double> q;
    double mass = 0.0;
};

RawDensity raw_density(const TwoPointState& st, const GridSpec& grid) {
    const auto& psf = st.psf();
    const Eigen::Matrix2cd R = st.coefficient_matrix();
    const double r00 = R(0, 0).real();
    const double r11 = R(1, 1).real();
    const double r01 = R(0, 1).real();
    const double a = st.s0() + 0.5 * st.s();
    const double b = st.s0() - 0.5 * st.s();

    RawDensity out;
    out.q.resize(static_cast<std::size_t>(grid.n));
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        const double pp = psf.amplitude(x + a);
        const double pm = psf.amplitude(x + b);
        out.q[static_cast<std::size_t>(i)] =
            std::max(r00 * pp * pp + r11 * pm * pm + 2.0 * r01 * pp * pm, 0.0);
    }
    out.mass = detail::simpson(out.q, grid.dx());
    return out;
}

} // namespace

GridSpec auto_grid(const PsfModel& psf, double s, int n) {
    const double half = 0.5 * std::abs(s) + 12.0 * psf.sigma_eff();
    return GridSpec{-half, half, n};
}

CoherenceSpec CoherenceSpec::incoherent() {
    return CoherenceSpec(Kind::incoherent, 0.0, 0.5 * Eigen::Matrix2cd::Identity());
}

CoherenceSpec CoherenceSpec::pure(double phi) {
    return CoherenceSpec(Kind::pure, phi, Eigen::Matrix2cd::Zero());
}

CoherenceSpec CoherenceSpec::rank2(const Eigen::Matrix2cd& R) {
    return CoherenceSpec(Kind::rank2, 0.0, R);
}

TwoPointState CoherenceSpec::state(const PsfModel& psf, double s) const {
    switch (kind_) {
        case Kind::incoherent: return incoherent_mixture(psf, s);
        case Kind::pure: return superposition_state(psf, s, phi_);
        case Kind::rank2: return rank2_state(psf, s, 0.0, R_, /*auto_normalize=*/true);
    }
    throw InvalidParameterError("CoherenceSpec: bad kind");
}

double IntensityPattern::at(double xq) const {
    const double t = (xq - x_min) / dx;
    if (t < 0.0 || t > static_cast<double>(size() - 1)) return 0.0;
    auto i = static_cast<std::size_t>(t);
    if (i >= density.size() - 1) i = density.size() - 2;
    const double u = t - static_cast<double>(i);
    return (1.0 - u) * density[i] + u * density[i + 1];
}

IntensityPattern intensity_pattern(const TwoPointState& state, const GridSpec& grid) {
    if (grid.n < 3 || !(grid.x_max > grid.x_min))
        throw InvalidParameterError("intensity_pattern: bad grid spec");
    const double need = coverage_needed(state);
    if (grid.x_max < need || grid.x_min > -need)
        throw GridCoverageError("intensity_pattern: grid must cover +-(|s|/2 + 10 sigma_eff)");

    RawDensity raw = raw_density(state, grid);
    if (!(raw.mass > 0.0))
        throw InvalidParameterError("intensity_pattern: density has no mass on the grid");

    IntensityPattern pat;
    pat.x_min = grid.x_min;
    pat.dx = grid.dx();
    pat.density = std::move(raw.q);
    for (double& v : pat.density) v /= raw.mass;
    return pat;
}

ClassicalFisherResult classical_fisher_s(const PsfModel& psf, double s,
                                         const CoherenceSpec& coherence,
                                         const GridSpec& grid) {
    const double need = 0.5 * std::abs(s) + 10.0 * psf.sigma_eff();
    if (grid.n < 3 || grid.x_max < need || grid.x_min > -need)
        throw GridCoverageError("classical_fisher_s: grid must cover +-(|s|/2 + 10 sigma_eff)");

    const double h = 1e-4 * psf.sigma_eff();

    // densities at the five stencil separations, renormalised on the grid
    auto dens = [&](double sv) {
        RawDensity r = raw_density(coherence.state(psf, sv), grid);
        if (!(r.mass > 0.0))
            throw InvalidParameterError("classical_fisher_s: density has no mass");
        for (double& v : r.q) v /= r.mass;
        return r.q;
    };
    const auto p0 = dens(s);
    const auto pp1 = dens(s + h), pm1 = dens(s - h);
    const auto pp2 = dens(s + 0.5 * h), pm2 = dens(s - 0.5 * h);

    const double pmax = *std::max_element(p0.begin(), p0.end());
    const bool real_amp = is_real_amplitude(coherence);
    const double amp_sign = real_amp && std::cos(coherence.phi()) < 0.0 ? -1.0 : 1.0;

    // normalised signed amplitude for the dark-fringe limit: p = a~^2
    auto amp_norm = [&](double sv, double x) {
        const auto& t = psf.overlap();
        const double g = 2.0 * std::pow(std::cos(0.5 * coherence.phi()), 2);
        const double norm = 2.0 * (t.one_minus_delta(sv) + (1.0 - t.one_minus_delta(sv)) * g);
        const double a = psf.amplitude(x + 0.5 * sv) + amp_sign * psf.amplitude(x - 0.5 * sv);
        return a / std::sqrt(norm);
    };

    const auto w = detail::simpson_weights(p0.size(), grid.dx());
    double fisher = 0.0;
    double special = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        double integrand = 0.0;
        if (p0[i] >= kFringeRel * pmax) {
            const double d1 = (pp1[i] - pm1[i]) / (2.0 * h);
            const double d2 = (pp2[i] - pm2[i]) / h;
            const double dp = (4.0 * d2 - d1) / 3.0;
            integrand = dp * dp / p0[i];
        } else if (real_amp && p0[i] > 0.0) {
            // simple amplitude zero: (d_s p)^2 / p -> 4 (d_s a~)^2
            const double x = grid.x(static_cast<int>(i));
            const double a1 = (amp_norm(s + h, x) - amp_norm(s - h, x)) / (2.0 * h);
            const double a2 = (amp_norm(s + 0.5 * h, x) - amp_norm(s - 0.5 * h, x)) / h;
            const double da = (4.0 * a2 - a1) / 3.0;
            integrand = 4.0 * da * da;
            special += w[i] * p0[i];
        } else if (p0[i] > kFringeFloor) {
            special += w[i] * p0[i]; // dropped: no simple-zero structure
        }
        fisher += w[i] * integrand;
    }
    return {fisher, special};
}

double sparrow_separation(const PsfModel& psf, const CoherenceSpec& coherence) {
    if (coherence.kind() == CoherenceSpec::Kind::pure) {
        const double r = std::remainder(coherence.phi() - std::numbers::pi,
                                        2.0 * std::numbers::pi);
        if (std::abs(r) < 1e-6)
            throw DegenerateCriterionError(
                "sparrow_separation: anti-phase superposition has zero midpoint "
                "intensity for every separation; the criterion is vacuous");
    }

    Eigen::Matrix2cd R;
    switch (coherence.kind()) {
        case CoherenceSpec::Kind::incoherent:
            R = 0.5 * Eigen::Matrix2cd::Identity();
            break;
        case CoherenceSpec::Kind::pure: {
            // un-normalised rank-1 coefficients; normalisation does not move
            // the root of the midpoint second derivative
            const std::complex<double> e(std::cos(coherence.phi()),
                                         std::sin(coherence.phi()));
            R << 1.0, std::conj(e), e, 1.0;
            break;
        }
        case CoherenceSpec::Kind::rank2:
            R = coherence.R(); // overall scale does not move the root
            break;
    }
    const double r00 = R(0, 0).real(), r11 = R(1, 1).real(), r01 = R(0, 1).real();

    // d^2/dx^2 p(x|s) at x = 0 from amplitude derivatives
    auto curvature = [&](double s) {
        const double u = 0.5 * s;
        const double fp = psf.amplitude(u), fm = psf.amplitude(-u);
        const double gp = psf.amplitude_d1(u), gm = psf.amplitude_d1(-u);
        const double hp = psf.amplitude_d2(u), hm = psf.amplitude_d2(-u);
        // Psi+(x) = Psi(x + s/2), Psi-(x) = Psi(x - s/2), evaluated at x=0
        return r00 * 2.0 * (gp * gp + fp * hp) + r11 * 2.0 * (gm * gm + fm * hm) +
               2.0 * r01 * (hp * fm + 2.0 * gp * gm + fp * hm);
    };

    const double sig = psf.sigma_eff();
    const double s_lo = 1e-3 * sig, s_hi = 12.0 * sig;
    if (curvature(s_lo) >= 0.0)
        throw InvalidParameterError(
            "sparrow_separation: PSF intensity is not peaked at the origin");

    // 64-point log-spaced sign scan, then bisection
    double prev = s_lo;
    double root_lo = 0.0, root_hi = 0.0;
    for (int k = 1; k < 64; ++k) {
        const double sk = s_lo * std::pow(s_hi / s_lo, static_cast<double>(k) / 63.0);
        if (curvature(sk) > 0.0) {
            root_lo = prev;
            root_hi = sk;
            break;
        }
        prev = sk;
    }
    if (root_hi == 0.0)
        throw NoRootError("sparrow_separation: no sign change of the midpoint "
                          "curvature in (0, 12 sigma]");

    while (root_hi - root_lo > 1e-8 * sig) {
        const double mid = 0.5 * (root_lo + root_hi);
        (curvature(mid) > 0.0 ? root_hi : root_lo) = mid;
    }
    return 0.5 * (root_lo + root_hi);
}

} // namespace twopoint
