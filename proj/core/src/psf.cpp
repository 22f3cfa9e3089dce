#include "twopoint/psf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "numerics.hpp"

namespace twopoint {

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_amp(double sigma, double x) {
    const double norm = std::pow(2.0 * kPi * sigma * sigma, -0.25);
    return norm * std::exp(-x * x / (4.0 * sigma * sigma));
}

} // namespace

// ---------------------------------------------------------------------------
// OverlapTable
// ---------------------------------------------------------------------------

OverlapTable OverlapTable::gaussian(double sigma) {
    OverlapTable t;
    t.gaussian_ = true;
    t.v_ = 1.0 / (4.0 * sigma * sigma);
    t.p2_ = t.v_;
    t.p4_ = 3.0 * t.v_ * t.v_;
    t.p6_ = 15.0 * t.v_ * t.v_ * t.v_;
    return t;
}

OverlapTable OverlapTable::spectral(std::vector<double> weighted_mu, double p_min,
                                    double dp, double p2, double p4, double p6) {
    OverlapTable t;
    t.gaussian_ = false;
    t.wmu_ = std::move(weighted_mu);
    t.p_min_ = p_min;
    t.dp_ = dp;
    t.p2_ = p2;
    t.p4_ = p4;
    t.p6_ = p6;
    return t;
}

double OverlapTable::delta(double s) const {
    if (gaussian_) return std::exp(-0.5 * s * s * v_);
    double acc = 0.0;
    for (std::size_t k = 0; k < wmu_.size(); ++k) {
        const double p = p_min_ + static_cast<double>(k) * dp_;
        acc += wmu_[k] * std::cos(s * p);
    }
    return acc;
}

double OverlapTable::one_minus_delta(double s) const {
    if (gaussian_) return -std::expm1(-0.5 * s * s * v_);
    double acc = 0.0;
    for (std::size_t k = 0; k < wmu_.size(); ++k) {
        const double p = p_min_ + static_cast<double>(k) * dp_;
        const double half = std::sin(0.5 * s * p);
        acc += wmu_[k] * 2.0 * half * half;
    }
    return acc;
}

double OverlapTable::ddelta(double s) const {
    if (gaussian_) return -v_ * s * std::exp(-0.5 * s * s * v_);
    double acc = 0.0;
    for (std::size_t k = 0; k < wmu_.size(); ++k) {
        const double p = p_min_ + static_cast<double>(k) * dp_;
        acc -= wmu_[k] * p * std::sin(s * p);
    }
    return acc;
}

double OverlapTable::d2delta(double s) const {
    if (gaussian_) return (v_ * v_ * s * s - v_) * std::exp(-0.5 * s * s * v_);
    double acc = 0.0;
    for (std::size_t k = 0; k < wmu_.size(); ++k) {
        const double p = p_min_ + static_cast<double>(k) * dp_;
        acc -= wmu_[k] * p * p * std::cos(s * p);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// PsfModel
// ---------------------------------------------------------------------------

struct PsfModel::Impl {
    // Gaussian form
    bool gaussian = false;
    double sigma = 0.0;

    // grid form (centered, unit L2 norm)
    double x_min = 0.0;
    double dx = 0.0;
    std::vector<double> amp;
    std::unique_ptr<detail::CubicInterpolant> interp;

    double sigma_eff = 0.0;
    OverlapTable table = OverlapTable::gaussian(1.0);
};

bool PsfModel::is_gaussian() const { return impl_->gaussian; }

double PsfModel::sigma() const {
    if (!impl_->gaussian) throw InvalidParameterError("sigma(): not a Gaussian PSF");
    return impl_->sigma;
}

double PsfModel::sigma_eff() const { return impl_->sigma_eff; }

double PsfModel::amplitude(double x) const {
    if (impl_->gaussian) return gaussian_amp(impl_->sigma, x);
    return impl_->interp->value(x);
}

double PsfModel::amplitude_d1(double x) const {
    if (impl_->gaussian) {
        const double s2 = impl_->sigma * impl_->sigma;
        return -x / (2.0 * s2) * gaussian_amp(impl_->sigma, x);
    }
    return impl_->interp->d1(x);
}

double PsfModel::amplitude_d2(double x) const {
    if (impl_->gaussian) {
        const double s2 = impl_->sigma * impl_->sigma;
        return (x * x / (4.0 * s2 * s2) - 1.0 / (2.0 * s2)) * gaussian_amp(impl_->sigma, x);
    }
    return impl_->interp->d2(x);
}

double PsfModel::support_half_width() const {
    if (impl_->gaussian) return 12.0 * impl_->sigma;
    const double x_max = impl_->x_min + (static_cast<double>(impl_->amp.size()) - 1.0) * impl_->dx;
    return std::min(-impl_->x_min, x_max);
}

const OverlapTable& PsfModel::overlap() const { return impl_->table; }

double PsfModel::grid_x_min() const {
    if (impl_->gaussian) throw InvalidParameterError("grid_x_min(): not a grid PSF");
    return impl_->x_min;
}

double PsfModel::grid_dx() const {
    if (impl_->gaussian) throw InvalidParameterError("grid_dx(): not a grid PSF");
    return impl_->dx;
}

const std::vector<double>& PsfModel::grid_amplitude() const {
    if (impl_->gaussian) throw InvalidParameterError("grid_amplitude(): not a grid PSF");
    return impl_->amp;
}

const OverlapTable& overlap_table(const PsfModel& psf) { return psf.overlap(); }

PsfModel make_gaussian_psf(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw InvalidParameterError("make_gaussian_psf: sigma must be positive and finite");
    auto impl = std::make_shared<PsfModel::Impl>();
    impl->gaussian = true;
    impl->sigma = sigma;
    impl->sigma_eff = sigma;
    impl->table = OverlapTable::gaussian(sigma);
    return PsfModel(std::move(impl));
}

namespace {

// Cosine transform of the grid amplitude at the momenta p_k = k*dp,
// k = 0..np-1:  out[k] = sum_j w_j a_j cos(p_k x_j).
// Evaluated with per-x phase rotation instead of np*nx cos() calls; the
// rotation is resynchronised every 512 steps to stop error accumulation.
std::vector<double> cosine_transform(const std::vector<double>& wa,
                                     const std::vector<double>& xs, double dp,
                                     std::size_t np) {
    std::vector<double> out(np, 0.0);
    for (std::size_t j = 0; j < wa.size(); ++j) {
        if (wa[j] == 0.0) continue;
        const double x = xs[j];
        const double cstep = std::cos(dp * x);
        const double sstep = std::sin(dp * x);
        double c = 1.0, s = 0.0; // cos/sin of p_k * x
        for (std::size_t k = 0; k < np; ++k) {
            if ((k & 511u) == 0u) {
                const double a = dp * x * static_cast<double>(k);
                c = std::cos(a);
                s = std::sin(a);
            }
            out[k] += wa[j] * c;
            const double cn = c * cstep - s * sstep;
            s = s * cstep + c * sstep;
            c = cn;
        }
    }
    return out;
}

struct SpectralBuild {
    std::vector<double> wmu; // Simpson-weighted, unit-mass momentum density
    double p_min = 0.0;
    double dp = 0.0;
    double p2 = 0.0, p4 = 0.0, p6 = 0.0;
    bool tail_ok = false;
};

SpectralBuild build_spectral(const std::vector<double>& amp, double x_min, double dx,
                             double p_max, std::size_t half_np) {
    const std::size_t n = amp.size();
    std::vector<double> xs(n), wa(n);
    const auto w = detail::simpson_weights(n, dx);
    for (std::size_t j = 0; j < n; ++j) {
        xs[j] = x_min + static_cast<double>(j) * dx;
        wa[j] = w[j] * amp[j];
    }

    const double dp = p_max / static_cast<double>(half_np - 1);
    const auto psit = cosine_transform(wa, xs, dp, half_np); // p >= 0 half

    // mirror to the full symmetric grid [-p_max, p_max]
    const std::size_t np = 2 * half_np - 1;
    std::vector<double> mu(np);
    for (std::size_t k = 0; k < half_np; ++k) {
        const double m = psit[k] * psit[k]; // (2*pi) factor cancels in the ratio below
        mu[half_np - 1 + k] = m;
        mu[half_np - 1 - k] = m;
    }

    const auto wp = detail::simpson_weights(np, dp);
    double m0 = 0.0, m2 = 0.0, m4 = 0.0, m6 = 0.0;
    double tail = 0.0, total = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
        const double p = -p_max + static_cast<double>(k) * dp;
        const double c = wp[k] * mu[k];
        const double p2k = p * p;
        m0 += c;
        m2 += c * p2k;
        m4 += c * p2k * p2k;
        m6 += c * p2k * p2k * p2k;
        const double score = c * (1.0 + p2k * p2k * p2k);
        total += std::abs(score);
        if (std::abs(p) > 0.9 * p_max) tail += std::abs(score);
    }

    SpectralBuild out;
    if (!(m0 > 0.0) || !std::isfinite(m0))
        throw InvalidPsfError("make_grid_psf: momentum density has no mass");
    out.dp = dp;
    out.p_min = -p_max;
    out.p2 = m2 / m0;
    out.p4 = m4 / m0;
    out.p6 = m6 / m0;
    out.wmu.resize(np);
    for (std::size_t k = 0; k < np; ++k) out.wmu[k] = wp[k] * mu[k] / m0;
    out.tail_ok = tail <= 1e-13 * total;
    return out;
}

} // namespace

PsfModel make_grid_psf(double x_min, double dx, std::vector<double> amplitude) {
    const std::size_t n = amplitude.size();
    if (n < 9) throw InvalidPsfError("make_grid_psf: need at least 9 samples");
    if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x_min))
        throw InvalidPsfError("make_grid_psf: grid spacing must be positive and finite");
    for (double a : amplitude)
        if (!std::isfinite(a)) throw InvalidPsfError("make_grid_psf: non-finite amplitude");

    const auto w = detail::simpson_weights(n, dx);

    // centroid of the intensity; shift the grid so it sits at 0
    double norm2 = 0.0, first = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = x_min + static_cast<double>(j) * dx;
        const double q = w[j] * amplitude[j] * amplitude[j];
        norm2 += q;
        first += q * x;
    }
    if (!(norm2 > std::numeric_limits<double>::min()))
        throw InvalidPsfError("make_grid_psf: zero norm");
    x_min -= first / norm2;

    // renormalise to unit L2 norm
    const double scale = 1.0 / std::sqrt(norm2);
    for (double& a : amplitude) a *= scale;

    const double x_max = x_min + static_cast<double>(n - 1) * dx;
    const double amax = *std::max_element(amplitude.begin(), amplitude.end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });

    // even-symmetry check about the centroid. When the centered grid maps
    // nodes onto nodes the comparison is exact (tolerance 1e-10); otherwise
    // the mirror value is interpolated and the tolerance allows for the
    // interpolation error.
    const bool aligned = std::abs(x_min + x_max) < 1e-9 * dx;
    double asym = 0.0;
    if (aligned) {
        for (std::size_t j = 0; j < n; ++j)
            asym = std::max(asym, std::abs(amplitude[j] - amplitude[n - 1 - j]));
        if (asym > 1e-10 * std::abs(amax))
            throw InvalidPsfError("make_grid_psf: PSF is not even about its centroid");
    } else {
        detail::CubicInterpolant ip(x_min, dx, amplitude);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = x_min + static_cast<double>(j) * dx;
            if (-x < x_min || -x > x_max) continue;
            asym = std::max(asym, std::abs(amplitude[j] - ip.value(-x)));
        }
        if (asym > 1e-7 * std::abs(amax))
            throw InvalidPsfError("make_grid_psf: PSF is not even about its centroid");
    }

    // effective width and coverage warning
    double m2x = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = x_min + static_cast<double>(j) * dx;
        m2x += w[j] * amplitude[j] * amplitude[j] * x * x;
    }
    const double sigma_eff = std::sqrt(std::max(m2x, 0.0));
    if (sigma_eff > 0.0 && std::min(-x_min, x_max) < 8.0 * sigma_eff)
        std::cerr << "twopoint: warning: PSF grid covers less than +-8 sigma_eff; "
                     "recommend +-12 sigma_eff\n";

    // momentum-space table; extend p_max if the tail carries weight
    const double p_nyquist = kPi / dx;
    double p_max = std::min(p_nyquist, sigma_eff > 0.0 ? 6.0 / sigma_eff : p_nyquist);
    SpectralBuild sb;
    for (int attempt = 0; attempt < 3; ++attempt) {
        sb = build_spectral(amplitude, x_min, dx, p_max, 4097);
        if (sb.tail_ok || p_max >= p_nyquist) break;
        p_max = std::min(2.0 * p_max, p_nyquist);
    }
    if (!sb.tail_ok)
        std::cerr << "twopoint: warning: momentum density not resolved within the "
                     "Nyquist band of the PSF grid\n";

    auto impl = std::make_shared<PsfModel::Impl>();
    impl->gaussian = false;
    impl->x_min = x_min;
    impl->dx = dx;
    impl->amp = std::move(amplitude);
    impl->interp = std::make_unique<detail::CubicInterpolant>(x_min, dx, impl->amp);
    impl->sigma_eff = sigma_eff;
    impl->table = OverlapTable::spectral(std::move(sb.wmu), sb.p_min, sb.dp, sb.p2, sb.p4, sb.p6);
    return PsfModel(std::move(impl));
}

PsfModel load_psf_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_psf_file: cannot open '" + path + "'");
    std::vector<double> xs, as;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x, a;
        if (!(ss >> x)) continue; // blank or comment-only line
        if (!(ss >> a))
            throw InvalidPsfError("load_psf_file: line " + std::to_string(lineno) +
                                  ": expected two columns (x, amplitude)");
        double extra;
        if (ss >> extra)
            throw InvalidPsfError("load_psf_file: line " + std::to_string(lineno) +
                                  ": expected exactly two columns");
        xs.push_back(x);
        as.push_back(a);
    }
    if (xs.size() < 9) throw InvalidPsfError("load_psf_file: need at least 9 samples");

    const double dx = xs[1] - xs[0];
    if (!(dx > 0.0)) throw InvalidPsfError("load_psf_file: x must be strictly increasing");
    for (std::size_t j = 1; j < xs.size(); ++j) {
        const double step = xs[j] - xs[j - 1];
        if (std::abs(step - dx) > 1e-9 * std::abs(dx))
            throw InvalidPsfError("load_psf_file: non-uniform grid at line " +
                                  std::to_string(j + 1));
    }
    return make_grid_psf(xs[0], dx, std::move(as));
}

} // namespace twopoint
