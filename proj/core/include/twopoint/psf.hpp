#pragma once

#include <memory>
#include <string>
#include <vector>

#include "twopoint/errors.hpp"

namespace twopoint {

/// Overlap function delta(s) = <Psi| e^{isP} |Psi> of a PSF with itself,
/// its first two derivatives, and the even momentum moments <P^2>, <P^4>,
/// <P^6>. Every downstream Fisher-information formula consumes only these
/// quantities.
///
/// For the analytic Gaussian, closed forms are used:
///   delta(s) = exp(-s^2 v / 2),  p2 = v,  p4 = 3 v^2,  p6 = 15 v^3,
/// with v = 1/(4 sigma^2). For sampled PSFs the momentum density
/// mu(p) = |Psi~(p)|^2 is tabulated once and delta and its derivatives are
/// evaluated spectrally (e^{isP} is diagonal in the frequency domain).
class OverlapTable {
public:
    double delta(double s) const;
    double ddelta(double s) const;
    double d2delta(double s) const;

    /// 1 - delta(s) without cancellation; the quantity that actually enters
    /// the near-degenerate QFI formulas.
    double one_minus_delta(double s) const;

    double p2() const { return p2_; }
    double p4() const { return p4_; }
    double p6() const { return p6_; }

    static OverlapTable gaussian(double sigma);

    /// Builds a table from a Simpson-weighted momentum density sampled on
    /// the uniform grid p_i = p_min + i*dp (weights folded into the values;
    /// sum of values = 1).
    static OverlapTable spectral(std::vector<double> weighted_mu,
                                 double p_min, double dp,
                                 double p2, double p4, double p6);

private:
    OverlapTable() = default;

    bool gaussian_ = true;
    double v_ = 0.0; // (Delta P)^2 of the Gaussian

    // grid variant: momentum density on a symmetric uniform p-grid,
    // premultiplied by Simpson weights and normalised to unit mass
    std::vector<double> wmu_; // Simpson-weighted mu values
    double p_min_ = 0.0;
    double dp_ = 0.0;

    double p2_ = 0.0, p4_ = 0.0, p6_ = 0.0;
};

/// Amplitude point-spread function Psi(x): real, even, unit L2 norm.
/// Either an analytic Gaussian or a sampled uniform grid. Immutable after
/// construction; cheap to copy (shared internals).
class PsfModel {
public:
    bool is_gaussian() const;

    /// Gaussian width parameter; throws for grid models.
    double sigma() const;

    /// sqrt(<x^2>) of the intensity |Psi|^2; equals sigma for the Gaussian.
    double sigma_eff() const;

    /// Psi(x). Grid models are interpolated (cubic); zero outside the grid.
    double amplitude(double x) const;
    double amplitude_d1(double x) const;
    double amplitude_d2(double x) const;

    /// Half-width of the stored grid (after centering); +inf semantics do
    /// not apply: the Gaussian reports 12 sigma as its effective support.
    double support_half_width() const;

    const OverlapTable& overlap() const;

    // grid access (grid models only; throws otherwise)
    double grid_x_min() const;
    double grid_dx() const;
    const std::vector<double>& grid_amplitude() const;

private:
    friend PsfModel make_gaussian_psf(double);
    friend PsfModel make_grid_psf(double, double, std::vector<double>);
    struct Impl;
    explicit PsfModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Analytic Gaussian PSF with (Delta X)^2 = sigma^2 and
/// (Delta P)^2 = 1/(4 sigma^2).
/// Throws InvalidParameterError for sigma <= 0.
PsfModel make_gaussian_psf(double sigma);

/// Sampled PSF on a uniform grid x_i = x_min + i*dx. The samples are
/// centered (intensity centroid shifted to zero), checked for even
/// symmetry, and renormalised to unit L2 norm.
///
/// Throws InvalidPsfError for: fewer than 9 samples, non-finite values,
/// zero norm, or asymmetry beyond tolerance. Emits a warning to stderr if
/// the grid covers less than +-8 sigma_eff.
PsfModel make_grid_psf(double x_min, double dx, std::vector<double> amplitude);

/// Reads a two-column (x, amplitude) whitespace-separated text file with
/// '#' comments and builds a grid PSF. Non-uniform grids are rejected.
PsfModel load_psf_file(const std::string& path);

/// Overlap table of a PSF (built at PSF construction; returned by
/// reference here).
const OverlapTable& overlap_table(const PsfModel& psf);

} // namespace twopoint
