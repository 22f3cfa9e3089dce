#include "twopoint/states.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

namespace twopoint {

namespace {

using cplx = std::complex<double>;

Eigen::Matrix2d gram2(const PsfModel& psf, double s) {
    const double d = psf.overlap().delta(s);
    Eigen::Matrix2d g;
    g << 1.0, d, d, 1.0;
    return g;
}

/// beta = Lambda^{1/2} V^dagger of the 2-ket Gram matrix: maps coefficient
/// matrices to the orthonormalised subspace, M = beta R beta^dagger.
Eigen::Matrix2d gram2_root(const PsfModel& psf, double s) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gram2(psf, s));
    Eigen::Vector2d lam = es.eigenvalues().cwiseMax(0.0);
    return lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

/// Stable N/2 = 1 + cos(phi) delta(s): the 1 - delta piece is evaluated
/// without cancellation, and 1 + cos(phi) = 2 cos^2(phi/2).
double half_norm(const PsfModel& psf, double s, double phi) {
    const auto& t = psf.overlap();
    const double om = t.one_minus_delta(s);
    const double cos_half = std::cos(0.5 * phi);
    const double gamma = 2.0 * cos_half * cos_half; // 1 + cos(phi)
    return om + (1.0 - om) * gamma;
}

} // namespace

double TwoPointState::phi() const {
    if (!pure_) throw InvalidParameterError("phi(): not a pure-form state");
    return pure_->phi;
}

double TwoPointState::norm() const {
    if (!pure_) throw InvalidParameterError("norm(): not a pure-form state");
    return pure_->norm;
}

Eigen::Matrix2cd TwoPointState::coefficient_matrix() const { return coeff_; }

Eigen::Matrix2cd TwoPointState::induced_density() const {
    const Eigen::Matrix2cd b = gram2_root(psf_, s_).cast<cplx>();
    return b * coeff_ * b.adjoint();
}

Eigen::Vector2d TwoPointState::induced_eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(induced_density());
    return es.eigenvalues();
}

TwoPointState superposition_state(const PsfModel& psf, double s, double phi) {
    if (!std::isfinite(s) || !std::isfinite(phi))
        throw InvalidParameterError("superposition_state: s and phi must be finite");
    const double norm = 2.0 * half_norm(psf, s, phi);
    if (norm < kDegeneracyEps)
        throw DegenerateStateError(
            "superposition_state: norm N = 2[1 + cos(phi) delta(s)] vanishes "
            "(destructive interference at vanishing separation)");
    TwoPointState st(psf, s, 0.0);
    st.pure_ = TwoPointState::PureData{phi, norm};
    const cplx e = std::exp(cplx(0.0, phi));
    st.coeff_ << cplx(1.0, 0.0), std::conj(e), e, cplx(1.0, 0.0);
    st.coeff_ /= norm;
    return st;
}

std::pair<SubEnsemble, SubEnsemble> sub_ensembles(const PsfModel& psf, double s,
                                                  double phi) {
    if (!std::isfinite(s) || !std::isfinite(phi))
        throw InvalidParameterError("sub_ensembles: s and phi must be finite");
    const double w1 = 0.5 * half_norm(psf, s, phi);
    const double w2 = 1.0 - w1;

    auto member = [&](double w, double member_phi) {
        SubEnsemble e;
        e.weight = w;
        e.phi = member_phi;
        e.degenerate = w < kDegeneracyEps;
        if (!e.degenerate) e.state = superposition_state(psf, s, member_phi);
        return e;
    };
    return {member(w1, phi), member(w2, phi + std::numbers::pi)};
}

TwoPointState incoherent_mixture(const PsfModel& psf, double s) {
    if (!std::isfinite(s)) throw InvalidParameterError("incoherent_mixture: s must be finite");
    TwoPointState st(psf, s, 0.0);
    st.coeff_ = 0.5 * Eigen::Matrix2cd::Identity();
    return st;
}

TwoPointState rank2_state(const PsfModel& psf, double s, double s0,
                          const Eigen::Matrix2cd& R, bool auto_normalize) {
    if (!std::isfinite(s) || !std::isfinite(s0))
        throw InvalidParameterError("rank2_state: s and s0 must be finite");
    if ((R - R.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw NotAStateError("rank2_state: R is not hermitian");

    Eigen::Matrix2cd Rh = 0.5 * (R + R.adjoint());
    const double tr = (Rh * gram2(psf, s).cast<cplx>()).trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
        if (!auto_normalize)
            throw NotAStateError("rank2_state: tr(R G) = " + std::to_string(tr) +
                                 ", expected 1 (pass auto_normalize to rescale)");
        if (tr < kDegeneracyEps)
            throw NotAStateError("rank2_state: tr(R G) is not positive");
        Rh /= tr;
    }

    TwoPointState st(psf, s, s0);
    st.coeff_ = Rh;
    if (st.induced_eigenvalues().minCoeff() < -1e-12)
        throw NotAStateError("rank2_state: induced density operator is not PSD");
    return st;
}

// ---------------------------------------------------------------------------
// EntangledState
// ---------------------------------------------------------------------------

EntangledState entangled_state(const PsfModel& psf, double s, double phi) {
    if (!std::isfinite(s) || !std::isfinite(phi))
        throw InvalidParameterError("entangled_state: s and phi must be finite");
    return EntangledState(psf, s, phi);
}

Eigen::Vector4cd EntangledState::coeffs_z_basis() const {
    const cplx e = std::exp(cplx(0.0, phi_));
    Eigen::Vector4cd c;
    c << 0.5, 0.5 * e, 0.5, -0.5 * e;
    return c;
}

Eigen::Vector2cd EntangledState::coeffs_x_basis() const {
    const cplx e = std::exp(cplx(0.0, phi_));
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Vector2cd c;
    c << r, r * e;
    return c;
}

double EntangledState::norm() const {
    const Eigen::Matrix2cd g = gram2(psf_, s_).cast<cplx>();
    Eigen::Matrix4cd g4 = Eigen::Matrix4cd::Zero();
    g4.topLeftCorner<2, 2>() = g;
    g4.bottomRightCorner<2, 2>() = g;
    const Eigen::Vector4cd c = coeffs_z_basis();
    return (c.adjoint() * g4 * c)(0, 0).real();
}

TwoPointState EntangledState::partial_trace() const {
    const Eigen::Vector4cd c = coeffs_z_basis();
    const Eigen::Matrix2cd R =
        c.head<2>() * c.head<2>().adjoint() + c.tail<2>() * c.tail<2>().adjoint();
    return rank2_state(psf_, s_, 0.0, R);
}

SubEnsemble EntangledState::project_qubit_up() const {
    return sub_ensembles(psf_, s_, phi_).first;
}

SubEnsemble EntangledState::project_qubit_down() const {
    return sub_ensembles(psf_, s_, phi_).second;
}

} // namespace twopoint
