#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>

#include "twopoint/psf.hpp"

namespace twopoint {

/// Norms and weights below this are treated as degenerate.
inline constexpr double kDegeneracyEps = 1e-12;

/// Coherence matrix of two PSF copies shifted to s0 +- s/2, expressed in
/// the non-orthogonal ket pair {|Psi+>, |Psi->}. Either the pure
/// superposition |Psi+> + e^{i phi}|Psi-> or a generic rank-2 coefficient
/// matrix R with tr(R G) = 1, G = [[1, delta(s)], [delta(s), 1]].
class TwoPointState {
public:
    const PsfModel& psf() const { return psf_; }
    double s() const { return s_; }
    double s0() const { return s0_; }

    bool is_pure() const { return pure_.has_value(); }
    double phi() const;  // pure form only
    double norm() const; // pure form only: N = 2[1 + cos(phi) delta(s)]

    /// Coefficient matrix in the {|Psi+>, |Psi->} basis. For the pure form
    /// this is the rank-1 matrix [[1, e^{-i phi}], [e^{i phi}, 1]] / N.
    Eigen::Matrix2cd coefficient_matrix() const;

    /// Density matrix in the orthonormalised 2-ket subspace
    /// (hermitian, trace 1, PSD).
    Eigen::Matrix2cd induced_density() const;

    /// Eigenvalues of the induced density operator, ascending.
    Eigen::Vector2d induced_eigenvalues() const;

private:
    friend TwoPointState superposition_state(const PsfModel&, double, double);
    friend TwoPointState incoherent_mixture(const PsfModel&, double);
    friend TwoPointState rank2_state(const PsfModel&, double, double,
                                     const Eigen::Matrix2cd&, bool);
    struct PureData {
        double phi;
        double norm;
    };
    TwoPointState(PsfModel psf, double s, double s0) : psf_(std::move(psf)), s_(s), s0_(s0) {}

    PsfModel psf_;
    double s_ = 0.0;
    double s0_ = 0.0;
    std::optional<PureData> pure_;
    Eigen::Matrix2cd coeff_ = Eigen::Matrix2cd::Zero();
};

/// One of the two qubit-conditioned channels: a pure coherent state plus
/// its probability of occurrence. A member whose weight falls below the
/// degeneracy threshold carries no state and is flagged; the QFI engine
/// assigns it zero contribution.
struct SubEnsemble {
    std::optional<TwoPointState> state;
    double weight = 0.0;
    double phi = 0.0;
    bool degenerate = false;
};

/// Composite system-qubit ket
///   2^{-1/2} (|Psi+> (x) |up_x> + e^{i phi} |Psi-> (x) |down_x>)
///          =  |Phi_1> (x) |up_z> + |Phi_2> (x) |down_z>.
class EntangledState {
public:
    const PsfModel& psf() const { return psf_; }
    double s() const { return s_; }
    double phi() const { return phi_; }

    /// Coefficients over {Psi+ up_z, Psi- up_z, Psi+ down_z, Psi- down_z}.
    Eigen::Vector4cd coeffs_z_basis() const;

    /// Coefficients over {Psi+ (x) up_x, Psi- (x) down_x}.
    Eigen::Vector2cd coeffs_x_basis() const;

    /// <state|state>; equals 1 by construction.
    double norm() const;

    /// Qubit traced out: the incoherent mixture as a rank-2 state.
    TwoPointState partial_trace() const;

    /// Conditioning on a z-basis qubit outcome: the corresponding
    /// sub-ensemble with its weight.
    SubEnsemble project_qubit_up() const;
    SubEnsemble project_qubit_down() const;

private:
    friend EntangledState entangled_state(const PsfModel&, double, double);
    EntangledState(PsfModel psf, double s, double phi)
        : psf_(std::move(psf)), s_(s), phi_(phi) {}
    PsfModel psf_;
    double s_;
    double phi_;
};

/// The pure superposition (1/sqrt(N)) (|Psi+> + e^{i phi}|Psi->).
/// Throws DegenerateStateError when N = 2[1 + cos(phi) delta(s)] < eps
/// (destructive interference at vanishing separation).
TwoPointState superposition_state(const PsfModel& psf, double s, double phi);

/// The two sorted channels for (s, phi): weights (1 +- cos(phi) delta)/2,
/// the second member at phase phi + pi. Degenerate members are flagged,
/// never fatal.
std::pair<SubEnsemble, SubEnsemble> sub_ensembles(const PsfModel& psf, double s,
                                                  double phi);

/// Equal-weight mixture of the two shifted PSFs: R = diag(1/2, 1/2).
TwoPointState incoherent_mixture(const PsfModel& psf, double s);

/// Generic rank-2 state with coefficient matrix R at centroid s0.
/// R must be hermitian; tr(R G) must equal 1 (or pass auto_normalize to
/// rescale); the induced density operator must be PSD.
TwoPointState rank2_state(const PsfModel& psf, double s, double s0,
                          const Eigen::Matrix2cd& R, bool auto_normalize = false);

/// The system-qubit composite; never degenerate.
EntangledState entangled_state(const PsfModel& psf, double s, double phi);

} // namespace twopoint
