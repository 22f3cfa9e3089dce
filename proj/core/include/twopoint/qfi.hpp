#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "twopoint/states.hpp"

namespace twopoint {

enum class QfiMethod {
    closed_form,      ///< analytic expression in delta and its derivatives
    series,           ///< guarded expansion near the dark-fringe singularity
    sld_subspace,     ///< symmetric logarithmic derivative in the overlap subspace
    finite_difference ///< numeric derivative (test oracles only)
};

const char* to_string(QfiMethod m);

struct QfiContext {
    double s = 0.0;
    double s0 = 0.0;
    std::optional<double> phi;
};

/// Scalar QFI or multi-parameter QFI matrix with parameter labels.
/// Matrices are symmetric PSD; scalars are non-negative.
class QfiResult {
public:
    QfiResult(std::vector<std::string> params, Eigen::MatrixXd value,
              QfiMethod method, QfiContext ctx);

    /// Scalar value; throws for genuine matrices.
    double scalar() const;

    const Eigen::MatrixXd& matrix() const { return value_; }
    const std::vector<std::string>& params() const { return params_; }
    QfiMethod method() const { return method_; }
    const QfiContext& context() const { return ctx_; }

private:
    std::vector<std::string> params_;
    Eigen::MatrixXd value_;
    QfiMethod method_;
    QfiContext ctx_;
};

/// A parameter of a rank-2 family together with its analytic state
/// derivative. Separation and centroid move the kets (through the momentum
/// operator); coefficient parameters move R with the kets fixed.
class ParamSpec {
public:
    enum class Kind { separation, centroid, coefficient };

    static ParamSpec separation();
    static ParamSpec centroid();
    static ParamSpec coefficient(const Eigen::Matrix2cd& dR, std::string label);

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    const Eigen::Matrix2cd& dR() const { return dR_; }

private:
    ParamSpec(Kind k, std::string label) : kind_(k), label_(std::move(label)) {}
    Kind kind_;
    std::string label_;
    Eigen::Matrix2cd dR_ = Eigen::Matrix2cd::Zero();
};

/// QFI of the pure superposition for the separation:
///   F = (p2 + cos(phi) delta'') / (1 + cos(phi) delta)
///       - cos^2(phi) delta'^2 / (1 + cos(phi) delta)^2.
/// Near the dark fringe (1 + cos(phi) delta < 1e-6) the evaluation
/// switches to an expansion in gamma = 1 + cos(phi) and s that carries the
/// cancellation analytically.
QfiResult qfi_pure(const TwoPointState& state);

/// F(s=0) = tan^2(phi/2) p2 for phi != pi. Throws DivergingLimitError at
/// phi = pi (mod 2pi), where the zero-separation QFI diverges.
double qfi_zero_separation(const PsfModel& psf, double phi);

/// Leading small-s coefficients: F_pi(s) ~ c_pi s^2 with
/// c_pi = (p6 p2 - p4^2) / (36 p2^2), and F_0(s) ~ c_0 s^2 with
/// c_0 = (p4 - p2^2)/4 (the variance of P^2, over 4).
struct SmallSCoefficients {
    double c_pi;
    double c_0;
};
SmallSCoefficients qfi_small_s_coefficients(const PsfModel& psf);

/// SLD-based QFI (matrix) of a rank-2 (or pure) state for the given
/// parameters, computed in the orthonormalised subspace spanned by
/// {|Psi+>, |Psi->, P|Psi+>, P|Psi->}.
QfiResult qfi_rank2(const TwoPointState& state, const std::vector<ParamSpec>& params);

/// QFI of the system-qubit composite for the separation; equals p2 for
/// every (s, phi).
QfiResult qfi_entangled(const PsfModel& psf, double s, double phi);

/// Probability-weighted total QFI of the two sorted channels,
///   F_tot = p2 - cos^2(phi) delta'^2 / (1 - cos^2(phi) delta^2),
/// bounded by p2 and finite even where one member diverges.
QfiResult qfi_sorted_total(const PsfModel& psf, double s, double phi);

} // namespace twopoint
