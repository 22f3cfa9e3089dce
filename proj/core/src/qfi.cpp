#include "twopoint/qfi.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

namespace twopoint {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

/// Threshold on N/2 = 1 + cos(phi) delta below which the closed form loses
/// too many digits and the expansion takes over.
constexpr double kSeriesGuard = 1e-6;

/// Eigenvalue-sum cutoff in the SLD equation.
constexpr double kSldCutoff = 1e-12;

double sq(double x) { return x * x; }

/// 1 + cos(phi), exact near phi = pi.
double one_plus_cos(double phi) { return 2.0 * sq(std::cos(0.5 * phi)); }

} // namespace

const char* to_string(QfiMethod m) {
    switch (m) {
        case QfiMethod::closed_form: return "closed-form";
        case QfiMethod::series: return "series";
        case QfiMethod::sld_subspace: return "sld-subspace";
        case QfiMethod::finite_difference: return "finite-difference";
    }
    return "unknown";
}

QfiResult::QfiResult(std::vector<std::string> params, Eigen::MatrixXd value,
                     QfiMethod method, QfiContext ctx)
    : params_(std::move(params)), value_(std::move(value)), method_(method),
      ctx_(ctx) {
    const auto n = value_.rows();
    if (n != value_.cols() || static_cast<std::size_t>(n) != params_.size())
        throw InvalidParameterError("QfiResult: shape/label mismatch");
    if (n == 1) {
        if (value_(0, 0) < 0.0) {
            if (value_(0, 0) < -1e-8)
                throw InvalidParameterError("QfiResult: negative scalar QFI");
            value_(0, 0) = 0.0;
        }
        return;
    }
    const double scale = std::max(1.0, value_.cwiseAbs().maxCoeff());
    if ((value_ - value_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidParameterError("QfiResult: matrix not symmetric");
    value_ = 0.5 * (value_ + value_.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(value_);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw InvalidParameterError("QfiResult: matrix not PSD");
}

double QfiResult::scalar() const {
    if (value_.rows() != 1)
        throw InvalidParameterError("QfiResult::scalar(): matrix-valued result");
    return value_(0, 0);
}

ParamSpec ParamSpec::separation() { return ParamSpec(Kind::separation, "s"); }

ParamSpec ParamSpec::centroid() { return ParamSpec(Kind::centroid, "s0"); }

ParamSpec ParamSpec::coefficient(const Eigen::Matrix2cd& dR, std::string label) {
    if ((dR - dR.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidParameterError("ParamSpec::coefficient: direction must be hermitian");
    ParamSpec p(Kind::coefficient, std::move(label));
    p.dR_ = dR;
    return p;
}

// ---------------------------------------------------------------------------
// qfi_pure
// ---------------------------------------------------------------------------

QfiResult qfi_pure(const TwoPointState& state) {
    if (!state.is_pure())
        throw InvalidParameterError("qfi_pure: state is not in pure form");
    const auto& t = state.psf().overlap();
    const double s = state.s();
    const double phi = state.phi();

    const double om = t.one_minus_delta(s);
    const double d = 1.0 - om;
    const double d1 = t.ddelta(s);
    const double d2 = t.d2delta(s);
    const double p2 = t.p2();
    const double g = one_plus_cos(phi);
    const double c = std::cos(phi);
    const double D = om + d * g; // 1 + cos(phi) delta, cancellation-free

    if (2.0 * D < kDegeneracyEps)
        throw DegenerateStateError("qfi_pure: degenerate state (N -> 0)");

    QfiContext ctx{s, state.s0(), phi};

    if (D >= kSeriesGuard) {
        // F = (p2 + c d'') / D - c^2 d'^2 / D^2, with the first numerator
        // assembled as (p2 - d'') + g d'' so it stays stable for c near -1.
        const double term1 = ((p2 - d2) + g * d2) / D;
        const double term2 = sq(c * d1) / sq(D);
        Eigen::MatrixXd v(1, 1);
        v(0, 0) = term1 - term2;
        return QfiResult({"s"}, v, QfiMethod::closed_form, ctx);
    }

    // Dark-fringe regime: both closed-form terms are ~2 p2 / D while their
    // difference is O(s^2). Use F = E / D^2 with E expanded in
    // gamma = 1 + cos(phi):
    //   E(c)  = p2 + c (d'' + p2 d) + c^2 (d d'' - d'^2)
    //         = E(-1) + gamma A + gamma^2 B,
    //   A     = (d'' + p2 d) - 2 B,   B = d d'' - d'^2,
    // and E(-1) = (1-d)(p2 - d'') - d'^2 by its moment series,
    //   E(-1) = (p2 p6 - p4^2) s^6 / 144 + O(s^8),
    // which carries the three cancelling orders analytically. Inside the
    // guard (s^2 p2 < ~2e-6) the truncation is at relative O(s^2).
    const double B = d * d2 - d1 * d1;
    const double A = (d2 + p2 * d) - 2.0 * B;
    const double s2 = s * s;
    const double e_minus = (p2 * t.p6() - sq(t.p4())) * s2 * s2 * s2 / 144.0;
    const double E = e_minus + g * A + g * g * B;
    Eigen::MatrixXd v(1, 1);
    v(0, 0) = E / sq(D);
    return QfiResult({"s"}, v, QfiMethod::series, ctx);
}

double qfi_zero_separation(const PsfModel& psf, double phi) {
    const double r = std::remainder(phi - kPi, 2.0 * kPi);
    if (std::abs(r) < 1e-9)
        throw DivergingLimitError(
            "qfi_zero_separation: F diverges for phi -> pi at s = 0; "
            "limiting law F(0) = tan^2(phi/2) <P^2>");
    const double tn = std::tan(0.5 * phi);
    return tn * tn * psf.overlap().p2();
}

SmallSCoefficients qfi_small_s_coefficients(const PsfModel& psf) {
    const auto& t = psf.overlap();
    const double p2 = t.p2(), p4 = t.p4(), p6 = t.p6();
    return {(p6 * p2 - p4 * p4) / (36.0 * p2 * p2), (p4 - p2 * p2) / 4.0};
}

// ---------------------------------------------------------------------------
// SLD in the overlap subspace
// ---------------------------------------------------------------------------

namespace {

/// Gram matrix of {|Psi+>, |Psi->, P|Psi+>, P|Psi->}; every entry is a
/// value of delta, its derivatives, or <P^2> (the common centroid phase
/// cancels in all inner products).
Eigen::Matrix4cd gram4(const OverlapTable& t, double s) {
    const double d = t.delta(s);
    const double d1 = t.ddelta(s);
    const double d2 = t.d2delta(s);
    const double p2 = t.p2();
    const cplx i(0.0, 1.0);
    Eigen::Matrix4cd g;
    g << 1.0, d, 0.0, i * d1,
         d, 1.0, -i * d1, 0.0,
         0.0, i * d1, p2, -d2,
        -i * d1, 0.0, -d2, p2;
    return g;
}

/// Ket-motion map of a parameter: column j of the returned matrix holds
/// the coefficients of d|b_j> in the basis itself.
Eigen::Matrix4cd derivative_map(ParamSpec::Kind kind) {
    Eigen::Matrix4cd dc = Eigen::Matrix4cd::Zero();
    const cplx i(0.0, 1.0);
    if (kind == ParamSpec::Kind::separation) {
        dc(2, 0) = 0.5 * i;  // d/ds |Psi+> = +(i/2) P |Psi+>
        dc(3, 1) = -0.5 * i; // d/ds |Psi-> = -(i/2) P |Psi->
    } else {
        dc(2, 0) = i; // d/ds0 |Psi+-> = i P |Psi+->
        dc(3, 1) = i;
    }
    return dc;
}

} // namespace

QfiResult qfi_rank2(const TwoPointState& state, const std::vector<ParamSpec>& params) {
    if (params.empty())
        throw InvalidParameterError("qfi_rank2: parameter list is empty");

    const auto& t = state.psf().overlap();
    const double s = state.s();
    const Eigen::Matrix4cd G = gram4(t, s);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> ges(G);
    const double gmax = ges.eigenvalues().maxCoeff();
    int rank = 0;
    for (int k = 0; k < 4; ++k)
        if (ges.eigenvalues()(k) > 1e-13 * gmax) ++rank;
    // beta = Lambda^{1/2} V^dagger restricted to the kept directions
    Eigen::MatrixXcd beta(rank, 4);
    {
        int r = 0;
        for (int k = 0; k < 4; ++k) {
            if (ges.eigenvalues()(k) <= 1e-13 * gmax) continue;
            beta.row(r++) = std::sqrt(ges.eigenvalues()(k)) *
                            ges.eigenvectors().col(k).adjoint();
        }
    }

    Eigen::Matrix4cd C = Eigen::Matrix4cd::Zero();
    C.topLeftCorner<2, 2>() = state.coefficient_matrix();

    const Eigen::MatrixXcd rho = beta * C * beta.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> res(rho);
    const Eigen::VectorXd lam = res.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd U = res.eigenvectors();

    const auto n = static_cast<int>(params.size());
    std::vector<Eigen::MatrixXcd> sld(params.size());
    std::vector<std::string> labels;
    labels.reserve(params.size());

    for (int a = 0; a < n; ++a) {
        const auto& p = params[static_cast<std::size_t>(a)];
        labels.push_back(p.label());

        Eigen::Matrix4cd Cd;
        if (p.kind() == ParamSpec::Kind::coefficient) {
            Cd = Eigen::Matrix4cd::Zero();
            Cd.topLeftCorner<2, 2>() = p.dR();
        } else {
            const Eigen::Matrix4cd dc = derivative_map(p.kind());
            Cd = dc * C + C * dc.adjoint();
        }
        // keep the family trace-preserving: d rho -> d rho - rho tr(d rho)
        const double trd = (G * Cd).trace().real();
        Cd -= trd * C;

        const Eigen::MatrixXcd drho = beta * Cd * beta.adjoint();
        const Eigen::MatrixXcd A = U.adjoint() * drho * U;
        Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(rank, rank);
        for (int j = 0; j < rank; ++j)
            for (int k = 0; k < rank; ++k) {
                const double den = lam(j) + lam(k);
                if (den >= kSldCutoff) L(j, k) = 2.0 * A(j, k) / den;
            }
        sld[static_cast<std::size_t>(a)] = std::move(L);
    }

    Eigen::MatrixXd F(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            cplx acc = 0.0;
            for (int j = 0; j < rank; ++j)
                for (int k = 0; k < rank; ++k)
                    acc += lam(j) * sld[static_cast<std::size_t>(a)](j, k) *
                           sld[static_cast<std::size_t>(b)](k, j);
            F(a, b) = acc.real();
            F(b, a) = F(a, b);
        }

    QfiContext ctx{s, state.s0(), state.is_pure() ? std::optional<double>(state.phi())
                                                  : std::nullopt};
    return QfiResult(std::move(labels), std::move(F), QfiMethod::sld_subspace, ctx);
}

// ---------------------------------------------------------------------------
// qfi_entangled
// ---------------------------------------------------------------------------

QfiResult qfi_entangled(const PsfModel& psf, double s, double phi) {
    const EntangledState ent = entangled_state(psf, s, phi);
    const Eigen::Matrix4cd G = gram4(psf.overlap(), s);

    // coefficients over {b_j (x) up_z, b_j (x) down_z}, b = the 4 spatial kets
    const Eigen::Vector4cd cz = ent.coeffs_z_basis();
    Eigen::Vector4cd c_up = Eigen::Vector4cd::Zero();
    Eigen::Vector4cd c_dn = Eigen::Vector4cd::Zero();
    c_up.head<2>() = cz.head<2>();
    c_dn.head<2>() = cz.tail<2>();

    const Eigen::Matrix4cd dmap = derivative_map(ParamSpec::Kind::separation);
    const Eigen::Vector4cd dc_up = dmap * c_up;
    const Eigen::Vector4cd dc_dn = dmap * c_dn;

    auto dot = [&G](const Eigen::Vector4cd& a, const Eigen::Vector4cd& b) {
        return cplx((a.adjoint() * G * b)(0, 0));
    };
    const double nrm = (dot(c_up, c_up) + dot(c_dn, c_dn)).real();
    const double dd = (dot(dc_up, dc_up) + dot(dc_dn, dc_dn)).real();
    const cplx cd = dot(c_up, dc_up) + dot(c_dn, dc_dn);

    Eigen::MatrixXd v(1, 1);
    v(0, 0) = 4.0 * (dd / nrm - std::norm(cd) / (nrm * nrm));
    return QfiResult({"s"}, v, QfiMethod::closed_form, QfiContext{s, 0.0, phi});
}

// ---------------------------------------------------------------------------
// qfi_sorted_total
// ---------------------------------------------------------------------------

QfiResult qfi_sorted_total(const PsfModel& psf, double s, double phi) {
    if (!std::isfinite(s) || !std::isfinite(phi))
        throw InvalidParameterError("qfi_sorted_total: s and phi must be finite");
    const auto& t = psf.overlap();
    const double om = t.one_minus_delta(s);
    const double d = 1.0 - om;
    const double d1 = t.ddelta(s);
    const double p2 = t.p2();
    const double c = std::cos(phi);
    const double sn = std::sin(phi);

    // F_tot = p2 - c^2 d'^2 / (1 - c^2 d^2); the denominator is assembled
    // from 1 - d and sin^2(phi) so it never cancels. Both numerator and
    // denominator vanish only at s = 0 with phi in {0, pi}, where the
    // weighted sum has the finite limit 0.
    const double denom = om * (1.0 + d) + d * d * sn * sn;
    const double numer = sq(c * d1);
    double f = 0.0;
    if (denom > 0.0) f = std::max(p2 - numer / denom, 0.0);

    Eigen::MatrixXd v(1, 1);
    v(0, 0) = f;
    return QfiResult({"s"}, v, QfiMethod::closed_form, QfiContext{s, 0.0, phi});
}

} // namespace twopoint
