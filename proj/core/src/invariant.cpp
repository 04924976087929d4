#include "holopulse/invariant.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace holopulse {

using std::complex;
namespace {

constexpr complex<double> kI{0.0, 1.0};

// |beta_dot / sin(gamma)| above this within the series window means the
// inputs cannot come from a consistent boundary limit.
constexpr double kBoundaryRateBound = 1e3;  // rad/ns

// Relative slack for segment-interval membership tests.
constexpr double kTimeSlack = 1e-9;

void check_lambda(const InvariantParams& p) {
    if (!(p.lambda > 0.0))
        throw DomainError("invariant: lambda must be positive");
}

void check_segment_time(double t, double T, int segment) {
    if (T <= 0.0) throw DomainError("invariant: total duration T must be positive");
    if (segment != 1 && segment != 2)
        throw DomainError("invariant: segment must be 1 or 2");
    const double slack = kTimeSlack * T;
    const double lo = segment == 1 ? 0.0 : T / 2.0;
    const double hi = segment == 1 ? T / 2.0 : T;
    if (t < lo - slack || t > hi + slack) {
        std::ostringstream msg;
        msg << "invariant: t = " << t << " outside segment " << segment
            << " interval [" << lo << ", " << hi << "]";
        throw DomainError(msg.str());
    }
}

}  // namespace

Eigen::Matrix3cd LambdaHamiltonian::matrix() const {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    const complex<double> c01 = 0.5 * omega0;
    const complex<double> c12 = 0.5 * omega1 * std::exp(-kI * phi);
    h(0, 1) = c01;
    h(1, 0) = std::conj(c01);
    h(1, 2) = c12;
    h(2, 1) = std::conj(c12);
    return h;
}

int segment_of(double t, double T) {
    if (T <= 0.0) throw DomainError("segment_of: T must be positive");
    if (t < -kTimeSlack * T || t > T * (1.0 + kTimeSlack))
        throw DomainError("segment_of: t outside [0, T]");
    return t < T / 2.0 ? 1 : 2;
}

double gamma_profile(double t, double A, double T, int segment) {
    check_segment_time(t, T, segment);
    if (A <= 0.0) throw DomainError("gamma_profile: amplitude A must be positive");
    const double q = T / 4.0;
    const double scale = A / (q * q * q * q);
    if (segment == 1) {
        const double a = t;
        const double b = t - T / 2.0;
        return -scale * a * a * b * b;
    }
    const double a = t - T / 2.0;
    const double b = t - T;
    return scale * a * a * b * b;
}

double gamma_profile_rate(double t, double A, double T, int segment) {
    check_segment_time(t, T, segment);
    if (A <= 0.0) throw DomainError("gamma_profile_rate: amplitude A must be positive");
    const double q = T / 4.0;
    const double scale = A / (q * q * q * q);
    if (segment == 1) {
        const double a = t;
        const double b = t - T / 2.0;
        return -scale * 2.0 * a * b * (a + b);
    }
    const double a = t - T / 2.0;
    const double b = t - T;
    return scale * 2.0 * a * b * (a + b);
}

double beta_profile(double t, double theta, double T, int segment) {
    check_segment_time(t, T, segment);
    const double h = T / 2.0;
    const double u = segment == 1 ? (h - t) / h : (t - h) / h;
    const double u3 = u * u * u;
    const double u4 = u3 * u;
    return 35.0 * theta *
           (u4 / 4.0 - 3.0 * u4 * u / 5.0 + u4 * u * u / 2.0 - u4 * u3 / 7.0);
}

double beta_profile_rate(double t, double theta, double T, int segment) {
    check_segment_time(t, T, segment);
    const double h = T / 2.0;
    const double u = segment == 1 ? (h - t) / h : (t - h) / h;
    const double du = segment == 1 ? -1.0 / h : 1.0 / h;
    const double omu = 1.0 - u;
    // d beta / du = 35 theta u^3 (1-u)^3
    return 35.0 * theta * u * u * u * omu * omu * omu * du;
}

InvariantParams invariant_params_at(double t, double theta, double phi,
                                    double A, double T) {
    const int seg = segment_of(t, T);
    InvariantParams p;
    p.gamma = gamma_profile(t, A, T, seg);
    p.beta = beta_profile(t, theta, T, seg);
    p.gamma_dot = gamma_profile_rate(t, A, T, seg);
    p.beta_dot = beta_profile_rate(t, theta, T, seg);
    p.phi = seg == 1 ? phi : phi + std::numbers::pi;
    return p;
}

Couplings couplings_from_invariant(const InvariantParams& p) {
    if (!std::isfinite(p.gamma) || !std::isfinite(p.beta) ||
        !std::isfinite(p.gamma_dot) || !std::isfinite(p.beta_dot))
        throw DomainError("couplings_from_invariant: non-finite parameters");

    const double sg = std::sin(p.gamma);
    const double cg = std::cos(p.gamma);
    double cot_term;  // beta_dot * cot(gamma)
    if (std::abs(p.gamma) < kGammaSeriesThreshold) {
        // Boundary window: the ratio must stay bounded for the limit to exist.
        if (std::abs(p.beta_dot) > kBoundaryRateBound * std::abs(sg))
            throw SingularityError(
                "couplings_from_invariant: beta_dot does not vanish with "
                "sin(gamma); couplings diverge");
        cot_term = sg == 0.0 ? 0.0 : p.beta_dot * cg / sg;
    } else {
        cot_term = p.beta_dot * cg / sg;
    }

    const double sb = std::sin(p.beta);
    const double cb = std::cos(p.beta);
    return {2.0 * (cot_term * sb + p.gamma_dot * cb),
            2.0 * (cot_term * cb - p.gamma_dot * sb)};
}

Eigen::Matrix3cd invariant_at(const InvariantParams& p) {
    check_lambda(p);
    const double sg = std::sin(p.gamma);
    const double cg = std::cos(p.gamma);
    const double sb = std::sin(p.beta);
    const double cb = std::cos(p.beta);
    const complex<double> ph = std::exp(kI * p.phi);

    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(0, 1) = cg * sb;
    m(0, 2) = -kI * sg * std::conj(ph);
    m(1, 2) = cg * cb * std::conj(ph);
    m(1, 0) = std::conj(m(0, 1));
    m(2, 0) = std::conj(m(0, 2));
    m(2, 1) = std::conj(m(1, 2));
    return 0.5 * p.lambda * m;
}

Eigen::Matrix3cd invariant_rate_at(const InvariantParams& p) {
    check_lambda(p);
    const double sg = std::sin(p.gamma);
    const double cg = std::cos(p.gamma);
    const double sb = std::sin(p.beta);
    const double cb = std::cos(p.beta);
    const complex<double> ph = std::exp(kI * p.phi);

    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(0, 1) = -sg * sb * p.gamma_dot + cg * cb * p.beta_dot;
    m(0, 2) = -kI * cg * p.gamma_dot * std::conj(ph);
    m(1, 2) = (-sg * cb * p.gamma_dot - cg * sb * p.beta_dot) * std::conj(ph);
    m(1, 0) = std::conj(m(0, 1));
    m(2, 0) = std::conj(m(0, 2));
    m(2, 1) = std::conj(m(1, 2));
    return 0.5 * p.lambda * m;
}

DressedFrame dressed_states_at(const InvariantParams& p) {
    check_lambda(p);
    const double sg = std::sin(p.gamma);
    const double cg = std::cos(p.gamma);
    const double sb = std::sin(p.beta);
    const double cb = std::cos(p.beta);
    const complex<double> ph = std::exp(kI * p.phi);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

    DressedFrame f;
    f.phi0 << cg * cb, -kI * sg, -cg * sb * ph;
    f.phi_plus << inv_sqrt2 * (sg * cb + kI * sb), inv_sqrt2 * kI * cg,
        inv_sqrt2 * (-sg * sb + kI * cb) * ph;
    f.phi_minus << inv_sqrt2 * (sg * cb - kI * sb), inv_sqrt2 * kI * cg,
        inv_sqrt2 * (-sg * sb - kI * cb) * ph;
    return f;
}

double invariant_residual(const InvariantParams& p,
                          const Eigen::Matrix3cd& hamiltonian) {
    const Eigen::Matrix3cd i_t = invariant_at(p);
    const Eigen::Matrix3cd commutator = i_t * hamiltonian - hamiltonian * i_t;
    const Eigen::Matrix3cd residual = invariant_rate_at(p) - kI * commutator;
    return residual.norm();
}

LrPhases lr_phase(int segment, double t_end, double theta, double A, double T,
                  double tol) {
    check_segment_time(t_end, T, segment);
    const double t_start = segment == 1 ? 0.0 : T / 2.0;

    auto integrand = [&](double t) {
        const double sg = std::sin(gamma_profile(t, A, T, segment));
        if (sg == 0.0) return 0.0;  // continuous limit at the boundaries
        return beta_profile_rate(t, theta, T, segment) / sg;
    };

    if (t_end <= t_start) return {0.0, 0.0};

    double error_estimate = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, t_start, t_end, 12, tol, &error_estimate);
    if (!std::isfinite(value) ||
        error_estimate > 100.0 * tol * std::max(1.0, std::abs(value))) {
        std::ostringstream msg;
        msg << "lr_phase: quadrature did not converge (value " << value
            << ", error estimate " << error_estimate << ", tol " << tol << ")";
        throw NumericalError(msg.str());
    }
    return {-value, value};
}

}  // namespace holopulse
