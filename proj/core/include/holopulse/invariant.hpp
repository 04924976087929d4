#pragma once

#include <Eigen/Dense>

#include "holopulse/errors.hpp"

// Lewis-Riesenfeld invariant engine for a resonantly driven Lambda system.
//
// Basis ordering is (|0>, |e>, |1>) everywhere: the two qubit levels |0>, |1>
// are each coupled to the shared auxiliary level |e>.  The drive Hamiltonian
// is
//
//       H = 1/2 [ 0            Omega0        0
//                 Omega0       0             Omega1 e^{-i phi}
//                 0            Omega1 e^{i phi}  0 ],
//
// and the invariant is parametrized by two angles gamma(t), beta(t), a
// constant relative phase phi and a constant eigenvalue scale lambda:
//
//       I = lambda/2 [ 0            cg sb             -i sg e^{-i phi}
//                      cg sb        0                  cg cb e^{-i phi}
//                      i sg e^{i phi}  cg cb e^{i phi}  0 ]
//
// with cg = cos gamma, sg = sin gamma, sb = sin beta, cb = cos beta.
// Requiring dI/dt = dI/dt|_partial + (1/i)[I, H] = 0 fixes the couplings:
//
//       Omega0 = 2 (beta_dot cot(gamma) sin(beta) + gamma_dot cos(beta))
//       Omega1 = 2 (beta_dot cot(gamma) cos(beta) - gamma_dot sin(beta)).
//
// The gamma/beta path profiles below run a two-segment schedule over [0, T]
// with gamma(0) = gamma(T/2) = gamma(T) = 0, beta(0) = beta(T) = theta/4 and
// beta(T/2) = 0; the relative phase jumps from phi to phi + pi at T/2.

namespace holopulse {

// Instantaneous invariant parameters.  lambda only scales the nonzero
// eigenvalues (+-lambda/2) and never enters any coupling or phase.
struct InvariantParams {
    double gamma = 0.0;      // rad
    double beta = 0.0;       // rad
    double gamma_dot = 0.0;  // rad/ns
    double beta_dot = 0.0;   // rad/ns
    double phi = 0.0;        // rad, constant per segment
    double lambda = 1.0;     // dimensionless, > 0
};

// Drive Hamiltonian parameters in the form above (channel-0 element real).
struct LambdaHamiltonian {
    double omega0 = 0.0;  // rad/ns
    double omega1 = 0.0;  // rad/ns
    double phi = 0.0;     // rad

    // Materialized 3x3 matrix: Hermitian, zero diagonal,
    // H(0,1) = omega0/2, H(1,2) = omega1 e^{-i phi}/2.
    Eigen::Matrix3cd matrix() const;
};

struct Couplings {
    double omega0 = 0.0;  // rad/ns
    double omega1 = 0.0;  // rad/ns
};

// Instantaneous eigenframe of the invariant, eigenvalues (0, +l/2, -l/2).
struct DressedFrame {
    Eigen::Vector3cd phi0;
    Eigen::Vector3cd phi_plus;
    Eigen::Vector3cd phi_minus;
};

struct LrPhases {
    double alpha_plus = 0.0;   // rad
    double alpha_minus = 0.0;  // rad; alpha_minus = -alpha_plus, alpha_0 = 0
};

// Below this |gamma| the cot(gamma) term is treated as a boundary limit; see
// couplings_from_invariant.
inline constexpr double kGammaSeriesThreshold = 1e-6;  // rad

// Segment picker for the two-part schedule: 1 on [0, T/2), 2 on [T/2, T].
int segment_of(double t, double T);

// gamma(t): quartic bump of amplitude -A (segment 1) / +A (segment 2),
// vanishing with zero slope at t = 0, T/2, T.  gamma(T/4) = -A.
double gamma_profile(double t, double A, double T, int segment);
double gamma_profile_rate(double t, double A, double T, int segment);

// beta(t): degree-7 polynomial running theta/4 -> 0 over segment 1 and
// 0 -> theta/4 over segment 2; its rate vanishes to cubic order at all
// segment boundaries.
double beta_profile(double t, double theta, double T, int segment);
double beta_profile_rate(double t, double theta, double T, int segment);

// Full parameter set of the two-segment path at time t (segment inferred).
InvariantParams invariant_params_at(double t, double theta, double phi,
                                    double A, double T);

// Inverse-engineering map.  Near gamma = 0 the beta_dot*cot(gamma) product
// is evaluated as the analytic limit: with the path profiles above beta_dot
// vanishes faster than sin(gamma), so both couplings go to zero at segment
// boundaries.  Throws SingularityError when beta_dot does not vanish at
// least as fast as sin(gamma).
Couplings couplings_from_invariant(const InvariantParams& p);

// I(t) and its explicit time derivative (via the analytic angle rates).
Eigen::Matrix3cd invariant_at(const InvariantParams& p);
Eigen::Matrix3cd invariant_rate_at(const InvariantParams& p);

// Dressed states; orthonormal, eigenvectors of invariant_at with
// eigenvalues (0, +lambda/2, -lambda/2).
DressedFrame dressed_states_at(const InvariantParams& p);

// Frobenius norm of dI/dt + (1/i)[I, H]; zero (to roundoff) when H was
// inverse-engineered from the same parameters.
double invariant_residual(const InvariantParams& p,
                          const Eigen::Matrix3cd& hamiltonian);

// Lewis-Riesenfeld phases accumulated on the +/- dressed channels from the
// segment start up to t_end:
//     alpha_plus = -int beta_dot / sin(gamma) dt',   alpha_minus = +int.
// The integrand extends continuously to 0 at segment boundaries.  Adaptive
// Gauss-Kronrod quadrature; throws NumericalError when the requested
// tolerance cannot be certified.
LrPhases lr_phase(int segment, double t_end, double theta, double A, double T,
                  double tol = 1e-10);

}  // namespace holopulse
