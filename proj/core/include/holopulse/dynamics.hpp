#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

#include "holopulse/gate.hpp"

// Closed (Schroedinger) and open (Lindblad) propagation of a schedule over
// the (|0>, |e>, |1>) basis, plus state/gate fidelity metrics.
//
// Master equation convention:
//     rho_dot = i [rho, H] + 1/2 (Gamma1 L(sigma1) + Gamma2 L(sigma2)),
//     L(A) = 2 A rho A^dag - A^dag A rho - rho A^dag A,
// with sigma1 = |0><e| + |1><e| (collective decay out of |e>) and
// sigma2 = diag(-1, 2, -1) (one collective dephasing operator).

namespace holopulse {

using DensityMatrix3 = Eigen::Matrix3cd;

struct NoiseModel {
    double gamma1 = 0.0;  // decay rate, rad/ns
    double gamma2 = 0.0;  // dephasing rate, rad/ns
    double eps0 = 0.0;    // channel-0 fractional Rabi error
    double eps1 = 0.0;    // channel-1 fractional Rabi error
};

Eigen::Matrix3cd collapse_decay();    // sigma1
Eigen::Matrix3cd collapse_dephase();  // sigma2

// Hermitian to tol_herm, unit trace to tol_trace, positive semidefinite down
// to -tol_psd on the smallest eigenvalue; throws DomainError otherwise.
void validate_density_matrix(const DensityMatrix3& rho,
                             double tol_herm = 1e-10,
                             double tol_trace = 1e-10, double tol_psd = 1e-9);

// Drive Hamiltonian of a schedule at time t (t must sit on the sample grid)
// with multiplicative amplitude errors (1 + eps_k).
Eigen::Matrix3cd error_hamiltonian(const PulseSchedule& schedule, double t,
                                   double eps0, double eps1);

// Time-ordered propagator: midpoint-exponential stepping (one exact 3x3
// exponential per integrator step), unitary to machine precision.
Eigen::Matrix3cd propagate_unitary(const PulseSchedule& schedule,
                                   double eps0 = 0.0, double eps1 = 0.0);

// Called after every accepted integrator step (and once at t = 0).
using StepObserver = std::function<void(double t, const DensityMatrix3& rho)>;

// Fixed-step RK4 on the master equation (step = 2 sample spacings), with
// Hermitian symmetrization each step and a positivity monitor: eigenvalues
// below -1e-6 abort with NumericalError instead of being projected away.
DensityMatrix3 lindblad_evolve(const PulseSchedule& schedule,
                               const DensityMatrix3& rho0,
                               const NoiseModel& noise,
                               const StepObserver& observer = {});

struct PopulationRecord {
    double t = 0.0;
    double p0 = 0.0, pe = 0.0, p1 = 0.0;
    double trace = 0.0;
};

std::pair<DensityMatrix3, std::vector<PopulationRecord>>
lindblad_evolve_recorded(const PulseSchedule& schedule,
                         const DensityMatrix3& rho0, const NoiseModel& noise);

// <psi_f| rho |psi_f> for a normalized qubit state embedded with zero |e>
// amplitude.
double state_fidelity(const DensityMatrix3& rho,
                      const Eigen::Vector2cd& qubit_state);

// Linear map rho(0) -> rho(T) as a 9x9 matrix acting on column-stacked
// density matrices, assembled from one batched evolution of the 9 Hermitian
// basis operators.
using Superoperator = Eigen::Matrix<std::complex<double>, 9, 9>;
Superoperator lindblad_superoperator(const PulseSchedule& schedule,
                                     const NoiseModel& noise);
DensityMatrix3 apply_superoperator(const Superoperator& map,
                                   const DensityMatrix3& rho0);

// Average gate fidelity over the real-superposition input family
// |psi(a)> = cos(a)|0> + sin(a)|1>, a uniform on [0, 2pi], trapezoid rule
// over n_states points.  The superoperator path evolves the operator basis
// once; the direct path propagates every input state (identical result).
double avg_gate_fidelity(const GateSpec& spec, const PulseSchedule& schedule,
                         const NoiseModel& noise, int n_states = 1001,
                         bool use_superoperator = true);

// Optional alternative metric: Haar average over the full Bloch sphere via
// the six stabilizer states (an exact 2-design).  Not used by the presets.
double avg_gate_fidelity_bloch(const GateSpec& spec,
                               const PulseSchedule& schedule,
                               const NoiseModel& noise);

// Global-phase-insensitive gate comparison |tr(U^dag V)| / dim.
double gate_overlap(const Eigen::Matrix2cd& target,
                    const Eigen::Matrix2cd& actual);

// Qubit block (rows/cols 0 and 2) of a 3x3 operator.
Eigen::Matrix2cd qubit_block(const Eigen::Matrix3cd& op);

}  // namespace holopulse
