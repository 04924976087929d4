#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "holopulse/errors.hpp"
#include "holopulse/invariant.hpp"

// Gate compiler: turns a target qubit rotation R[theta, phi] into a sampled
// two-segment drive schedule, either through the invariant-engineered
// noncyclic construction or through the conventional single-loop holonomic
// baseline, and provides pulse-area bookkeeping on top.

namespace holopulse {

// Target rotation R[theta, phi] about the axis cos(phi) sigma_y - sin(phi)
// sigma_x by an angle theta in [0, pi]:
//     [[cos(theta/2),              -sin(theta/2) e^{-i phi}],
//      [sin(theta/2) e^{i phi},     cos(theta/2)]]
struct GateSpec {
    double theta = 0.0;  // rad, in [0, pi]
    double phi = 0.0;    // rad
};

Eigen::Matrix2cd target_unitary(const GateSpec& spec);

enum class Scheme { NoncyclicSta, Nhqc };

std::string_view scheme_name(Scheme s);
Scheme scheme_from_string(std::string_view name);

// Drive phase of each channel within one segment; the Hamiltonian matrix
// elements are H(0,1) = Omega0/2 e^{-i channel0} and
// H(1,2) = Omega1/2 e^{-i channel1}.  Noncyclic schedules keep channel0 = 0
// so the segment phase is just phi (and phi + pi after the jump); the NHQC
// baseline additionally shifts both channels by a common angle in its second
// half.
struct SegmentPhases {
    double channel0 = 0.0;  // rad
    double channel1 = 0.0;  // rad
};

struct PulseSample {
    double t = 0.0;       // ns
    double omega0 = 0.0;  // rad/ns
    double omega1 = 0.0;  // rad/ns
};

// Immutable sampled schedule over [0, T].  Samples are uniform with spacing
// dt; the count is 4n+1 so that each segment carries an even number of
// intervals (Simpson quadrature) and the propagators can step across sample
// pairs (integration step = 2 dt) with an exact midpoint sample.
struct PulseSchedule {
    GateSpec gate;
    Scheme scheme = Scheme::NoncyclicSta;
    double amplitude = 0.0;  // noncyclic path amplitude A; NaN for NHQC
    double T = 0.0;          // ns
    double dt = 0.0;         // sample spacing, ns
    std::array<SegmentPhases, 2> phases{};
    std::vector<PulseSample> samples;

    std::size_t boundary_index() const { return (samples.size() - 1) / 2; }
    int segment_of_index(std::size_t i) const {
        return i < boundary_index() ? 1 : 2;
    }
    const SegmentPhases& segment_phases(int segment) const {
        return phases[static_cast<std::size_t>(segment - 1)];
    }

    // Drive Hamiltonian at sample i with multiplicative amplitude errors
    // (1 + eps_k) on channel k.
    Eigen::Matrix3cd hamiltonian_at(std::size_t i, double eps0 = 0.0,
                                    double eps1 = 0.0) const;

    // max over samples and channels of |Omega_k|.
    double peak_channel_amplitude() const;

    void validate() const;  // throws CompileError on malformed layout
};

// Compile the two-segment noncyclic schedule for R[theta, phi].  `step` is
// the propagator time step (must divide T/2); samples are laid down at
// step/2 so integrators see exact midpoints.  Defaults to step = T/4000.
PulseSchedule compile_noncyclic_gate(const GateSpec& spec, double A, double T,
                                     double step = 0.0);

// Pulse area S = 1/2 int sqrt(Omega0^2 + Omega1^2) dt, composite Simpson
// per segment on the uniform sample grid.
double pulse_area(const PulseSchedule& schedule);

struct AmplitudeRange {
    double lo = 0.025;
    double hi = 1.5;
};

struct AreaMinimum {
    double A_star = 0.0;
    double S_min = 0.0;
    // Set when the coarse scan saw more than one local minimum; the result
    // is then the global grid minimum without refinement.
    bool non_unimodal = false;
};

// Minimize S(A) at fixed theta: 60-point coarse scan over `range` followed
// by golden-section refinement to |dA| < 1e-4.  S is invariant under time
// reparametrization, so T only sets the sampling grid.
AreaMinimum minimize_area(double theta, double T,
                          AmplitudeRange range = AmplitudeRange{});

enum class AreaBranch { Lower, Upper };

// Solve S(A) = target on one side of the minimum (bisection to 1e-6).
// Throws CompileError when the minimum already exceeds the target.
double area_matched_amplitude(double theta, double target_area,
                              AreaBranch branch = AreaBranch::Lower,
                              double T = 40.0);

// Rescale t -> c t, Omega -> Omega / c so that the peak per-channel
// amplitude equals omega_max.  The pulse area is exactly invariant.
PulseSchedule scale_to_rabi_cap(const PulseSchedule& schedule,
                                double omega_max);

// |Omega1(t)| samples of a schedule, for reuse as an NHQC envelope shape.
std::vector<double> envelope_from_channel1(const PulseSchedule& schedule);

// Conventional single-loop holonomic baseline for R[theta, phi]: equal
// couplings Omega0 = Omega1 = Omega(t)/sqrt(2) along a fixed bright state,
// envelope normalized to Rabi area pi per half (total pulse area S = pi),
// and a common drive-phase jump of (pi - theta) between the halves.  The
// envelope must be sampled on the same 4n+1 layout the compiler produces
// over [0, T].  The compiled gate is verified against target_unitary up to
// a global phase before returning.
PulseSchedule compile_nhqc_baseline(const GateSpec& spec,
                                    const std::vector<double>& envelope,
                                    double T, double step = 0.0);

// Residual of the invariant equation at sample i of a noncyclic schedule,
// rebuilding the (gamma, beta) trajectory from the schedule's own gate,
// amplitude and duration.  Time rescaling (scale_to_rabi_cap) leaves the
// trajectory invariant, so scaled schedules validate identically.
double invariant_residual_at(const PulseSchedule& schedule, std::size_t i,
                             double eps0 = 0.0, double eps1 = 0.0);

}  // namespace holopulse
