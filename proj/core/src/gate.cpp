#include "holopulse/gate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "holopulse/dynamics.hpp"

namespace holopulse {

using std::complex;
namespace {

constexpr complex<double> kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Largest path amplitude the compiler accepts; beyond it gamma approaches pi
// and cot(gamma) develops an interior singularity.
constexpr double kMaxAmplitude = 3.0;

// Number of propagator steps per segment for a requested step size; throws
// unless step divides T/2 to a relative 1e-9.
std::size_t steps_per_segment(double T, double step) {
    if (step <= 0.0) throw CompileError("compile: step must be positive");
    const double n_real = T / 2.0 / step;
    const auto n = static_cast<long long>(std::llround(n_real));
    if (n < 2 || std::abs(n_real - static_cast<double>(n)) > 1e-9 * n_real)
        throw CompileError("compile: step must divide T/2");
    return static_cast<std::size_t>(n);
}

double simpson(const std::vector<double>& f, std::size_t first,
               std::size_t last, double h) {
    // [first, last] inclusive, even number of intervals.
    double odd = 0.0, even = 0.0;
    for (std::size_t i = first + 1; i < last; i += 2) odd += f[i];
    for (std::size_t i = first + 2; i < last; i += 2) even += f[i];
    return h / 3.0 * (f[first] + f[last] + 4.0 * odd + 2.0 * even);
}

double golden_section(const std::function<double(double)>& f, double a,
                      double b, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

Eigen::Matrix2cd target_unitary(const GateSpec& spec) {
    if (spec.theta < -1e-12 || spec.theta > kPi + 1e-12)
        throw DomainError("target_unitary: theta must lie in [0, pi]");
    const double c = std::cos(spec.theta / 2.0);
    const double s = std::sin(spec.theta / 2.0);
    Eigen::Matrix2cd u;
    u << c, -s * std::exp(-kI * spec.phi), s * std::exp(kI * spec.phi), c;
    return u;
}

std::string_view scheme_name(Scheme s) {
    return s == Scheme::NoncyclicSta ? "noncyclic-sta" : "nhqc";
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "noncyclic-sta" || name == "noncyclic")
        return Scheme::NoncyclicSta;
    if (name == "nhqc") return Scheme::Nhqc;
    throw UsageError("unknown scheme '" + std::string(name) +
                     "' (expected noncyclic|nhqc)");
}

Eigen::Matrix3cd PulseSchedule::hamiltonian_at(std::size_t i, double eps0,
                                               double eps1) const {
    const SegmentPhases& ph = segment_phases(segment_of_index(i));
    const PulseSample& s = samples[i];
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    const complex<double> c01 =
        0.5 * (1.0 + eps0) * s.omega0 * std::exp(-kI * ph.channel0);
    const complex<double> c12 =
        0.5 * (1.0 + eps1) * s.omega1 * std::exp(-kI * ph.channel1);
    h(0, 1) = c01;
    h(1, 0) = std::conj(c01);
    h(1, 2) = c12;
    h(2, 1) = std::conj(c12);
    return h;
}

double PulseSchedule::peak_channel_amplitude() const {
    double peak = 0.0;
    for (const PulseSample& s : samples)
        peak = std::max({peak, std::abs(s.omega0), std::abs(s.omega1)});
    return peak;
}

void PulseSchedule::validate() const {
    if (samples.size() < 5 || (samples.size() - 1) % 4 != 0)
        throw CompileError("schedule: sample count must be 4n+1");
    if (T <= 0.0 || dt <= 0.0)
        throw CompileError("schedule: T and dt must be positive");
    const std::size_t n = samples.size() - 1;
    if (std::abs(static_cast<double>(n) * dt - T) > 1e-9 * T)
        throw CompileError("schedule: samples do not span [0, T]");
    for (std::size_t i = 0; i <= n; ++i) {
        if (std::abs(samples[i].t - static_cast<double>(i) * dt) > 1e-9 * T)
            throw CompileError("schedule: non-uniform sample times");
    }
}

PulseSchedule compile_noncyclic_gate(const GateSpec& spec, double A, double T,
                                     double step) {
    if (spec.theta < -1e-12 || spec.theta > kPi + 1e-12)
        throw CompileError("compile: theta must lie in [0, pi]");
    if (T <= 0.0) throw CompileError("compile: T must be positive");
    if (A <= 0.0) throw CompileError("compile: amplitude A must be positive");
    if (A > kMaxAmplitude)
        throw CompileError(
            "compile: amplitude A too large; cot(gamma) becomes singular "
            "inside the segments");
    if (step == 0.0) step = T / 4000.0;
    const std::size_t n = steps_per_segment(T, step);

    PulseSchedule s;
    s.gate = spec;
    s.scheme = Scheme::NoncyclicSta;
    s.amplitude = A;
    s.T = T;
    s.dt = T / static_cast<double>(4 * n);
    s.phases = {SegmentPhases{0.0, spec.phi},
                SegmentPhases{0.0, spec.phi + kPi}};
    s.samples.resize(4 * n + 1);
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        const double t = static_cast<double>(i) * s.dt;
        const int seg = i < 2 * n ? 1 : 2;
        InvariantParams p;
        p.gamma = gamma_profile(t, A, T, seg);
        p.beta = beta_profile(t, spec.theta, T, seg);
        p.gamma_dot = gamma_profile_rate(t, A, T, seg);
        p.beta_dot = beta_profile_rate(t, spec.theta, T, seg);
        const Couplings w = couplings_from_invariant(p);
        s.samples[i] = {t, w.omega0, w.omega1};
    }
    return s;
}

double pulse_area(const PulseSchedule& schedule) {
    schedule.validate();
    const std::size_t mid = schedule.boundary_index();
    const std::size_t last = schedule.samples.size() - 1;
    std::vector<double> amp(schedule.samples.size());
    for (std::size_t i = 0; i <= last; ++i)
        amp[i] = std::hypot(schedule.samples[i].omega0,
                            schedule.samples[i].omega1);
    return 0.5 * (simpson(amp, 0, mid, schedule.dt) +
                  simpson(amp, mid, last, schedule.dt));
}

AreaMinimum minimize_area(double theta, double T, AmplitudeRange range) {
    if (!(range.lo > 0.0) || range.hi <= range.lo ||
        range.hi > kMaxAmplitude)
        throw DomainError("minimize_area: invalid amplitude range");

    const auto area_at = [&](double A) {
        return pulse_area(compile_noncyclic_gate({theta, 0.0}, A, T));
    };

    constexpr int kCoarsePoints = 60;
    std::vector<double> grid(kCoarsePoints), val(kCoarsePoints);
    for (int i = 0; i < kCoarsePoints; ++i) {
        grid[i] = range.lo +
                  (range.hi - range.lo) * static_cast<double>(i) /
                      static_cast<double>(kCoarsePoints - 1);
        val[i] = area_at(grid[i]);
    }

    std::size_t best = 0;
    int minima = 0;
    for (int i = 0; i < kCoarsePoints; ++i) {
        if (val[i] < val[best]) best = static_cast<std::size_t>(i);
        if (i > 0 && i + 1 < kCoarsePoints && val[i] < val[i - 1] &&
            val[i] <= val[i + 1])
            ++minima;
    }

    AreaMinimum out;
    if (minima > 1) {
        out.non_unimodal = true;
        out.A_star = grid[best];
        out.S_min = val[best];
        return out;
    }

    const double lo = best == 0 ? range.lo : grid[best - 1];
    const double hi =
        best + 1 >= grid.size() ? range.hi : grid[best + 1];
    out.A_star = golden_section(area_at, lo, hi, 1e-4);
    out.S_min = area_at(out.A_star);
    return out;
}

double area_matched_amplitude(double theta, double target_area,
                              AreaBranch branch, double T) {
    const AreaMinimum m = minimize_area(theta, T);
    if (m.S_min > target_area)
        throw CompileError(
            "area_matched_amplitude: minimum pulse area exceeds the target");
    const auto area_at = [&](double A) {
        return pulse_area(compile_noncyclic_gate({theta, 0.0}, A, T));
    };

    AmplitudeRange range;
    double lo, hi;
    if (branch == AreaBranch::Lower) {
        lo = range.lo;
        hi = m.A_star;
        if (area_at(lo) < target_area)
            throw CompileError(
                "area_matched_amplitude: no lower-branch solution in range");
    } else {
        lo = m.A_star;
        hi = range.hi;
        if (area_at(hi) < target_area)
            throw CompileError(
                "area_matched_amplitude: no upper-branch solution in range");
    }
    // S(A) is monotone on each side of the minimum; bisect on sign.
    for (int it = 0; it < 80 && hi - lo > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool above = area_at(mid) > target_area;
        const bool keep_low = branch == AreaBranch::Lower ? above : !above;
        (keep_low ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PulseSchedule scale_to_rabi_cap(const PulseSchedule& schedule,
                                double omega_max) {
    if (omega_max <= 0.0)
        throw DomainError("scale_to_rabi_cap: omega_max must be positive");
    const double peak = schedule.peak_channel_amplitude();
    if (peak == 0.0)
        throw CompileError("scale_to_rabi_cap: schedule has zero amplitude");
    const double c = peak / omega_max;
    if (c == 1.0) return schedule;

    PulseSchedule out = schedule;
    out.T = schedule.T * c;
    out.dt = schedule.dt * c;
    for (PulseSample& s : out.samples) {
        s.t *= c;
        s.omega0 /= c;
        s.omega1 /= c;
    }
    return out;
}

std::vector<double> envelope_from_channel1(const PulseSchedule& schedule) {
    std::vector<double> env(schedule.samples.size());
    for (std::size_t i = 0; i < env.size(); ++i)
        env[i] = std::abs(schedule.samples[i].omega1);
    return env;
}

PulseSchedule compile_nhqc_baseline(const GateSpec& spec,
                                    const std::vector<double>& envelope,
                                    double T, double step) {
    if (spec.theta < -1e-12 || spec.theta > kPi + 1e-12)
        throw CompileError("nhqc: theta must lie in [0, pi]");
    if (T <= 0.0) throw CompileError("nhqc: T must be positive");
    if (step == 0.0) step = T / 4000.0;
    const std::size_t n = steps_per_segment(T, step);
    if (envelope.size() != 4 * n + 1)
        throw CompileError("nhqc: envelope must be sampled on the 4n+1 grid");
    for (double v : envelope)
        if (!(v >= -1e-12) || !std::isfinite(v))
            throw CompileError("nhqc: envelope must be nonnegative and finite");

    const double dt = T / static_cast<double>(4 * n);
    const std::size_t mid = 2 * n;

    std::vector<double> env(envelope);
    for (double& v : env) v = std::max(v, 0.0);
    const double area1 = simpson(env, 0, mid, dt);
    const double area2 = simpson(env, mid, env.size() - 1, dt);
    if (area1 <= 1e-12 || area2 <= 1e-12)
        throw CompileError("nhqc: envelope half has zero area");
    // Each half becomes a pi pulse on the bright transition.  The shared
    // midpoint sample gets the first-half factor; envelopes are expected to
    // vanish there (both built-in producers do).
    const double c1 = kPi / area1;
    const double c2 = kPi / area2;
    for (std::size_t i = 0; i < env.size(); ++i)
        env[i] *= i <= mid ? c1 : c2;

    // Bright state (|0> - i e^{i phi} |1>)/sqrt(2); the second half shifts
    // the bright-transition drive phase by pi - theta, which closes the
    // holonomy at rotation angle theta.
    const double jump = kPi - spec.theta;
    PulseSchedule s;
    s.gate = spec;
    s.scheme = Scheme::Nhqc;
    s.amplitude = std::numeric_limits<double>::quiet_NaN();
    s.T = T;
    s.dt = dt;
    s.phases = {SegmentPhases{0.0, spec.phi - kPi / 2.0},
                SegmentPhases{jump, spec.phi - kPi / 2.0 - jump}};
    s.samples.resize(env.size());
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (std::size_t i = 0; i < env.size(); ++i) {
        const double w = env[i] * inv_sqrt2;
        s.samples[i] = {static_cast<double>(i) * dt, w, w};
    }

    const Eigen::Matrix3cd u = propagate_unitary(s);
    const double overlap = gate_overlap(target_unitary(spec), qubit_block(u));
    const double leak = std::hypot(std::abs(u(1, 0)), std::abs(u(1, 2)));
    if (overlap < 1.0 - 1e-6 || leak * leak > 1e-6) {
        std::ostringstream msg;
        msg << "nhqc: compiled gate check failed (overlap " << overlap
            << ", leakage " << leak * leak << ")";
        throw CompileError(msg.str());
    }
    return s;
}

double invariant_residual_at(const PulseSchedule& schedule, std::size_t i,
                             double eps0, double eps1) {
    if (schedule.scheme != Scheme::NoncyclicSta ||
        !std::isfinite(schedule.amplitude))
        throw DomainError(
            "invariant_residual_at: schedule has no invariant trajectory");
    if (i >= schedule.samples.size())
        throw DomainError("invariant_residual_at: sample index out of range");
    const double t = schedule.samples[i].t;
    InvariantParams p = invariant_params_at(t, schedule.gate.theta,
                                            schedule.gate.phi,
                                            schedule.amplitude, schedule.T);
    return invariant_residual(p, schedule.hamiltonian_at(i, eps0, eps1));
}

}  // namespace holopulse
