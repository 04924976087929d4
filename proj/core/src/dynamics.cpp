#include "holopulse/dynamics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace holopulse {

using std::complex;
namespace {

constexpr complex<double> kI{0.0, 1.0};

// Positivity monitor settings: check cadence (steps) and tolerance on the
// most negative eigenvalue.
constexpr int kPositivityStride = 200;
constexpr double kPositivityFloor = -1e-6;

struct Stepper {
    const PulseSchedule& s;
    double eps0, eps1;
    double g1 = 0.0, g2 = 0.0;
    std::array<complex<double>, 2> f0;  // e^{-i phi0} per segment
    std::array<complex<double>, 2> f1;  // e^{-i phi1} per segment
    Eigen::Matrix3d damp;               // elementwise dissipator mask
    std::size_t mid;

    Stepper(const PulseSchedule& schedule, const NoiseModel& noise)
        : s(schedule), eps0(noise.eps0), eps1(noise.eps1), g1(noise.gamma1),
          g2(noise.gamma2), mid(schedule.boundary_index()) {
        if (g1 < 0.0 || g2 < 0.0)
            throw DomainError("noise model: rates must be nonnegative");
        if (std::abs(eps0) > 1.0 || std::abs(eps1) > 1.0)
            throw DomainError(
                "noise model: Rabi error fractions must lie in [-1, 1]");
        for (int seg = 0; seg < 2; ++seg) {
            f0[seg] = std::exp(-kI * schedule.phases[seg].channel0);
            f1[seg] = std::exp(-kI * schedule.phases[seg].channel1);
        }
        // Anticommutator parts of both dissipators act elementwise:
        //   decay:    -(Gamma1/2)(d1_i + d1_j),  d1 = diag(sigma1^dag sigma1)
        //   dephase:  -(Gamma2/2)(d2_i - d2_j)^2, d2 = diag(sigma2)
        const double d1[3] = {0.0, 2.0, 0.0};
        const double d2[3] = {-1.0, 2.0, -1.0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double dd = d2[i] - d2[j];
                damp(i, j) = -0.5 * g1 * (d1[i] + d1[j]) - 0.5 * g2 * dd * dd;
            }
    }

    Eigen::Matrix3cd hamiltonian(std::size_t i) const {
        const int seg = i < mid ? 0 : 1;
        const PulseSample& p = s.samples[i];
        Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
        const complex<double> c01 = 0.5 * (1.0 + eps0) * p.omega0 * f0[seg];
        const complex<double> c12 = 0.5 * (1.0 + eps1) * p.omega1 * f1[seg];
        h(0, 1) = c01;
        h(1, 0) = std::conj(c01);
        h(1, 2) = c12;
        h(2, 1) = std::conj(c12);
        return h;
    }

    // rho_dot = i[rho, H] + dissipators.  The jump term of sigma1 refills
    // the {0,2} block coherently from rho_ee; everything else is a mask.
    Eigen::Matrix3cd rhs(const Eigen::Matrix3cd& rho,
                         const Eigen::Matrix3cd& h) const {
        Eigen::Matrix3cd d = kI * (rho * h - h * rho);
        if (g1 != 0.0 || g2 != 0.0) {
            d += damp.cwiseProduct(rho.real()) +
                 kI * damp.cwiseProduct(rho.imag());
            const complex<double> fill = g1 * rho(1, 1);
            d(0, 0) += fill;
            d(0, 2) += fill;
            d(2, 0) += fill;
            d(2, 2) += fill;
        }
        return d;
    }

    template <typename Batch>
    void rk4_step(Batch& rhos, std::size_t k) const {
        const double h_step = 2.0 * s.dt;
        const Eigen::Matrix3cd ha = hamiltonian(2 * k);
        const Eigen::Matrix3cd hm = hamiltonian(2 * k + 1);
        const Eigen::Matrix3cd hb = hamiltonian(2 * k + 2);
        for (auto& rho : rhos) {
            const Eigen::Matrix3cd k1 = rhs(rho, ha);
            const Eigen::Matrix3cd k2 = rhs(rho + 0.5 * h_step * k1, hm);
            const Eigen::Matrix3cd k3 = rhs(rho + 0.5 * h_step * k2, hm);
            const Eigen::Matrix3cd k4 = rhs(rho + h_step * k3, hb);
            rho += h_step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            rho = 0.5 * (rho + rho.adjoint()).eval();
        }
    }

    std::size_t n_steps() const { return (s.samples.size() - 1) / 2; }
};

void check_positive(const Eigen::Matrix3cd& rho, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(rho,
                                                       Eigen::EigenvaluesOnly);
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min < kPositivityFloor) {
        std::ostringstream msg;
        msg << "lindblad_evolve: positivity violated at t = " << t
            << " (min eigenvalue " << lam_min << ")";
        throw NumericalError(msg.str());
    }
}

}  // namespace

Eigen::Matrix3cd collapse_decay() {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(0, 1) = 1.0;
    m(2, 1) = 1.0;
    return m;
}

Eigen::Matrix3cd collapse_dephase() {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(0, 0) = -1.0;
    m(1, 1) = 2.0;
    m(2, 2) = -1.0;
    return m;
}

void validate_density_matrix(const DensityMatrix3& rho, double tol_herm,
                             double tol_trace, double tol_psd) {
    if ((rho - rho.adjoint()).norm() > tol_herm)
        throw DomainError("density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol_trace ||
        std::abs(rho.trace().imag()) > tol_trace)
        throw DomainError("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(rho,
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol_psd)
        throw DomainError("density matrix is not positive semidefinite");
}

Eigen::Matrix3cd error_hamiltonian(const PulseSchedule& schedule, double t,
                                   double eps0, double eps1) {
    const auto i = static_cast<long long>(std::llround(t / schedule.dt));
    if (i < 0 || static_cast<std::size_t>(i) >= schedule.samples.size() ||
        std::abs(t - static_cast<double>(i) * schedule.dt) > 1e-6 * schedule.T)
        throw DomainError("error_hamiltonian: t is not on the sample grid");
    return schedule.hamiltonian_at(static_cast<std::size_t>(i), eps0, eps1);
}

Eigen::Matrix3cd propagate_unitary(const PulseSchedule& schedule, double eps0,
                                   double eps1) {
    schedule.validate();
    NoiseModel noise;
    noise.eps0 = eps0;
    noise.eps1 = eps1;
    const Stepper ctx(schedule, noise);
    const double h_step = 2.0 * schedule.dt;

    Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
    for (std::size_t k = 0; k < ctx.n_steps(); ++k) {
        // Fourth-order Magnus step on the (begin, mid, end) samples:
        //   Omega = -i h (H1 + 4 H2 + H3)/6 + (h^2/12) [H1, H3],
        // exponentiated exactly, so the result is unitary to roundoff.
        const Eigen::Matrix3cd h1 = ctx.hamiltonian(2 * k);
        const Eigen::Matrix3cd h2 = ctx.hamiltonian(2 * k + 1);
        const Eigen::Matrix3cd h3 = ctx.hamiltonian(2 * k + 2);
        const Eigen::Matrix3cd m =
            h_step / 6.0 * (h1 + 4.0 * h2 + h3) +
            kI * (h_step * h_step / 12.0) * (h1 * h3 - h3 * h1);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(m);
        const Eigen::Vector3cd phases =
            (es.eigenvalues().array().cast<complex<double>>() * -kI).exp();
        u = es.eigenvectors() * phases.asDiagonal() *
            es.eigenvectors().adjoint() * u;
    }
    return u;
}

DensityMatrix3 lindblad_evolve(const PulseSchedule& schedule,
                               const DensityMatrix3& rho0,
                               const NoiseModel& noise,
                               const StepObserver& observer) {
    schedule.validate();
    validate_density_matrix(rho0);
    const Stepper ctx(schedule, noise);

    std::array<Eigen::Matrix3cd, 1> batch{rho0};
    if (observer) observer(0.0, batch[0]);
    for (std::size_t k = 0; k < ctx.n_steps(); ++k) {
        ctx.rk4_step(batch, k);
        const double t = schedule.samples[2 * k + 2].t;
        if (observer) observer(t, batch[0]);
        if ((k + 1) % kPositivityStride == 0) check_positive(batch[0], t);
    }
    check_positive(batch[0], schedule.T);
    return batch[0];
}

std::pair<DensityMatrix3, std::vector<PopulationRecord>>
lindblad_evolve_recorded(const PulseSchedule& schedule,
                         const DensityMatrix3& rho0, const NoiseModel& noise) {
    std::vector<PopulationRecord> records;
    records.reserve((schedule.samples.size() - 1) / 2 + 1);
    DensityMatrix3 rho_t =
        lindblad_evolve(schedule, rho0, noise,
                        [&](double t, const DensityMatrix3& rho) {
                            records.push_back({t, rho(0, 0).real(),
                                               rho(1, 1).real(),
                                               rho(2, 2).real(),
                                               rho.trace().real()});
                        });
    return {rho_t, std::move(records)};
}

double state_fidelity(const DensityMatrix3& rho,
                      const Eigen::Vector2cd& qubit_state) {
    if (std::abs(qubit_state.norm() - 1.0) > 1e-9)
        throw DomainError("state_fidelity: state must be normalized");
    Eigen::Vector3cd psi;
    psi << qubit_state(0), 0.0, qubit_state(1);
    const complex<double> f = psi.dot(rho * psi);  // dot conjugates psi
    return f.real();
}

Superoperator lindblad_superoperator(const PulseSchedule& schedule,
                                     const NoiseModel& noise) {
    schedule.validate();
    const Stepper ctx(schedule, noise);

    // Hermitian operator basis: diagonal units, then (E_ij + E_ji) and
    // i(E_ij - E_ji) for each pair i < j.
    std::array<Eigen::Matrix3cd, 9> batch;
    for (auto& m : batch) m = Eigen::Matrix3cd::Zero();
    batch[0](0, 0) = 1.0;
    batch[1](1, 1) = 1.0;
    batch[2](2, 2) = 1.0;
    const std::array<std::pair<int, int>, 3> pairs{
        {{0, 1}, {0, 2}, {1, 2}}};
    for (int p = 0; p < 3; ++p) {
        const auto [i, j] = pairs[static_cast<std::size_t>(p)];
        batch[3 + 2 * p](i, j) = 1.0;
        batch[3 + 2 * p](j, i) = 1.0;
        batch[4 + 2 * p](i, j) = kI;
        batch[4 + 2 * p](j, i) = -kI;
    }

    for (std::size_t k = 0; k < ctx.n_steps(); ++k) ctx.rk4_step(batch, k);

    Superoperator map;
    auto set_column = [&map](int row, int col, const Eigen::Matrix3cd& image) {
        map.col(3 * col + row) =
            Eigen::Map<const Eigen::Matrix<complex<double>, 9, 1>>(
                image.data());
    };
    set_column(0, 0, batch[0]);
    set_column(1, 1, batch[1]);
    set_column(2, 2, batch[2]);
    for (int p = 0; p < 3; ++p) {
        const auto [i, j] = pairs[static_cast<std::size_t>(p)];
        const Eigen::Matrix3cd& lp = batch[3 + 2 * p];
        const Eigen::Matrix3cd& lq = batch[4 + 2 * p];
        set_column(i, j, 0.5 * (lp - kI * lq));  // image of E_ij
        set_column(j, i, 0.5 * (lp + kI * lq));  // image of E_ji
    }
    return map;
}

DensityMatrix3 apply_superoperator(const Superoperator& map,
                                   const DensityMatrix3& rho0) {
    const Eigen::Map<const Eigen::Matrix<complex<double>, 9, 1>> v(
        rho0.data());
    const Eigen::Matrix<complex<double>, 9, 1> w = map * v;
    return Eigen::Map<const DensityMatrix3>(w.data());
}

namespace {

Eigen::Vector3cd embed_qubit(const Eigen::Vector2cd& q) {
    Eigen::Vector3cd v;
    v << q(0), 0.0, q(1);
    return v;
}

}  // namespace

double avg_gate_fidelity(const GateSpec& spec, const PulseSchedule& schedule,
                         const NoiseModel& noise, int n_states,
                         bool use_superoperator) {
    if (n_states < 2)
        throw DomainError("avg_gate_fidelity: need at least two input states");
    const Eigen::Matrix2cd target = target_unitary(spec);

    Superoperator map;
    if (use_superoperator) map = lindblad_superoperator(schedule, noise);

    const double step = 2.0 * std::numbers::pi /
                        static_cast<double>(n_states - 1);
    double sum = 0.0;
    for (int k = 0; k < n_states; ++k) {
        const double a = step * static_cast<double>(k);
        Eigen::Vector2cd q;
        q << std::cos(a), std::sin(a);
        const Eigen::Vector3cd psi0 = embed_qubit(q);
        const DensityMatrix3 rho0 = psi0 * psi0.adjoint();
        const DensityMatrix3 rho_t =
            use_superoperator ? apply_superoperator(map, rho0)
                              : lindblad_evolve(schedule, rho0, noise);
        const double f = state_fidelity(rho_t, target * q);
        sum += (k == 0 || k == n_states - 1) ? 0.5 * f : f;
    }
    return sum * step / (2.0 * std::numbers::pi);
}

double avg_gate_fidelity_bloch(const GateSpec& spec,
                               const PulseSchedule& schedule,
                               const NoiseModel& noise) {
    const Eigen::Matrix2cd target = target_unitary(spec);
    const Superoperator map = lindblad_superoperator(schedule, noise);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const std::array<Eigen::Vector2cd, 6> states = {
        Eigen::Vector2cd(1.0, 0.0),
        Eigen::Vector2cd(0.0, 1.0),
        Eigen::Vector2cd(inv_sqrt2, inv_sqrt2),
        Eigen::Vector2cd(inv_sqrt2, -inv_sqrt2),
        Eigen::Vector2cd(inv_sqrt2, kI * inv_sqrt2),
        Eigen::Vector2cd(inv_sqrt2, -kI * inv_sqrt2)};
    double sum = 0.0;
    for (const auto& q : states) {
        const Eigen::Vector3cd psi0 = embed_qubit(q);
        const DensityMatrix3 rho_t =
            apply_superoperator(map, psi0 * psi0.adjoint());
        sum += state_fidelity(rho_t, target * q);
    }
    return sum / 6.0;
}

double gate_overlap(const Eigen::Matrix2cd& target,
                    const Eigen::Matrix2cd& actual) {
    return std::abs((target.adjoint() * actual).trace()) / 2.0;
}

Eigen::Matrix2cd qubit_block(const Eigen::Matrix3cd& op) {
    Eigen::Matrix2cd b;
    b << op(0, 0), op(0, 2), op(2, 0), op(2, 2);
    return b;
}

}  // namespace holopulse
