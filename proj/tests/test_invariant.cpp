#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holopulse/gate.hpp"
#include "holopulse/invariant.hpp"
#include "test_util.hpp"

using namespace holopulse;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gamma profile boundary and midpoint values") {
    const double A = 0.46, T = 29.5;
    CHECK(gamma_profile(0.0, A, T, 1) == 0.0);
    CHECK(gamma_profile(T / 2.0, A, T, 1) == 0.0);
    CHECK(gamma_profile(T / 2.0, A, T, 2) == 0.0);
    CHECK(gamma_profile(T, A, T, 2) == 0.0);
    CHECK(gamma_profile(T / 4.0, A, T, 1) == doctest::Approx(-A).epsilon(1e-14));
    CHECK(gamma_profile(3.0 * T / 4.0, A, T, 2) ==
          doctest::Approx(A).epsilon(1e-14));
}

TEST_CASE("gamma profiles mirror between segments") {
    const double A = 0.73, T = 41.0;
    for (int i = 0; i <= 100; ++i) {
        const double s = T / 2.0 * static_cast<double>(i) / 100.0;
        CHECK(gamma_profile(T - s, A, T, 2) ==
              doctest::Approx(-gamma_profile(s, A, T, 1)).epsilon(1e-13));
    }
}

TEST_CASE("beta profile boundary values") {
    const double theta = 1.234, T = 33.0;
    // 35 (1/4 - 3/5 + 1/2 - 1/7) = 1/4 exactly
    CHECK(beta_profile(0.0, theta, T, 1) ==
          doctest::Approx(theta / 4.0).epsilon(1e-14));
    CHECK(beta_profile(T / 2.0, theta, T, 1) == 0.0);
    CHECK(beta_profile(T / 2.0, theta, T, 2) == 0.0);
    CHECK(beta_profile(T, theta, T, 2) ==
          doctest::Approx(theta / 4.0).epsilon(1e-14));
}

TEST_CASE("beta rate vanishes to cubic order at boundaries") {
    const double theta = kPi / 2.0, T = 29.5;
    // |beta_dot(t)| ~ t^3 near t = 0: the ratio at t and t/10 should drop by
    // about 1000.
    const double r1 = std::abs(beta_profile_rate(1e-2 * T, theta, T, 1));
    const double r2 = std::abs(beta_profile_rate(1e-3 * T, theta, T, 1));
    CHECK(r1 / r2 > 800.0);
    CHECK(r1 / r2 < 1200.0);
    CHECK(beta_profile_rate(0.0, theta, T, 1) == 0.0);
    CHECK(beta_profile_rate(T, theta, T, 2) == 0.0);
}

TEST_CASE("profile rates agree with finite differences") {
    testutil::Rng rng(7);
    const double A = 0.57, theta = 1.1, T = 37.3, h = 1e-6;
    for (int seg = 1; seg <= 2; ++seg) {
        const double lo = seg == 1 ? 0.0 : T / 2.0;
        for (int k = 0; k < 10; ++k) {
            const double t = rng.uniform(lo + 1e-3, lo + T / 2.0 - 1e-3);
            const double gd = (gamma_profile(t + h, A, T, seg) -
                               gamma_profile(t - h, A, T, seg)) /
                              (2.0 * h);
            const double bd = (beta_profile(t + h, theta, T, seg) -
                               beta_profile(t - h, theta, T, seg)) /
                              (2.0 * h);
            CHECK(gamma_profile_rate(t, A, T, seg) ==
                  doctest::Approx(gd).epsilon(1e-7));
            CHECK(beta_profile_rate(t, theta, T, seg) ==
                  doctest::Approx(bd).epsilon(1e-7));
        }
    }
}

TEST_CASE("profiles reject out-of-segment times") {
    CHECK_THROWS_AS(gamma_profile(20.0, 0.4, 30.0, 1), DomainError);
    CHECK_THROWS_AS(gamma_profile(5.0, 0.4, 30.0, 2), DomainError);
    CHECK_THROWS_AS(beta_profile(-1.0, 1.0, 30.0, 1), DomainError);
    CHECK_THROWS_AS(beta_profile(31.0, 1.0, 30.0, 2), DomainError);
    CHECK_THROWS_AS(gamma_profile(1.0, 0.4, 30.0, 3), DomainError);
}

TEST_CASE("couplings from invariant: direct substitutions") {
    const double g = 0.37;
    const Couplings a = couplings_from_invariant({kPi / 4.0, 0.0, g, 0.0});
    CHECK(a.omega0 == doctest::Approx(2.0 * g).epsilon(1e-14));
    CHECK(a.omega1 == doctest::Approx(0.0).epsilon(1e-14));

    const double b = 0.21;
    const Couplings c =
        couplings_from_invariant({kPi / 4.0, kPi / 2.0, 0.0, b});
    CHECK(c.omega0 == doctest::Approx(2.0 * b).epsilon(1e-14));
    CHECK(c.omega1 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("couplings vanish at segment boundaries") {
    const double A = 0.46, theta = kPi / 2.0, T = 29.5;
    for (double t : {0.0, T / 2.0, T}) {
        const InvariantParams p = invariant_params_at(t, theta, 0.0, A, T);
        const Couplings w = couplings_from_invariant(p);
        CHECK(std::abs(w.omega0) <= 1e-9);
        CHECK(std::abs(w.omega1) <= 1e-9);
    }
}

TEST_CASE("couplings approach zero linearly near t = 0") {
    // Series behaviour: beta_dot ~ t^3 and cot(gamma) ~ t^-2, so the cot
    // term and gamma_dot are both ~ t.
    const double A = 0.46, theta = kPi / 2.0, T = 29.5;
    double prev = 1e300;
    for (double t : {1e-2 * T, 1e-3 * T, 1e-4 * T, 1e-5 * T}) {
        const InvariantParams p = invariant_params_at(t, theta, 0.0, A, T);
        const Couplings w = couplings_from_invariant(p);
        const double mag = std::hypot(w.omega0, w.omega1);
        CHECK(mag < prev);
        prev = mag;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("couplings singularity error") {
    InvariantParams p;
    p.gamma = 0.0;
    p.beta_dot = 1.0;
    CHECK_THROWS_AS(couplings_from_invariant(p), SingularityError);
}

TEST_CASE("coupling map round-trips back to the angle rates") {
    testutil::Rng rng(11);
    for (int k = 0; k < 50; ++k) {
        InvariantParams p;
        p.gamma = rng.uniform(0.05, 1.4) * (rng.uniform(0, 1) < 0.5 ? -1 : 1);
        p.beta = rng.uniform(-1.5, 1.5);
        p.gamma_dot = rng.uniform(-0.5, 0.5);
        p.beta_dot = rng.uniform(-0.5, 0.5);
        const Couplings w = couplings_from_invariant(p);
        const double sb = std::sin(p.beta), cb = std::cos(p.beta);
        const double cot_term = 0.5 * (w.omega0 * sb + w.omega1 * cb);
        const double gamma_dot = 0.5 * (w.omega0 * cb - w.omega1 * sb);
        const double beta_dot = cot_term * std::tan(p.gamma);
        CHECK(gamma_dot == doctest::Approx(p.gamma_dot).epsilon(1e-10));
        CHECK(beta_dot ==
              doctest::Approx(p.beta_dot).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("invariant matrix: substitutions and eigenvalues") {
    const Eigen::Matrix3cd m0 = invariant_at({0.0, kPi / 2.0, 0.0, 0.0, 0.0});
    CHECK(std::abs(m0(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(m0(1, 2)) < 1e-15);
    CHECK(std::abs(m0(0, 2)) < 1e-15);
    CHECK(std::abs(m0(0, 0)) + std::abs(m0(1, 1)) + std::abs(m0(2, 2)) <
          1e-15);

    const Eigen::Matrix3cd m1 = invariant_at({kPi / 2.0, 0.7, 0.0, 0.0, 0.0});
    CHECK(std::abs(m1(0, 2) - std::complex<double>(0.0, -0.5)) < 1e-15);
    CHECK(std::abs(m1(0, 1)) < 1e-15);
    CHECK(std::abs(m1(1, 2)) < 1e-15);

    testutil::Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        InvariantParams p;
        p.gamma = rng.uniform(-1.5, 1.5);
        p.beta = rng.uniform(-3.0, 3.0);
        p.phi = rng.uniform(0.0, 2.0 * kPi);
        const Eigen::Matrix3cd m = invariant_at(p);
        CHECK((m - m.adjoint()).norm() < 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(
            m, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(es.eigenvalues()(1) ==
              doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
        CHECK(es.eigenvalues()(2) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("dressed states: substitutions, orthonormality, eigenvectors") {
    const DressedFrame f0 = dressed_states_at({0.0, 0.0, 0.0, 0.0, 0.0});
    CHECK((f0.phi0 - Eigen::Vector3cd(1, 0, 0)).norm() < 1e-15);
    Eigen::Vector3cd expect_plus;
    expect_plus << 0.0, std::complex<double>(0, 1) / std::numbers::sqrt2,
        std::complex<double>(0, 1) / std::numbers::sqrt2;
    CHECK((f0.phi_plus - expect_plus).norm() < 1e-15);

    testutil::Rng rng(5);
    for (int k = 0; k < 100; ++k) {
        InvariantParams p;
        p.gamma = rng.uniform(-1.5, 1.5);
        p.beta = rng.uniform(-3.0, 3.0);
        p.phi = rng.uniform(0.0, 2.0 * kPi);
        const DressedFrame f = dressed_states_at(p);
        const Eigen::Matrix3cd m = invariant_at(p);

        Eigen::Matrix3cd basis;
        basis.col(0) = f.phi0;
        basis.col(1) = f.phi_plus;
        basis.col(2) = f.phi_minus;
        CHECK((basis.adjoint() * basis - Eigen::Matrix3cd::Identity())
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);

        CHECK((m * f.phi0).norm() < 1e-12);
        CHECK((m * f.phi_plus - 0.5 * p.lambda * f.phi_plus).norm() < 1e-12);
        CHECK((m * f.phi_minus + 0.5 * p.lambda * f.phi_minus).norm() <
              1e-12);
    }
}

TEST_CASE("invariant residual vanishes for consistent inputs") {
    const double A = 0.46, theta = kPi / 2.0, phi = 0.9, T = 29.5;
    const PulseSchedule s = compile_noncyclic_gate({theta, phi}, A, T);
    testutil::Rng rng(13);
    for (int k = 0; k < 40; ++k) {
        const auto i = static_cast<std::size_t>(
            rng.uniform(0.0, static_cast<double>(s.samples.size())));
        CHECK(invariant_residual_at(s, std::min(i, s.samples.size() - 1)) <=
              1e-10);
    }
    // Boundary samples (gamma = 0) stay finite and tiny via the limits.
    CHECK(invariant_residual_at(s, 0) <= 1e-10);
    CHECK(invariant_residual_at(s, s.boundary_index()) <= 1e-10);
    CHECK(invariant_residual_at(s, s.samples.size() - 1) <= 1e-10);
}

TEST_CASE("invariant residual detects a perturbed drive") {
    const double T = 29.5;
    const PulseSchedule s =
        compile_noncyclic_gate({kPi / 2.0, 0.0}, 0.46, T);
    const std::size_t i = s.samples.size() / 3;
    const InvariantParams p = invariant_params_at(
        s.samples[i].t, s.gate.theta, s.gate.phi, s.amplitude, s.T);
    LambdaHamiltonian h;
    h.omega0 = 1.1 * s.samples[i].omega0;  // +10% on channel 0
    h.omega1 = s.samples[i].omega1;
    h.phi = s.segment_phases(s.segment_of_index(i)).channel1;
    CHECK(invariant_residual(p, h.matrix()) > 1e-4);
}

TEST_CASE("lr phases: zero rotation gives zero phase") {
    const LrPhases p = lr_phase(1, 14.0, 0.0, 0.46, 28.0);
    CHECK(p.alpha_plus == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
    CHECK(p.alpha_minus == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
}

TEST_CASE("lr phases: segment integrals mirror") {
    testutil::Rng rng(17);
    for (int k = 0; k < 6; ++k) {
        const double theta = rng.uniform(0.2, kPi);
        const double A = rng.uniform(0.15, 0.9);
        const double T = rng.uniform(20.0, 60.0);
        const LrPhases s1 = lr_phase(1, T / 2.0, theta, A, T);
        const LrPhases s2 = lr_phase(2, T, theta, A, T);
        CHECK(s1.alpha_plus ==
              doctest::Approx(s2.alpha_plus).epsilon(1e-8).scale(1.0));
        CHECK(s1.alpha_plus == doctest::Approx(-s1.alpha_minus));
    }
}

TEST_CASE("lr phase regression anchor") {
    // Frozen quadrature value for theta = pi/2, A = 0.46 (T-independent).
    const LrPhases p = lr_phase(1, 29.5 / 2.0, kPi / 2.0, 0.46, 29.5);
    CHECK(p.alpha_plus == doctest::Approx(-1.2697689532).epsilon(2e-9));
    const LrPhases q = lr_phase(1, 20.0, kPi / 2.0, 0.46, 40.0);
    CHECK(q.alpha_plus == doctest::Approx(p.alpha_plus).epsilon(1e-9));
}

TEST_CASE("lr phase rejects out-of-segment end times") {
    CHECK_THROWS_AS(lr_phase(1, 25.0, 1.0, 0.4, 30.0), DomainError);
    CHECK_THROWS_AS(lr_phase(2, 5.0, 1.0, 0.4, 30.0), DomainError);
}

TEST_CASE("invariant scale must be positive") {
    InvariantParams p;
    p.lambda = 0.0;
    CHECK_THROWS_AS(invariant_at(p), DomainError);
    CHECK_THROWS_AS(dressed_states_at(p), DomainError);
    p.lambda = 2.5;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(
        invariant_at(p), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(2) == doctest::Approx(1.25));
}

TEST_CASE("lambda hamiltonian matrix layout") {
    const LambdaHamiltonian h{0.3, 0.5, 0.7};
    const Eigen::Matrix3cd m = h.matrix();
    CHECK((m - m.adjoint()).norm() < 1e-16);
    CHECK(std::abs(m(0, 0)) + std::abs(m(1, 1)) + std::abs(m(2, 2)) == 0.0);
    CHECK(std::abs(m(0, 1) - 0.15) < 1e-16);
    CHECK(std::abs(m(1, 2) -
                   0.25 * std::exp(std::complex<double>(0.0, -0.7))) < 1e-16);
    CHECK(std::abs(m(0, 2)) == 0.0);
}
