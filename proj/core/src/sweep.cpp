#include "holopulse/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "holopulse/units.hpp"
#include "holopulse/version.hpp"

namespace holopulse {

namespace {

constexpr double kPi = std::numbers::pi;

// Operating points for the bundled gates; see reference_schedule.
constexpr double kAmplitudeHalfPi = 0.46;
constexpr double kAmplitudeQuarterPi = 0.38;
constexpr double kDurationHalfPi = 29.5;  // ns, at the default Rabi cap
constexpr double kReferenceDuration = 40.0;  // ns, pre-cap compile grid

bool near(double a, double b) { return std::abs(a - b) < 1e-6; }

SweepMeta make_meta(std::string kind, const GateSpec& gate,
                    const NoiseModel& noise, std::string scheme,
                    std::string metric) {
    SweepMeta m;
    m.kind = std::move(kind);
    m.gate = gate;
    m.noise = noise;
    m.scheme = std::move(scheme);
    m.metric = std::move(metric);
    m.version = std::string(kVersion);
    return m;
}

void run_parallel(std::size_t n_cells, int workers,
                  const std::function<void(std::size_t)>& work) {
    const int n_workers =
        std::max(1, std::min<int>(workers, static_cast<int>(n_cells)));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < n_cells; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_cells || failed.load()) return;
                try {
                    work(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::size_t SweepResult::cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

void SweepResult::validate() const {
    const std::size_t n = cell_count();
    for (const auto& c : columns) {
        if (c.values.size() != n)
            throw DomainError("sweep: column '" + c.name +
                              "' does not match the axes shape");
        if (c.name.find("fidelity") != std::string::npos) {
            for (double v : c.values) {
                if (std::isnan(v)) continue;  // recorded failure
                if (v < -1e-9 || v > 1.0 + 1e-9)
                    throw DomainError("sweep: fidelity outside [0, 1]");
            }
        }
    }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw DomainError("linspace: need at least one point");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
    return v;
}

int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HOLOPULSE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

SweepResult area_vs_A(double theta, double T,
                      const std::vector<double>& A_grid) {
    if (A_grid.empty()) throw UsageError("area_vs_A: empty amplitude grid");
    SweepResult r;
    r.axes = {{"A", A_grid}};
    SweepColumn area{"pulse_area", {}};
    area.values.reserve(A_grid.size());
    for (double A : A_grid) {
        try {
            area.values.push_back(
                pulse_area(compile_noncyclic_gate({theta, 0.0}, A, T)));
        } catch (const Error&) {
            area.values.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    r.columns = {std::move(area)};
    r.meta = make_meta("area_vs_A", {theta, 0.0}, {}, "noncyclic-sta",
                       "pulse_area");
    r.validate();
    return r;
}

SweepResult smin_vs_theta(const std::vector<double>& theta_grid, double T) {
    if (theta_grid.empty()) throw UsageError("smin_vs_theta: empty theta grid");
    SweepResult r;
    r.axes = {{"theta", theta_grid}};
    SweepColumn a_star{"A_star", {}}, s_min{"S_min", {}};
    for (double theta : theta_grid) {
        try {
            const AreaMinimum m = minimize_area(theta, T);
            a_star.values.push_back(m.A_star);
            s_min.values.push_back(m.S_min);
        } catch (const Error&) {
            a_star.values.push_back(std::numeric_limits<double>::quiet_NaN());
            s_min.values.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    r.columns = {std::move(a_star), std::move(s_min)};
    r.meta = make_meta("smin_vs_theta", {}, {}, "noncyclic-sta", "pulse_area");
    r.validate();
    return r;
}

PulseSchedule reference_schedule(const GateSpec& spec) {
    double A;
    if (near(spec.theta, kPi / 2.0)) {
        A = kAmplitudeHalfPi;
    } else if (near(spec.theta, kPi / 4.0)) {
        A = kAmplitudeQuarterPi;
    } else {
        A = minimize_area(spec.theta, kReferenceDuration).A_star;
    }
    return scale_to_rabi_cap(
        compile_noncyclic_gate(spec, A, kReferenceDuration), kDefaultRabiCap);
}

PulseSchedule pi_area_schedule(const GateSpec& spec) {
    if (near(spec.theta, kPi / 2.0)) {
        // Standard operating point: S(0.46) = pi to within 0.4%, peak
        // amplitude at the default cap for T = 29.5 ns.
        return compile_noncyclic_gate(spec, kAmplitudeHalfPi, kDurationHalfPi);
    }
    const double A = area_matched_amplitude(spec.theta, kPi, AreaBranch::Lower,
                                            kReferenceDuration);
    return scale_to_rabi_cap(
        compile_noncyclic_gate(spec, A, kReferenceDuration), kDefaultRabiCap);
}

PulseSchedule reference_nhqc_schedule(const GateSpec& spec) {
    const PulseSchedule shape = compile_noncyclic_gate(
        {kPi / 2.0, spec.phi}, kAmplitudeHalfPi, kDurationHalfPi);
    const PulseSchedule raw = compile_nhqc_baseline(
        spec, envelope_from_channel1(shape), shape.T, 2.0 * shape.dt);
    return scale_to_rabi_cap(raw, kDefaultRabiCap);
}

SweepResult robustness_grid(const GateSpec& spec, Scheme scheme,
                            const std::vector<double>& eps0_grid,
                            const std::vector<double>& eps1_grid,
                            const NoiseModel& noise, FidelityMetric metric,
                            int workers) {
    if (eps0_grid.empty() || eps1_grid.empty())
        throw UsageError("robustness_grid: empty error grid");

    const PulseSchedule schedule = scheme == Scheme::NoncyclicSta
                                       ? pi_area_schedule(spec)
                                       : reference_nhqc_schedule(spec);
    const Eigen::Matrix2cd target = target_unitary(spec);

    const std::size_t n0 = eps0_grid.size();
    const std::size_t n1 = eps1_grid.size();
    std::vector<double> values(n0 * n1);
    run_parallel(n0 * n1, resolve_worker_count(workers), [&](std::size_t i) {
        NoiseModel cell = noise;
        cell.eps0 = eps0_grid[i / n1];
        cell.eps1 = eps1_grid[i % n1];
        double f;
        try {
            if (metric == FidelityMetric::Gate) {
                f = avg_gate_fidelity(spec, schedule, cell);
            } else {
                Eigen::Vector3cd psi0;
                psi0 << 1.0, 0.0, 0.0;
                const DensityMatrix3 rho_t = lindblad_evolve(
                    schedule, psi0 * psi0.adjoint(), cell);
                Eigen::Vector2cd q;
                q << 1.0, 0.0;
                f = state_fidelity(rho_t, target * q);
            }
        } catch (const Error&) {
            f = std::numeric_limits<double>::quiet_NaN();
        }
        values[i] = f;
    });

    SweepResult r;
    r.axes = {{"eps0", eps0_grid}, {"eps1", eps1_grid}};
    r.columns = {{metric == FidelityMetric::Gate ? "gate_fidelity"
                                                 : "state_fidelity",
                  std::move(values)}};
    r.meta = make_meta("robustness_grid", spec, noise,
                       std::string(scheme_name(scheme)),
                       metric == FidelityMetric::Gate ? "gate" : "state");
    r.meta.extra["schedule.T"] = std::to_string(schedule.T);
    r.meta.extra["schedule.S"] = std::to_string(pulse_area(schedule));
    r.validate();
    return r;
}

SweepResult population_trace(const GateSpec& spec,
                             const Eigen::Vector2cd& psi0,
                             const NoiseModel& noise) {
    const PulseSchedule schedule = reference_schedule(spec);
    const Eigen::Vector2cd target_state = target_unitary(spec) * psi0;

    Eigen::Vector3cd full;
    full << psi0(0), 0.0, psi0(1);
    std::vector<double> ts, p0, pe, p1, fid;
    lindblad_evolve(schedule, full * full.adjoint(), noise,
                    [&](double t, const DensityMatrix3& rho) {
                        ts.push_back(t);
                        p0.push_back(rho(0, 0).real());
                        pe.push_back(rho(1, 1).real());
                        p1.push_back(rho(2, 2).real());
                        fid.push_back(state_fidelity(rho, target_state));
                    });

    SweepResult r;
    r.axes = {{"t", ts}};
    r.columns = {{"P0", std::move(p0)},
                 {"Pe", std::move(pe)},
                 {"P1", std::move(p1)},
                 {"state_fidelity", std::move(fid)}};
    r.meta = make_meta("population_trace", spec, noise, "noncyclic-sta",
                       "state");
    r.meta.extra["schedule.T"] = std::to_string(schedule.T);
    r.validate();
    return r;
}

double column_mean(const SweepResult& r, const std::string& column) {
    for (const auto& c : r.columns) {
        if (c.name != column) continue;
        double sum = 0.0;
        for (double v : c.values) sum += v;
        return sum / static_cast<double>(c.values.size());
    }
    throw DomainError("column_mean: no column '" + column + "'");
}

double grid_mean(const SweepResult& r, const std::string& column) {
    const SweepColumn* col = nullptr;
    for (const auto& c : r.columns)
        if (c.name == column) col = &c;
    if (col == nullptr)
        throw DomainError("grid_mean: no column '" + column + "'");

    double sum = 0.0, total_weight = 0.0;
    const std::size_t cells = r.cell_count();
    for (std::size_t i = 0; i < cells; ++i) {
        std::size_t rem = i;
        double w = 1.0;
        for (std::size_t a = r.axes.size(); a-- > 0;) {
            const std::size_t n = r.axes[a].values.size();
            const std::size_t idx = rem % n;
            rem /= n;
            if (n > 1 && (idx == 0 || idx == n - 1)) w *= 0.5;
        }
        sum += w * col->values[i];
        total_weight += w;
    }
    return sum / total_weight;
}

double win_fraction(const SweepResult& a, const SweepResult& b,
                    const std::string& column) {
    const SweepColumn* ca = nullptr;
    const SweepColumn* cb = nullptr;
    for (const auto& c : a.columns)
        if (c.name == column) ca = &c;
    for (const auto& c : b.columns)
        if (c.name == column) cb = &c;
    if (ca == nullptr || cb == nullptr ||
        ca->values.size() != cb->values.size())
        throw DomainError("win_fraction: incompatible results");
    std::size_t wins = 0;
    for (std::size_t i = 0; i < ca->values.size(); ++i)
        if (ca->values[i] > cb->values[i]) ++wins;
    return static_cast<double>(wins) /
           static_cast<double>(ca->values.size());
}

SweepResult preset_area_curve() {
    return area_vs_A(kPi / 2.0, kReferenceDuration, linspace(0.025, 1.5, 60));
}

SweepResult preset_min_area_curve() {
    // 33-point rotation-angle grid; above theta ~ 0.52 pi the minimum area
    // grows past pi, so the standard curve covers (0, pi/2].
    std::vector<double> grid(33);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = (kPi / 2.0) * static_cast<double>(i + 1) / 33.0;
    return smin_vs_theta(grid, kReferenceDuration);
}

SweepResult preset_population_trace(double theta) {
    NoiseModel noise;
    noise.gamma1 = kDefaultDecayRate;
    noise.gamma2 = kDefaultDephasingRate;
    Eigen::Vector2cd ground;
    ground << 1.0, 0.0;
    return population_trace({theta, kPi / 2.0}, ground, noise);
}

std::vector<SweepResult> preset_robustness_grids(double axis_phi,
                                                 int workers) {
    NoiseModel noise;
    noise.gamma1 = kDefaultDecayRate;
    noise.gamma2 = kDefaultDephasingRate;
    const std::vector<double> eps = linspace(-0.2, 0.2, 41);

    std::vector<SweepResult> out;
    const char* panels = "abcd";
    int panel = 0;
    for (Scheme scheme : {Scheme::Nhqc, Scheme::NoncyclicSta}) {
        for (double theta : {kPi / 2.0, kPi / 4.0}) {
            const GateSpec spec{theta, axis_phi};
            SweepResult r = robustness_grid(spec, scheme, eps, eps, noise,
                                            FidelityMetric::Gate, workers);
            r.meta.extra["panel"] = std::string(1, panels[panel]);
            out.push_back(std::move(r));
            ++panel;
        }
    }
    return out;
}

}  // namespace holopulse
