#pragma once

#include <map>
#include <string>
#include <vector>

#include "holopulse/dynamics.hpp"
#include "holopulse/gate.hpp"

// Batch experiment harness: area-vs-amplitude curves, minimum-area curves,
// Rabi-error robustness grids for both schemes, and population traces.
// Every sweep is deterministic for a given configuration; grid cells are
// independent and may be evaluated by a worker pool, with results assembled
// by index so parallel and serial runs agree bit for bit.

namespace holopulse {

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

// One dense value array over the cartesian product of the axes (row-major,
// last axis fastest).
struct SweepColumn {
    std::string name;
    std::vector<double> values;
};

struct SweepMeta {
    std::string kind;
    std::string scheme;
    std::string metric;
    std::string version;
    GateSpec gate;
    NoiseModel noise;
    // Wall-clock stamp for in-memory provenance; serializers omit it unless
    // explicitly asked so that identical runs produce identical files.
    std::string timestamp;
    std::map<std::string, std::string> extra;
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    std::vector<SweepColumn> columns;
    SweepMeta meta;

    std::size_t cell_count() const;
    void validate() const;  // shapes match, fidelity columns within [0, 1]
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Resolve a worker count: explicit argument, else HOLOPULSE_WORKERS, else
// hardware concurrency.
int resolve_worker_count(int requested);

// S(A) curve at fixed theta; failed compiles are recorded as NaN cells.
SweepResult area_vs_A(double theta, double T,
                      const std::vector<double>& A_grid);

// (A*, S_min) per theta via minimize_area.
SweepResult smin_vs_theta(const std::vector<double>& theta_grid,
                          double T = 40.0);

enum class FidelityMetric { State, Gate };

// Reference schedules used by the presets, scaled to the default Rabi cap:
//   - pi_area_schedule: pulse-area-pi-matched noncyclic schedule (the
//     baseline comparison operates all gates at S = pi).
//   - reference_schedule: minimum-area noncyclic schedule (the bundled
//     theta = pi/2 and pi/4 operating points use their published
//     amplitudes A = 0.46 and 0.38).
//   - reference_nhqc_schedule: conventional baseline with the envelope
//     shape of the theta = pi/2 noncyclic drive's Omega_1.
PulseSchedule reference_schedule(const GateSpec& spec);
PulseSchedule pi_area_schedule(const GateSpec& spec);
PulseSchedule reference_nhqc_schedule(const GateSpec& spec);

// Fidelity over an (eps0, eps1) grid for one scheme, S = pi matched
// schedules, identical integrator settings in both schemes.
SweepResult robustness_grid(const GateSpec& spec, Scheme scheme,
                            const std::vector<double>& eps0_grid,
                            const std::vector<double>& eps1_grid,
                            const NoiseModel& noise, FidelityMetric metric,
                            int workers = 0);

// Time series (t, P0, Pe, P1, F) for the reference schedule of `spec`.
SweepResult population_trace(const GateSpec& spec,
                             const Eigen::Vector2cd& psi0,
                             const NoiseModel& noise);

// Plain mean of a column and the fraction of cells where `a` beats `b`.
double column_mean(const SweepResult& r, const std::string& column);
double win_fraction(const SweepResult& a, const SweepResult& b,
                    const std::string& column);

// Trapezoid-weighted mean over the axes' region: the discretization of the
// average over the swept rectangle.  Unlike the plain cell mean (whose edge
// weighting biases it by O(1/N)), this statistic is grid-resolution
// independent, which is what makes refinement comparisons meaningful.
double grid_mean(const SweepResult& r, const std::string& column);

// Bundled dataset presets.
SweepResult preset_area_curve();                       // S(A), theta = pi/2
SweepResult preset_min_area_curve();                   // S_min over theta
SweepResult preset_population_trace(double theta);     // R[theta, pi/2]
// Robustness grids for the standard comparison: for each theta in
// {pi/2, pi/4}, the noncyclic gate R[theta, axis_phi] against the
// conventional baseline of the same rotation; 41x41 grid over
// [-0.2, 0.2]^2, gate-fidelity metric, default decoherence rates.
std::vector<SweepResult> preset_robustness_grids(double axis_phi,
                                                 int workers = 0);

}  // namespace holopulse
