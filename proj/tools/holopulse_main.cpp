// holopulse: batch CLI for Lambda-system holonomic pulse engineering.
//
//   compile   synthesize a drive schedule and export it as a waveform file
//   simulate  evolve a gate under decoherence/Rabi errors, report fidelities
//   sweep     run bundled or custom parameter sweeps to result/CSV files
//   export    convert an existing waveform file
//
// Exit codes: 0 success, 1 numerical/compile failure, 2 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "holopulse/dynamics.hpp"
#include "holopulse/gate.hpp"
#include "holopulse/io.hpp"
#include "holopulse/mapping.hpp"
#include "holopulse/sweep.hpp"
#include "holopulse/units.hpp"
#include "holopulse/version.hpp"

namespace hp = holopulse;

namespace {

struct CommonGateOptions {
    double theta = 0.0;
    double phi = 0.0;
    std::string amplitude = "auto";
    double T = 0.0;
    double rabi_cap = 0.0;
    double step = 0.0;
    std::string scheme = "noncyclic";
};

std::string now_stamp() {
    const auto t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::optional<std::string> stamp_opt(bool stamp) {
    if (!stamp) return std::nullopt;
    return now_stamp();
}

double resolve_amplitude(const CommonGateOptions& o, double compile_T) {
    if (o.amplitude != "auto") {
        try {
            std::size_t pos = 0;
            const double a = std::stod(o.amplitude, &pos);
            if (pos != o.amplitude.size()) throw std::invalid_argument("");
            return a;
        } catch (const std::exception&) {
            throw hp::UsageError("--A expects a number or 'auto'");
        }
    }
    // Bundled operating points for the standard gates, area minimizer
    // otherwise.
    if (std::abs(o.theta - std::numbers::pi / 2.0) < 1e-6) return 0.46;
    if (std::abs(o.theta - std::numbers::pi / 4.0) < 1e-6) return 0.38;
    return hp::minimize_area(o.theta, compile_T > 0.0 ? compile_T : 40.0)
        .A_star;
}

hp::PulseSchedule build_schedule(const CommonGateOptions& o) {
    if ((o.T > 0.0) == (o.rabi_cap > 0.0))
        throw hp::UsageError("specify exactly one of --T and --rabi-cap");
    const double compile_T = o.T > 0.0 ? o.T : 40.0;
    const hp::GateSpec spec{o.theta, o.phi};
    const hp::Scheme scheme = hp::scheme_from_string(o.scheme);

    hp::PulseSchedule s;
    if (scheme == hp::Scheme::NoncyclicSta) {
        const double A = resolve_amplitude(o, compile_T);
        s = hp::compile_noncyclic_gate(spec, A, compile_T, o.step);
    } else {
        const hp::PulseSchedule shape = hp::compile_noncyclic_gate(
            {std::numbers::pi / 2.0, o.phi}, 0.46, compile_T, o.step);
        s = hp::compile_nhqc_baseline(spec, hp::envelope_from_channel1(shape),
                                      compile_T, o.step);
    }
    if (o.rabi_cap > 0.0) s = hp::scale_to_rabi_cap(s, o.rabi_cap);
    return s;
}

void add_gate_options(CLI::App* cmd, CommonGateOptions& o,
                      bool default_cap = false) {
    cmd->add_option("--theta", o.theta, "Rotation angle (rad, in [0, pi])")
        ->required();
    cmd->add_option("--phi", o.phi, "Rotation axis phase (rad)");
    cmd->add_option("--A", o.amplitude,
                    "Path amplitude, or 'auto' for the bundled operating "
                    "point / area minimizer");
    cmd->add_option("--T", o.T, "Total duration (ns)");
    auto* cap = cmd->add_option(
        "--rabi-cap", o.rabi_cap,
        "Peak per-channel coupling amplitude (rad/ns); rescales time");
    if (default_cap) cap->default_val(hp::kDefaultRabiCap);
    cmd->add_option("--dt", o.step,
                    "Propagator step (ns); defaults to T/4000");
    cmd->add_option("--scheme", o.scheme, "noncyclic | nhqc")
        ->check(CLI::IsMember({"noncyclic", "nhqc"}));
}

std::vector<double> parse_grid(const std::string& spec,
                               const std::string& what) {
    if (spec.empty()) throw hp::UsageError(what + ": empty grid spec");
    double lo, hi;
    std::size_t n;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%zu", &lo, &hi, &n) != 3 || n == 0)
        throw hp::UsageError(what + ": expected lo:hi:n with n >= 1, got '" +
                             spec + "'");
    return hp::linspace(lo, hi, n);
}

void write_sweep_outputs(const hp::SweepResult& r,
                         const std::filesystem::path& prefix,
                         const std::string& name, bool stamp) {
    const std::filesystem::path doc_path =
        prefix.string() + name + ".txt";
    const std::filesystem::path csv_path =
        prefix.string() + name + ".csv";
    hp::write_result(doc_path, hp::result_from_sweep(r, stamp_opt(stamp)));
    hp::write_csv(csv_path, r);
    std::cout << "wrote " << doc_path.string() << " and " << csv_path.string()
              << "\n";
}

int run_compile(const CommonGateOptions& o, const std::string& out,
                const std::string& summary_path, const std::string& platform,
                bool stamp) {
    const hp::PulseSchedule s = build_schedule(o);

    std::optional<hp::Platform> plat;
    if (!platform.empty()) plat = hp::platform_from_string(platform);
    hp::write_waveform(out, s, plat, stamp_opt(stamp));

    const Eigen::Matrix3cd u = hp::propagate_unitary(s);
    const double overlap = hp::gate_overlap(hp::target_unitary(s.gate),
                                            hp::qubit_block(u));
    const double leak = std::norm(u(1, 0)) + std::norm(u(1, 2));

    hp::ResultDoc doc;
    doc.add("kind", "compile");
    doc.add("version", std::string(hp::kVersion));
    doc.add("scheme", std::string(hp::scheme_name(s.scheme)));
    doc.add("gate.theta", s.gate.theta);
    doc.add("gate.phi", s.gate.phi);
    doc.add("A", s.amplitude);
    doc.add("S", hp::pulse_area(s));
    doc.add("T", s.T);
    doc.add("dt", 2.0 * s.dt);
    doc.add("peak_amplitude", s.peak_channel_amplitude());
    doc.add("gate_residual", 1.0 - overlap);
    doc.add("leakage", leak);
    doc.add("waveform", out);
    if (!summary_path.empty()) hp::write_result(summary_path, doc);
    std::cout << doc.to_string();
    return 0;
}

int run_simulate(const CommonGateOptions& o, const hp::NoiseModel& noise,
                 const std::string& metric, int n_states, bool record,
                 const std::string& record_out, const std::string& out,
                 bool stamp) {
    const hp::PulseSchedule s = build_schedule(o);
    const hp::GateSpec spec = s.gate;

    hp::ResultDoc doc;
    doc.add("kind", "simulate");
    doc.add("version", std::string(hp::kVersion));
    if (stamp) doc.add("generated", now_stamp());
    doc.add("scheme", std::string(hp::scheme_name(s.scheme)));
    doc.add("gate.theta", spec.theta);
    doc.add("gate.phi", spec.phi);
    doc.add("A", s.amplitude);
    doc.add("S", hp::pulse_area(s));
    doc.add("T", s.T);
    doc.add("noise.gamma1", noise.gamma1);
    doc.add("noise.gamma2", noise.gamma2);
    doc.add("noise.eps0", noise.eps0);
    doc.add("noise.eps1", noise.eps1);

    Eigen::Vector2cd ground;
    ground << 1.0, 0.0;
    const Eigen::Vector2cd target_state = hp::target_unitary(spec) * ground;

    if (metric == "state" || metric == "both") {
        Eigen::Vector3cd psi0;
        psi0 << 1.0, 0.0, 0.0;
        if (record) {
            auto [rho_t, records] = hp::lindblad_evolve_recorded(
                s, psi0 * psi0.adjoint(), noise);
            doc.add("state_fidelity",
                    hp::state_fidelity(rho_t, target_state));
            if (!record_out.empty()) {
                hp::SweepResult series;
                std::vector<double> ts, p0, pe, p1, tr;
                for (const auto& rec : records) {
                    ts.push_back(rec.t);
                    p0.push_back(rec.p0);
                    pe.push_back(rec.pe);
                    p1.push_back(rec.p1);
                    tr.push_back(rec.trace);
                }
                series.axes = {{"t", ts}};
                series.columns = {{"P0", p0}, {"Pe", pe}, {"P1", p1},
                                  {"trace", tr}};
                series.meta.kind = "time_series";
                series.meta.scheme = std::string(hp::scheme_name(s.scheme));
                series.meta.metric = "populations";
                series.meta.version = std::string(hp::kVersion);
                series.meta.gate = spec;
                series.meta.noise = noise;
                hp::write_csv(record_out, series);
                doc.add("time_series", record_out);
            }
        } else {
            const hp::DensityMatrix3 rho_t =
                hp::lindblad_evolve(s, psi0 * psi0.adjoint(), noise);
            doc.add("state_fidelity",
                    hp::state_fidelity(rho_t, target_state));
        }
    }
    if (metric == "gate" || metric == "both")
        doc.add("gate_fidelity",
                hp::avg_gate_fidelity(spec, s, noise, n_states));

    if (!out.empty()) hp::write_result(out, doc);
    std::cout << doc.to_string();
    return 0;
}

int run_sweep(const std::string& fig, const std::string& kind,
              const CommonGateOptions& gate, const hp::NoiseModel& noise,
              const std::string& a_grid, const std::string& theta_grid,
              const std::string& eps_grid, const std::string& scheme,
              const std::string& metric, int workers,
              const std::string& prefix, bool stamp) {
    const auto metric_of = [&]() {
        return metric == "state" ? hp::FidelityMetric::State
                                 : hp::FidelityMetric::Gate;
    };

    if (!fig.empty()) {
        if (fig == "2b") {
            write_sweep_outputs(hp::preset_area_curve(), prefix, "fig2b",
                                stamp);
        } else if (fig == "2c") {
            write_sweep_outputs(hp::preset_min_area_curve(), prefix, "fig2c",
                                stamp);
        } else if (fig == "3") {
            write_sweep_outputs(
                hp::preset_population_trace(std::numbers::pi / 2.0), prefix,
                "fig3a", stamp);
            write_sweep_outputs(
                hp::preset_population_trace(std::numbers::pi / 4.0), prefix,
                "fig3b", stamp);
        } else if (fig == "4" || fig == "5") {
            const double axis_phi =
                fig == "4" ? std::numbers::pi / 2.0 : 0.0;
            std::vector<hp::SweepResult> grids =
                hp::preset_robustness_grids(axis_phi, workers);
            for (std::size_t i = 0; i < grids.size(); ++i) {
                const std::string tag = grids[i].meta.scheme;
                if (scheme == "noncyclic" && tag != "noncyclic-sta") continue;
                if (scheme == "nhqc" && tag != "nhqc") continue;
                write_sweep_outputs(grids[i], prefix,
                                    "fig" + fig +
                                        grids[i].meta.extra.at("panel"),
                                    stamp);
            }
            if (scheme == "both") {
                for (std::size_t i = 0; i + 2 < grids.size(); i += 1) {
                    if (grids[i].meta.scheme != "nhqc") continue;
                    const hp::SweepResult& nc = grids[i + 2];
                    std::cout << "gate theta=" << grids[i].meta.gate.theta
                              << ": mean noncyclic "
                              << hp::grid_mean(nc, "gate_fidelity")
                              << " vs nhqc "
                              << hp::grid_mean(grids[i], "gate_fidelity")
                              << " (win fraction "
                              << hp::win_fraction(nc, grids[i],
                                                  "gate_fidelity")
                              << ")\n";
                }
            }
        } else {
            throw hp::UsageError("--fig must be one of 2b|2c|3|4|5");
        }
        return 0;
    }

    if (kind == "area") {
        const std::vector<double> grid = parse_grid(a_grid, "--A-grid");
        write_sweep_outputs(hp::area_vs_A(gate.theta,
                                          gate.T > 0.0 ? gate.T : 40.0, grid),
                            prefix, "area", stamp);
    } else if (kind == "smin") {
        const std::vector<double> grid =
            parse_grid(theta_grid, "--theta-grid");
        write_sweep_outputs(hp::smin_vs_theta(grid), prefix, "smin", stamp);
    } else if (kind == "robustness") {
        const std::vector<double> grid = parse_grid(eps_grid, "--eps-grid");
        const hp::GateSpec spec{gate.theta, gate.phi};
        if (scheme == "noncyclic" || scheme == "both")
            write_sweep_outputs(
                hp::robustness_grid(spec, hp::Scheme::NoncyclicSta, grid,
                                    grid, noise, metric_of(), workers),
                prefix, "robustness_noncyclic", stamp);
        if (scheme == "nhqc" || scheme == "both")
            write_sweep_outputs(
                hp::robustness_grid(spec, hp::Scheme::Nhqc, grid, grid,
                                    noise, metric_of(), workers),
                prefix, "robustness_nhqc", stamp);
    } else if (kind == "trace") {
        Eigen::Vector2cd ground;
        ground << 1.0, 0.0;
        write_sweep_outputs(
            hp::population_trace({gate.theta, gate.phi}, ground, noise),
            prefix, "trace", stamp);
    } else {
        throw hp::UsageError(
            "sweep needs --fig or --kind area|smin|robustness|trace");
    }
    return 0;
}

int run_export(const std::string& in, const std::string& format,
               const std::string& platform, const std::string& out,
               bool stamp) {
    const hp::PulseSchedule s = hp::read_waveform(in);
    if (format == "waveform") {
        std::optional<hp::Platform> plat;
        if (!platform.empty()) plat = hp::platform_from_string(platform);
        hp::write_waveform(out, s, plat, stamp_opt(stamp));
    } else if (format == "csv") {
        hp::SweepResult table;
        std::vector<double> ts, o0, o1, ph;
        for (std::size_t i = 0; i < s.samples.size(); ++i) {
            ts.push_back(s.samples[i].t);
            o0.push_back(s.samples[i].omega0);
            o1.push_back(s.samples[i].omega1);
            ph.push_back(s.segment_phases(s.segment_of_index(i)).channel1);
        }
        table.axes = {{"t", ts}};
        table.columns = {{"omega0", o0}, {"omega1", o1}, {"phi", ph}};
        table.meta.kind = "waveform";
        table.meta.scheme = std::string(hp::scheme_name(s.scheme));
        table.meta.metric = "couplings";
        table.meta.version = std::string(hp::kVersion);
        table.meta.gate = s.gate;
        hp::write_csv(out, table);
    } else {
        throw hp::UsageError("--format must be waveform or csv");
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lambda-system holonomic pulse engineering toolkit"};
    app.set_version_flag("--version", std::string(hp::kVersion));
    app.set_config("--config", "", "Declarative config file; flags win");
    app.require_subcommand(1);

    bool stamp = false;
    app.add_flag("--stamp", stamp,
                 "Embed a wall-clock timestamp in output files");

    // compile
    auto* compile = app.add_subcommand("compile",
                                       "Synthesize and export a schedule");
    CommonGateOptions copt;
    std::string c_out = "waveform.txt", c_summary, c_platform;
    add_gate_options(compile, copt);
    compile->add_option("--out", c_out, "Waveform output path");
    compile->add_option("--summary", c_summary, "Summary record path");
    compile->add_option("--platform", c_platform,
                        "Annotate with a platform level mapping");

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "Evolve a gate under noise and report fidelities");
    CommonGateOptions sopt;
    add_gate_options(simulate, sopt, /*default_cap=*/true);
    hp::NoiseModel snoise{hp::kDefaultDecayRate, hp::kDefaultDephasingRate,
                          0.0, 0.0};
    std::string s_eps = "0,0", s_metric = "both", s_record_out,
                s_out = "result.txt";
    int s_states = 1001;
    bool s_record = false;
    simulate->add_option("--gamma1", snoise.gamma1, "Decay rate (rad/ns)")
        ->capture_default_str();
    simulate->add_option("--gamma2", snoise.gamma2, "Dephasing rate (rad/ns)")
        ->capture_default_str();
    simulate->add_option("--eps", s_eps, "Rabi error fractions 'e0,e1'");
    simulate->add_option("--metric", s_metric, "state | gate | both")
        ->check(CLI::IsMember({"state", "gate", "both"}));
    simulate->add_option("--states", s_states,
                         "Input states for the gate-fidelity average");
    simulate->add_flag("--record", s_record, "Record the population dynamics");
    simulate->add_option("--record-out", s_record_out,
                         "Time-series CSV path (with --record)");
    simulate->add_option("--out", s_out, "Result record path");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Batch parameter sweeps");
    CommonGateOptions wopt;
    wopt.theta = std::numbers::pi / 2.0;
    std::string w_fig, w_kind, w_a_grid, w_theta_grid, w_eps_grid;
    std::string w_scheme = "both", w_metric = "gate", w_prefix = "sweep_";
    int w_workers = 0;
    hp::NoiseModel wnoise{hp::kDefaultDecayRate, hp::kDefaultDephasingRate,
                          0.0, 0.0};
    sweep->add_option("--fig", w_fig, "Bundled dataset: 2b|2c|3|4|5");
    sweep->add_option("--kind", w_kind, "area | smin | robustness | trace");
    sweep->add_option("--theta", wopt.theta, "Gate rotation angle (rad)");
    sweep->add_option("--phi", wopt.phi, "Gate axis phase (rad)");
    sweep->add_option("--T", wopt.T, "Compile duration (ns)");
    sweep->add_option("--A-grid", w_a_grid, "Amplitude grid lo:hi:n");
    sweep->add_option("--theta-grid", w_theta_grid, "Theta grid lo:hi:n");
    sweep->add_option("--eps-grid", w_eps_grid, "Rabi error grid lo:hi:n");
    sweep->add_option("--scheme", w_scheme, "noncyclic | nhqc | both")
        ->check(CLI::IsMember({"noncyclic", "nhqc", "both"}));
    sweep->add_option("--metric", w_metric, "gate | state")
        ->check(CLI::IsMember({"gate", "state"}));
    sweep->add_option("--gamma1", wnoise.gamma1, "Decay rate (rad/ns)")
        ->capture_default_str();
    sweep->add_option("--gamma2", wnoise.gamma2, "Dephasing rate (rad/ns)")
        ->capture_default_str();
    sweep->add_option("--workers", w_workers,
                      "Worker pool width (default: HOLOPULSE_WORKERS or "
                      "hardware)");
    sweep->add_option("--out", w_prefix, "Output file prefix");

    // export
    auto* exp = app.add_subcommand("export", "Convert a waveform file");
    std::string e_in, e_format = "csv", e_platform, e_out = "export.csv";
    exp->add_option("--in", e_in, "Input waveform file")->required();
    exp->add_option("--format", e_format, "waveform | csv");
    exp->add_option("--platform", e_platform, "Platform level mapping");
    exp->add_option("--out", e_out, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*compile)
            return run_compile(copt, c_out, c_summary, c_platform, stamp);
        if (*simulate) {
            double e0, e1;
            if (std::sscanf(s_eps.c_str(), "%lf,%lf", &e0, &e1) != 2)
                throw hp::UsageError("--eps expects 'e0,e1'");
            snoise.eps0 = e0;
            snoise.eps1 = e1;
            return run_simulate(sopt, snoise, s_metric, s_states, s_record,
                                s_record_out, s_out, stamp);
        }
        if (*sweep)
            return run_sweep(w_fig, w_kind, wopt, wnoise, w_a_grid,
                             w_theta_grid, w_eps_grid, w_scheme, w_metric,
                             w_workers, w_prefix, stamp);
        if (*exp) return run_export(e_in, e_format, e_platform, e_out, stamp);
    } catch (const hp::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const hp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
