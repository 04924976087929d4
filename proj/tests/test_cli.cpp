#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "holopulse/io.hpp"

// End-to-end checks of the command-line tool: exit codes, determinism and
// the content of the emitted files.  The binary path comes from the build.

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "holopulse_cli_test";
    fs::create_directories(dir);
    const fs::path log = dir / "out.log";
    const std::string cmd = std::string(HOLOPULSE_CLI_PATH) + " " + args +
                            " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const fs::path kDir = fs::temp_directory_path() / "holopulse_cli_test";

}  // namespace

TEST_CASE("cli: compile writes deterministic waveforms") {
    fs::create_directories(kDir);
    const fs::path wf1 = kDir / "wf1.txt";
    const fs::path wf2 = kDir / "wf2.txt";
    const std::string base =
        "compile --theta 1.0 --phi 0.3 --A 0.5 --T 30 --out ";
    CHECK(run_cli(base + wf1.string()).exit_code == 0);
    CHECK(run_cli(base + wf2.string()).exit_code == 0);
    CHECK(slurp(wf1) == slurp(wf2));
    CHECK_FALSE(slurp(wf1).empty());
}

TEST_CASE("cli: compile with theta 0 drives only channel 0") {
    const fs::path wf = kDir / "wf_id.txt";
    const RunResult r = run_cli("compile --theta 0 --phi 0 --A 0.3 --T 30 "
                                "--out " + wf.string());
    CHECK(r.exit_code == 0);
    const holopulse::PulseSchedule s = holopulse::read_waveform(wf);
    for (const auto& sample : s.samples)
        CHECK(std::abs(sample.omega1) < 1e-12);
}

TEST_CASE("cli: simulate without noise reports unit fidelity") {
    const fs::path out = kDir / "res_clean.txt";
    const RunResult r = run_cli(
        "simulate --theta 0.9 --phi 0.4 --A 0.5 --rabi-cap 0.25 "
        "--gamma1 0 --gamma2 0 --eps 0,0 --metric state --out " +
        out.string());
    CHECK(r.exit_code == 0);
    const holopulse::ResultDoc doc = holopulse::read_result(out);
    REQUIRE(doc.find("state_fidelity") != nullptr);
    CHECK(std::stod(*doc.find("state_fidelity")) >= 1.0 - 1e-6);
}

TEST_CASE("cli: simulate defaults reproduce the reference fidelities") {
    const fs::path out = kDir / "res_ref.txt";
    const double half_pi = std::numbers::pi / 2.0;
    std::ostringstream cmd;
    cmd.precision(17);
    cmd << "simulate --theta " << half_pi << " --phi " << half_pi << " --out "
        << out.string();
    const RunResult r = run_cli(cmd.str());
    CHECK(r.exit_code == 0);
    const holopulse::ResultDoc doc = holopulse::read_result(out);
    REQUIRE(doc.find("state_fidelity") != nullptr);
    REQUIRE(doc.find("gate_fidelity") != nullptr);
    CHECK(std::stod(*doc.find("state_fidelity")) ==
          doctest::Approx(0.9991).epsilon(1e-3));
    CHECK(std::stod(*doc.find("gate_fidelity")) ==
          doctest::Approx(0.9984).epsilon(1e-3));
    CHECK(std::stod(*doc.find("A")) == doctest::Approx(0.46));
}

TEST_CASE("cli: recorded time series has monotone time and unit trace") {
    const fs::path series = kDir / "series.csv";
    const fs::path out = kDir / "res_rec.txt";
    const RunResult r = run_cli(
        "simulate --theta 0.7 --phi 0 --A 0.4 --rabi-cap 0.25 --metric state "
        "--record --record-out " + series.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(series);
    std::string line;
    double prev_t = -1.0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            CHECK(line == "t,P0,Pe,P1,trace");
            continue;
        }
        double t, p0, pe, p1, tr;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &p0,
                            &pe, &p1, &tr) == 5);
        CHECK(t > prev_t);
        prev_t = t;
        CHECK(std::abs(tr - 1.0) < 1e-6);
    }
    CHECK(header_seen);
}

TEST_CASE("cli: export converts waveforms to csv") {
    const fs::path wf = kDir / "wf_exp.txt";
    const fs::path csv = kDir / "wf_exp.csv";
    CHECK(run_cli("compile --theta 1.2 --phi 0 --A 0.5 --T 28 --out " +
                  wf.string())
              .exit_code == 0);
    CHECK(run_cli("export --in " + wf.string() + " --format csv --out " +
                  csv.string())
              .exit_code == 0);
    const std::string text = slurp(csv);
    CHECK(text.find("t,omega0,omega1,phi") != std::string::npos);
}

TEST_CASE("cli: usage errors exit with code 2") {
    CHECK(run_cli("sweep").exit_code == 2);                      // no grid/kind
    CHECK(run_cli("sweep --kind robustness --eps-grid \"\" --theta 1")
              .exit_code == 2);                                  // empty grid
    CHECK(run_cli("compile --theta 1 --A 0.4").exit_code == 2);  // no T/cap
    CHECK(run_cli("compile --theta 1 --A xyz --T 30").exit_code == 2);
    CHECK(run_cli("compile --theta 1 --A 0.4 --T 30 --rabi-cap 0.2")
              .exit_code == 2);                                  // both given
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("simulate --theta 0.5 --eps banana").exit_code == 2);
}

TEST_CASE("cli: numerical failures exit with code 1") {
    CHECK(run_cli("compile --theta 1 --A 9.9 --T 30 --out " +
                  (kDir / "never.txt").string())
              .exit_code == 1);
}

TEST_CASE("cli: small sweep emits result and csv files") {
    const fs::path prefix = kDir / "sw_";
    const RunResult r = run_cli(
        "sweep --kind area --theta 1.5707963 --A-grid 0.35:0.6:6 --out " +
        prefix.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(fs::path(prefix.string() + "area.txt")));
    CHECK(fs::exists(fs::path(prefix.string() + "area.csv")));
    const holopulse::ResultDoc doc =
        holopulse::read_result(prefix.string() + "area.txt");
    REQUIRE(doc.arrays.size() == 2);
    CHECK(doc.arrays[1].values.size() == 6);
}
