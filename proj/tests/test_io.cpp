#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>

#include "holopulse/io.hpp"
#include "test_util.hpp"

using namespace holopulse;
namespace {

constexpr double kPi = std::numbers::pi;

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() /
           (std::string("holopulse_test_") + name);
}

}  // namespace

TEST_CASE("waveform round-trip reproduces the schedule") {
    const PulseSchedule s =
        compile_noncyclic_gate({kPi / 2.0, 0.9}, 0.46, 29.5, 29.5 / 400.0);
    const std::string text = waveform_to_string(s);
    const PulseSchedule back = waveform_from_string(text);

    CHECK(back.scheme == s.scheme);
    CHECK(back.gate.theta == doctest::Approx(s.gate.theta).epsilon(1e-12));
    CHECK(back.gate.phi == doctest::Approx(s.gate.phi).epsilon(1e-12));
    CHECK(back.amplitude == doctest::Approx(s.amplitude).epsilon(1e-12));
    CHECK(back.T == doctest::Approx(s.T).epsilon(1e-12));
    CHECK(back.samples.size() == s.samples.size());
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        CHECK(back.samples[i].t ==
              doctest::Approx(s.samples[i].t).epsilon(1e-12));
        CHECK(back.samples[i].omega0 ==
              doctest::Approx(s.samples[i].omega0).epsilon(1e-12).scale(1.0));
        CHECK(back.samples[i].omega1 ==
              doctest::Approx(s.samples[i].omega1).epsilon(1e-12).scale(1.0));
    }
    for (int seg = 1; seg <= 2; ++seg) {
        CHECK(back.segment_phases(seg).channel0 ==
              doctest::Approx(s.segment_phases(seg).channel0).scale(1.0));
        CHECK(back.segment_phases(seg).channel1 ==
              doctest::Approx(s.segment_phases(seg).channel1).scale(1.0));
    }

    // Serialization is idempotent after the first write.
    CHECK(waveform_to_string(back) == text);
}

TEST_CASE("nhqc waveforms round-trip including the common phase") {
    const PulseSchedule shape =
        compile_noncyclic_gate({kPi / 2.0, 0.0}, 0.46, 29.5, 29.5 / 400.0);
    const PulseSchedule s = compile_nhqc_baseline(
        {kPi / 4.0, 0.0}, envelope_from_channel1(shape), shape.T,
        2.0 * shape.dt);
    const PulseSchedule back = waveform_from_string(waveform_to_string(s));
    CHECK(back.scheme == Scheme::Nhqc);
    CHECK(std::isnan(back.amplitude));
    CHECK(back.phases[1].channel0 ==
          doctest::Approx(kPi - kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("waveform files carry platform metadata and survive disk IO") {
    const PulseSchedule s =
        compile_noncyclic_gate({0.8, 0.1}, 0.4, 24.0, 24.0 / 200.0);
    const auto path = temp_file("wf.txt");
    write_waveform(path, s, Platform::Transmon1Q);
    const std::string text = [&] {
        const PulseSchedule b = read_waveform(path);
        return waveform_to_string(b, Platform::Transmon1Q);
    }();
    CHECK(text.find("# platform: transmon-1q") != std::string::npos);
    CHECK(text.find("# levels: |g> |e> |f>") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("waveform reader rejects malformed input") {
    const PulseSchedule s =
        compile_noncyclic_gate({0.8, 0.1}, 0.4, 24.0, 24.0 / 200.0);
    std::string text = waveform_to_string(s);

    SUBCASE("missing header") {
        const std::size_t pos = text.find("# T:");
        std::string broken = text;
        broken.erase(pos, text.find('\n', pos) - pos + 1);
        CHECK_THROWS_AS(waveform_from_string(broken), IoError);
    }
    SUBCASE("wrong column count") {
        std::string broken = text + "1.0 2.0\n";
        CHECK_THROWS_AS(waveform_from_string(broken), IoError);
    }
    SUBCASE("sample count mismatch") {
        std::string broken = text + "1 0 0 0.1\n";
        CHECK_THROWS_AS(waveform_from_string(broken), IoError);
    }
    SUBCASE("phase column contradicts header") {
        // Flip the phase on the last row.
        const std::size_t tail = text.rfind('\n', text.size() - 2);
        std::string broken = text.substr(0, tail + 1);
        broken += "24 0 0 9.9\n";
        CHECK_THROWS_AS(waveform_from_string(broken), IoError);
    }
}

TEST_CASE("result documents round-trip") {
    ResultDoc doc;
    doc.add("kind", "demo");
    doc.add("value", 0.123456789012);
    doc.arrays.push_back({"grid", {2, 3}, {1, 2, 3, 4, 5, 6}});

    const std::string text = doc.to_string();
    const ResultDoc back = ResultDoc::parse(text);
    CHECK(back.scalars.size() == 2);
    REQUIRE(back.find("value") != nullptr);
    CHECK(*back.find("value") == "0.123456789012");
    REQUIRE(back.arrays.size() == 1);
    CHECK(back.arrays[0].shape == std::vector<std::size_t>{2, 3});
    CHECK(back.arrays[0].values[4] == 5.0);
    CHECK(back.to_string() == text);

    CHECK_THROWS_AS(ResultDoc::parse("not a result\n"), IoError);
}

TEST_CASE("sweep results serialize to documents and csv") {
    SweepResult r;
    r.axes = {{"eps0", {-0.1, 0.1}}, {"eps1", {-0.2, 0.0, 0.2}}};
    r.columns = {{"gate_fidelity", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}}};
    r.meta.kind = "robustness_grid";
    r.meta.scheme = "nhqc";
    r.meta.metric = "gate";
    r.meta.version = "test";

    const ResultDoc doc = result_from_sweep(r);
    CHECK(doc.find("kind") != nullptr);
    CHECK(doc.arrays.size() == 3);  // two axes + one column
    CHECK(doc.arrays[2].shape == std::vector<std::size_t>{2, 3});

    const std::string csv = sweep_to_csv(r);
    CHECK(csv.find("eps0,eps1,gate_fidelity") != std::string::npos);
    // 3 comment lines + header + 6 rows
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 10);
    // Row-major: cell (eps0=-0.1, eps1=0.2) holds 0.3.
    CHECK(csv.find("-0.1,0.2,0.3") != std::string::npos);
}

TEST_CASE("stamps are opt-in so outputs stay reproducible") {
    const PulseSchedule s =
        compile_noncyclic_gate({0.8, 0.1}, 0.4, 24.0, 24.0 / 200.0);
    CHECK(waveform_to_string(s) == waveform_to_string(s));
    CHECK(waveform_to_string(s).find("generated") == std::string::npos);
    CHECK(waveform_to_string(s, {}, std::string("2024-01-01"))
              .find("# generated: 2024-01-01") != std::string::npos);
}
