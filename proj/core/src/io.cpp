#include "holopulse/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace holopulse {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("malformed number for " + what + ": '" + s + "'");
    }
}

}  // namespace

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

// Waveform files use more headroom than the 12-digit result records: the
// round-trip contract is 1e-12 on absolute coupling values.
std::string format_wf(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

std::string waveform_to_string(const PulseSchedule& schedule,
                               std::optional<Platform> platform,
                               std::optional<std::string> stamp) {
    schedule.validate();
    std::ostringstream out;
    out << "# holopulse waveform v1\n";
    if (stamp) out << "# generated: " << *stamp << "\n";
    out << "# scheme: " << scheme_name(schedule.scheme) << "\n";
    out << "# gate.theta: " << format_wf(schedule.gate.theta) << "\n";
    out << "# gate.phi: " << format_wf(schedule.gate.phi) << "\n";
    out << "# A: " << format_wf(schedule.amplitude) << "\n";
    out << "# T: " << format_wf(schedule.T) << "\n";
    out << "# dt: " << format_wf(schedule.dt) << "\n";
    out << "# samples: " << schedule.samples.size() << "\n";
    out << "# phi0.segment1: " << format_wf(schedule.phases[0].channel0)
        << "\n";
    out << "# phi1.segment1: " << format_wf(schedule.phases[0].channel1)
        << "\n";
    out << "# phi0.segment2: " << format_wf(schedule.phases[1].channel0)
        << "\n";
    out << "# phi1.segment2: " << format_wf(schedule.phases[1].channel1)
        << "\n";
    if (platform) {
        const LevelAssignment levels = map_to_platform(schedule.gate,
                                                       *platform);
        out << "# platform: " << platform_name(*platform) << "\n";
        out << "# levels: " << levels.labels[0] << " " << levels.labels[1]
            << " " << levels.labels[2] << "\n";
    }
    out << "# columns: t omega0 omega1 phi\n";
    for (std::size_t i = 0; i < schedule.samples.size(); ++i) {
        const PulseSample& s = schedule.samples[i];
        const double phi =
            schedule.segment_phases(schedule.segment_of_index(i)).channel1;
        out << format_wf(s.t) << " " << format_wf(s.omega0) << " "
            << format_wf(s.omega1) << " " << format_wf(phi) << "\n";
    }
    return out.str();
}

PulseSchedule waveform_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::map<std::string, std::string> header;
    std::vector<std::array<double, 4>> rows;

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t colon = line.find(':');
            if (colon == std::string::npos) continue;  // banner line
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            const auto trim = [](std::string& s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t\r");
                s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
            };
            trim(key);
            trim(value);
            header[key] = value;
            continue;
        }
        std::istringstream row(line);
        std::array<double, 4> v{};
        if (!(row >> v[0] >> v[1] >> v[2] >> v[3]))
            throw IoError("waveform: malformed sample row '" + line + "'");
        std::string extra;
        if (row >> extra)
            throw IoError("waveform: too many columns in row '" + line + "'");
        rows.push_back(v);
    }

    const auto required = [&](const std::string& key) -> const std::string& {
        const auto it = header.find(key);
        if (it == header.end())
            throw IoError("waveform: missing header '" + key + "'");
        return it->second;
    };

    PulseSchedule s;
    s.scheme = scheme_from_string(required("scheme"));
    s.gate.theta = parse_double(required("gate.theta"), "gate.theta");
    s.gate.phi = parse_double(required("gate.phi"), "gate.phi");
    const std::string& amp = required("A");
    s.amplitude = amp == "nan" || amp == "-nan"
                      ? std::numeric_limits<double>::quiet_NaN()
                      : parse_double(amp, "A");
    s.T = parse_double(required("T"), "T");
    s.dt = parse_double(required("dt"), "dt");
    s.phases[0].channel0 =
        parse_double(required("phi0.segment1"), "phi0.segment1");
    s.phases[0].channel1 =
        parse_double(required("phi1.segment1"), "phi1.segment1");
    s.phases[1].channel0 =
        parse_double(required("phi0.segment2"), "phi0.segment2");
    s.phases[1].channel1 =
        parse_double(required("phi1.segment2"), "phi1.segment2");

    const auto n_declared = static_cast<std::size_t>(
        parse_double(required("samples"), "samples"));
    if (rows.size() != n_declared)
        throw IoError("waveform: sample count does not match header");

    s.samples.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        s.samples[i] = {rows[i][0], rows[i][1], rows[i][2]};
    s.validate();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double expected =
            s.segment_phases(s.segment_of_index(i)).channel1;
        if (std::abs(rows[i][3] - expected) > 1e-9)
            throw IoError("waveform: row phase contradicts segment header");
    }
    return s;
}

void write_waveform(const std::filesystem::path& path,
                    const PulseSchedule& schedule,
                    std::optional<Platform> platform,
                    std::optional<std::string> stamp) {
    write_file(path, waveform_to_string(schedule, platform, stamp));
}

PulseSchedule read_waveform(const std::filesystem::path& path) {
    return waveform_from_string(read_file(path));
}

void ResultDoc::add(const std::string& key, const std::string& value) {
    scalars.emplace_back(key, value);
}

void ResultDoc::add(const std::string& key, double value) {
    scalars.emplace_back(key, format_g12(value));
}

const std::string* ResultDoc::find(const std::string& key) const {
    for (const auto& [k, v] : scalars)
        if (k == key) return &v;
    return nullptr;
}

std::string ResultDoc::to_string() const {
    std::ostringstream out;
    out << "holopulse-result v1\n";
    for (const auto& [k, v] : scalars) out << k << ": " << v << "\n";
    for (const Block& b : arrays) {
        out << "array " << b.name;
        for (std::size_t d : b.shape) out << " " << d;
        out << "\n";
        std::size_t row_len = b.shape.empty() ? b.values.size()
                                              : b.shape.back();
        if (row_len == 0) row_len = 1;
        for (std::size_t i = 0; i < b.values.size(); ++i) {
            out << format_g12(b.values[i]);
            out << ((i + 1) % row_len == 0 ? "\n" : " ");
        }
        out << "end\n";
    }
    return out.str();
}

ResultDoc ResultDoc::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("holopulse-result", 0) != 0)
        throw IoError("result: missing document header");

    ResultDoc doc;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("array ", 0) == 0) {
            std::istringstream head(line.substr(6));
            Block b;
            head >> b.name;
            std::size_t dim;
            while (head >> dim) b.shape.push_back(dim);
            if (b.name.empty() || b.shape.empty())
                throw IoError("result: malformed array header '" + line + "'");
            std::size_t count = 1;
            for (std::size_t d : b.shape) count *= d;
            b.values.reserve(count);
            while (b.values.size() < count && std::getline(in, line)) {
                std::istringstream row(line);
                double v;
                while (row >> v) b.values.push_back(v);
            }
            if (b.values.size() != count)
                throw IoError("result: array '" + b.name + "' truncated");
            if (!std::getline(in, line) || line != "end")
                throw IoError("result: array '" + b.name + "' missing end");
            doc.arrays.push_back(std::move(b));
            continue;
        }
        const std::size_t colon = line.find(": ");
        if (colon == std::string::npos)
            throw IoError("result: malformed scalar line '" + line + "'");
        doc.scalars.emplace_back(line.substr(0, colon), line.substr(colon + 2));
    }
    return doc;
}

ResultDoc result_from_sweep(const SweepResult& sweep,
                            std::optional<std::string> stamp) {
    sweep.validate();
    ResultDoc doc;
    doc.add("kind", sweep.meta.kind);
    doc.add("version", sweep.meta.version);
    if (stamp) doc.add("generated", *stamp);
    doc.add("scheme", sweep.meta.scheme);
    doc.add("metric", sweep.meta.metric);
    doc.add("gate.theta", sweep.meta.gate.theta);
    doc.add("gate.phi", sweep.meta.gate.phi);
    doc.add("noise.gamma1", sweep.meta.noise.gamma1);
    doc.add("noise.gamma2", sweep.meta.noise.gamma2);
    doc.add("noise.eps0", sweep.meta.noise.eps0);
    doc.add("noise.eps1", sweep.meta.noise.eps1);
    for (const auto& [k, v] : sweep.meta.extra) doc.add(k, v);

    std::vector<std::size_t> shape;
    for (const SweepAxis& a : sweep.axes) {
        doc.arrays.push_back({"axis." + a.name,
                              {a.values.size()},
                              a.values});
        shape.push_back(a.values.size());
    }
    for (const SweepColumn& c : sweep.columns)
        doc.arrays.push_back({c.name, shape, c.values});
    return doc;
}

void write_result(const std::filesystem::path& path, const ResultDoc& doc) {
    write_file(path, doc.to_string());
}

ResultDoc read_result(const std::filesystem::path& path) {
    return ResultDoc::parse(read_file(path));
}

std::string sweep_to_csv(const SweepResult& sweep) {
    sweep.validate();
    std::ostringstream out;
    out << "# kind: " << sweep.meta.kind << "\n";
    out << "# scheme: " << sweep.meta.scheme << "\n";
    out << "# version: " << sweep.meta.version << "\n";
    for (std::size_t i = 0; i < sweep.axes.size(); ++i)
        out << sweep.axes[i].name << (i + 1 < sweep.axes.size() ? "," : "");
    for (const SweepColumn& c : sweep.columns) out << "," << c.name;
    out << "\n";

    const std::size_t cells = sweep.cell_count();
    for (std::size_t i = 0; i < cells; ++i) {
        // Unravel row-major (last axis fastest).
        std::size_t rem = i;
        std::vector<std::size_t> idx(sweep.axes.size());
        for (std::size_t a = sweep.axes.size(); a-- > 0;) {
            idx[a] = rem % sweep.axes[a].values.size();
            rem /= sweep.axes[a].values.size();
        }
        for (std::size_t a = 0; a < sweep.axes.size(); ++a)
            out << format_g12(sweep.axes[a].values[idx[a]])
                << (a + 1 < sweep.axes.size() ? "," : "");
        for (const SweepColumn& c : sweep.columns)
            out << "," << format_g12(c.values[i]);
        out << "\n";
    }
    return out.str();
}

void write_csv(const std::filesystem::path& path, const SweepResult& sweep) {
    write_file(path, sweep_to_csv(sweep));
}

}  // namespace holopulse
