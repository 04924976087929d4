#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holopulse/gate.hpp"
#include "holopulse/mapping.hpp"
#include "holopulse/sweep.hpp"

// Serialization layer.
//
// Waveform files are plain text: '#'-prefixed header lines carrying the
// schedule metadata (gate, amplitude, T, dt, per-segment channel phases,
// optional platform mapping), then one row per sample
//     t omega0 omega1 phi
// where phi is the channel-1 drive phase of that row's segment.  A file
// re-ingested reproduces the in-memory schedule to 1e-12 and re-serializes
// byte-identically.
//
// Result records are self-describing structured text: a version line,
// 'key: value' scalars, and dense 'array <name> <dims...>' blocks.  Grids
// are additionally exportable as delimiter-separated tables for plotting.

namespace holopulse {

std::string waveform_to_string(const PulseSchedule& schedule,
                               std::optional<Platform> platform = {},
                               std::optional<std::string> stamp = {});
PulseSchedule waveform_from_string(const std::string& text);

void write_waveform(const std::filesystem::path& path,
                    const PulseSchedule& schedule,
                    std::optional<Platform> platform = {},
                    std::optional<std::string> stamp = {});
PulseSchedule read_waveform(const std::filesystem::path& path);

struct ResultDoc {
    struct Block {
        std::string name;
        std::vector<std::size_t> shape;
        std::vector<double> values;
    };

    std::vector<std::pair<std::string, std::string>> scalars;
    std::vector<Block> arrays;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    const std::string* find(const std::string& key) const;

    std::string to_string() const;
    static ResultDoc parse(const std::string& text);
};

ResultDoc result_from_sweep(const SweepResult& sweep,
                            std::optional<std::string> stamp = {});

void write_result(const std::filesystem::path& path, const ResultDoc& doc);
ResultDoc read_result(const std::filesystem::path& path);

// Long-format table: one row per cell, axis columns then value columns.
std::string sweep_to_csv(const SweepResult& sweep);
void write_csv(const std::filesystem::path& path, const SweepResult& sweep);

// Shared numeric formatting (12 significant digits).
std::string format_g12(double v);

}  // namespace holopulse
