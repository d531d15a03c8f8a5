#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "icct/heom.hpp"
#include "icct/model.hpp"

namespace icct {

/// One propagation-style run read from a JSON document. Every block is
/// optional except `system`; defaults follow the cheap-but-converged
/// settings (depth 6, one Matsubara term, 0.5 fs steps).
struct RunConfig {
    SiteHamiltonian system;
    DrudeBath bath{35.0, 50.0, 300.0};
    HeomOptions propagation{.depth = 6, .matsubara = 1, .dt = 0.5, .output_stride = 2};
    double t_final = 1000.0;
    int initial_site = 0;
    std::optional<ComplexPartition> partition;
    std::string output_path;  // empty: write to stdout
    uint64_t seed = 12345;
};

/// Parses and validates a config document. Unknown keys are rejected with
/// their full path; physically invalid values (negative temperature,
/// malformed matrices) raise ConfigError before any simulation starts.
RunConfig parse_config(const std::string& text);

RunConfig read_config_file(const std::string& path);

/// Canonical JSON form; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

}  // namespace icct
