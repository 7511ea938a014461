#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ratiolim {

// Run parameters, parsed from flat "key = value" lines with '#' comments.
// Unknown keys are rejected rather than ignored.
struct RunConfig {
    // geometry and schedule
    std::int64_t d = 2;
    std::int64_t s = 1;
    std::int64_t scales = 2;
    std::int64_t a_seed = 2;
    std::int64_t gamma_cap = 0;  // 0: uncapped

    // kernels and experiments
    std::int64_t box_radius = 41;
    std::int64_t T = 40;
    double delta_override = 0.0;  // 0: estimate delta from escape intervals
    double factor = 3.0;          // checkpoint ratio factor
    bool allow_approximate = false;

    // estimation
    std::int64_t est_window_cap = 256;
    std::int64_t escape_T = 0;  // 0: use the exact window

    // verification suite
    double cc_bound = 3.0;          // Delmotte spread threshold
    double vd_bound = 0.0;          // 0: 2^d + 0.5
    std::int64_t vd_r_max = 16;
    std::vector<std::int64_t> poincare_radii = {4, 8, 16};
    double poincare_stability = 2.0;
    std::vector<std::int64_t> smoothing_ts = {100, 200, 400};
    double smoothing_stability = 2.0;
    std::int64_t verify_deff = 0;  // 0: use d (override to force a failure)

    // decomposition report
    std::int64_t decompose_gamma = 1;
    std::int64_t decompose_T = 48;

    // resource guards
    std::int64_t max_cells = 300'000'000;
    std::int64_t max_vertices = 20'000'000;

    std::string output_dir;

    // Throws ConfigError on violated invariants (d > s >= 1, even a_seed,
    // box_radius >= T + 1 unless approximate rows are allowed, ...).
    void validate() const;
};

// Parses config text. Throws ConfigError on unknown keys or malformed values.
RunConfig parse_config(const std::string& text);

// Reads and parses a config file. Throws ConfigError when unreadable.
RunConfig load_config(const std::string& path);

// Applies a single "key" = "value" assignment on top of an existing config.
void config_set(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace ratiolim
