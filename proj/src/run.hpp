#pragma once

#include <string>

#include "config.hpp"

namespace ratiolim {

struct RunOptions {
    std::string out_dir = ".";
    std::string schedule_path;  // empty: <out_dir>/schedule.txt
    bool quiet = false;
};

// Subcommand entry points. Each returns a process exit code:
// 0 success, 1 check failure, 2 config error, 3 resource guard.
int cmd_schedule(const RunConfig& cfg, const RunOptions& opt);
int cmd_build(const RunConfig& cfg, const RunOptions& opt);
int cmd_kernel(const RunConfig& cfg, const RunOptions& opt);
int cmd_experiment(const RunConfig& cfg, const RunOptions& opt);
int cmd_verify(const RunConfig& cfg, const RunOptions& opt);
int cmd_decompose(const RunConfig& cfg, const RunOptions& opt);

}  // namespace ratiolim
