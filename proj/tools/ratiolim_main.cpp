// Command-line front end. Talks to the core exclusively through the C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "ratiolim.h"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string schedule_path;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_schedule) {
    cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (default: .)");
    if (with_schedule)
        cmd->add_option("--schedule", args.schedule_path,
                        "schedule file (default: <out>/schedule.txt)");
    cmd->add_flag("--quiet", args.quiet, "suppress progress notes");
}

int finish(rl_status status) {
    if (status != RL_OK) {
        const char* msg = rl_last_error();
        if (msg && *msg) std::fprintf(stderr, "ratiolim: %s\n", msg);
    }
    switch (status) {
        case RL_OK: return 0;
        case RL_CHECK_FAILED: return 1;
        case RL_RESOURCE_LIMIT: return 3;
        default: return 2;
    }
}

rl_config* load(const CommonArgs& args) {
    rl_config* cfg = nullptr;
    if (rl_config_load(args.config_path.c_str(), &cfg) != RL_OK) {
        std::fprintf(stderr, "ratiolim: %s\n", rl_last_error());
        return nullptr;
    }
    return cfg;
}

const char* sched_arg(const CommonArgs& args) {
    return args.schedule_path.empty() ? nullptr : args.schedule_path.c_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heat-kernel ratio experiments on slab-lattice graphs"};
    app.require_subcommand(1);

    CommonArgs schedule_args, build_args, kernel_args, experiment_args, verify_args,
        decompose_args;

    CLI::App* schedule = app.add_subcommand("schedule", "run the inductive scale construction");
    add_common(schedule, schedule_args, false);
    CLI::App* build = app.add_subcommand("build", "materialize the glued graph and dump it");
    add_common(build, build_args, true);
    CLI::App* kernel = app.add_subcommand("kernel", "diagonal kernels and their ratio as CSV");
    add_common(kernel, kernel_args, true);
    CLI::App* experiment =
        app.add_subcommand("experiment", "ratio CSV plus the checkpoint inequality report");
    add_common(experiment, experiment_args, true);
    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify, verify_args, false);
    CLI::App* decompose =
        app.add_subcommand("decompose", "first/last-visit decomposition report");
    add_common(decompose, decompose_args, true);

    CLI11_PARSE(app, argc, argv);

    const CommonArgs& args = schedule->parsed()     ? schedule_args
                             : build->parsed()      ? build_args
                             : kernel->parsed()     ? kernel_args
                             : experiment->parsed() ? experiment_args
                             : verify->parsed()     ? verify_args
                                                    : decompose_args;
    rl_config* cfg = load(args);
    if (!cfg) return 2;

    rl_status status = RL_INTERNAL_ERROR;
    const int quiet = args.quiet ? 1 : 0;
    if (schedule->parsed())
        status = rl_run_schedule(cfg, args.out_dir.c_str(), quiet);
    else if (build->parsed())
        status = rl_run_build(cfg, args.out_dir.c_str(), sched_arg(args), quiet);
    else if (kernel->parsed())
        status = rl_run_kernel(cfg, args.out_dir.c_str(), sched_arg(args), quiet);
    else if (experiment->parsed())
        status = rl_run_experiment(cfg, args.out_dir.c_str(), sched_arg(args), quiet);
    else if (verify->parsed())
        status = rl_run_verify(cfg, args.out_dir.c_str(), quiet);
    else if (decompose->parsed())
        status = rl_run_decompose(cfg, args.out_dir.c_str(), sched_arg(args), quiet);

    rl_config_free(cfg);
    return finish(status);
}
