#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hglass::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitCapacity = 2,
    kExitVerifyFailed = 3,
    kExitInternal = 4,
};

struct CommandContext {
    ExperimentConfig config;
    std::ostream& out;
    std::ostream& err;
};

/// Per-subcommand defaults applied before the config file and flags.
ExperimentConfig command_defaults(const std::string& command);

int cmd_gen_config(CommandContext& ctx, const std::string& file);
int cmd_free_energy(CommandContext& ctx, bool entropy_scan);
int cmd_bounds(CommandContext& ctx);
int cmd_beta_star(CommandContext& ctx);
int cmd_interpolate(CommandContext& ctx);
int cmd_concentration(CommandContext& ctx);
int cmd_hps_covariance(CommandContext& ctx);
int cmd_mc_run(CommandContext& ctx);
int cmd_verify(CommandContext& ctx, const std::vector<std::string>& aggregate_files,
               bool only_aggregates);
int cmd_plot(CommandContext& ctx, const std::string& input_dir);

} // namespace hglass::app
