#include "cli.hpp"

#include "commands.hpp"
#include "config.hpp"

#include "hglass/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <ostream>

namespace hglass::app {

namespace {

struct Subcommand {
    CLI::App* app = nullptr;
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
};

bool is_switch(const std::string& key)
{
    return key == "long_run" || key == "trace";
}

void add_config_options(Subcommand& sub)
{
    sub.app->add_option("--config", sub.config_file,
                        "key=value file or manifest.json of an earlier run");
    for (const auto& [key, help] : config_keys()) {
        std::string names = "--" + key;
        if (key.find('_') != std::string::npos) {
            std::string dashed = key;
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            names += ",--" + dashed;
        }
        if (is_switch(key)) {
            sub.app->add_flag(names, sub.switches[key], help);
        } else {
            sub.app->add_option(names, sub.values[key], help);
        }
    }
}

ExperimentConfig resolve(const std::string& command, const Subcommand& sub)
{
    ExperimentConfig config = command_defaults(command);
    if (!sub.config_file.empty()) {
        config = app::apply(config, load_config_file(sub.config_file));
    }
    KeyValues flags;
    for (const auto& [key, value] : sub.values) {
        if (sub.app->count("--" + key) > 0) {
            flags[key] = value;
        }
    }
    for (const auto& [key, on] : sub.switches) {
        if (on) {
            flags[key] = "true";
        }
    }
    config = app::apply(config, flags);
    validate(config);
    return config;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hierarchical spin-glass toolkit: exact enumeration, Monte Carlo and "
                 "rigorous bound checks for the HREM and HPS models"};
    app.name("hglass");
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"gen-config", "write a commented key=value config with the defaults of a command"},
        {"free-energy", "quenched free energy per spin over K, sigma and beta"},
        {"entropy-scan", "entropy per spin against beta next to its lower bounds"},
        {"bounds", "analytic bound curves, beta_mf and beta*"},
        {"beta-star", "table of beta_mf and the root beta* per sigma"},
        {"interpolate", "free energy along the top-level interpolation t in [0, 1]"},
        {"concentration", "tail probability of the free energy against its bound"},
        {"hps-covariance", "covariance of top-level HPS energies for a pair of configurations"},
        {"mc-run", "parallel tempering with thermodynamic integration"},
        {"verify", "check every inequality and print PASS/FAIL rows"},
        {"plot", "render SVG charts from the CSV files of a run directory"},
    };

    std::map<std::string, Subcommand> subs;
    for (const auto& [name, help] : commands) {
        Subcommand& sub = subs[name];
        sub.app = app.add_subcommand(name, help);
        add_config_options(sub);
    }

    std::string gen_file;
    std::string gen_for = "free-energy";
    subs["gen-config"].app->add_option("file", gen_file, "output file, stdout if omitted");
    subs["gen-config"].app->add_option("--for", gen_for, "command whose defaults are written");

    std::vector<std::string> aggregate_files;
    bool only_aggregates = false;
    subs["verify"].app->add_option("--aggregates", aggregate_files,
                                   "aggregates.csv of earlier runs (repeatable)");
    subs["verify"].app->add_flag("--only-aggregates", only_aggregates,
                                 "skip checks that need fresh enumeration");

    std::string plot_input;
    subs["plot"].app->add_option("--input", plot_input, "run directory holding the CSV files");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        const CLI::App* target = &app;
        for (const auto& [name, sub] : subs) {
            if (sub.app->parsed()) {
                target = sub.app;
            }
        }
        if (e.get_exit_code() == 0) {
            out << target->help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n" << "run 'hglass " << (target == &app ? "" : target->get_name() + " ")
            << "--help' for usage\n";
        return kExitUsage;
    }

    std::string command;
    for (const auto& [name, sub] : subs) {
        if (sub.app->parsed()) {
            command = name;
        }
    }

    try {
        if (command == "gen-config") {
            if (subs.count(gen_for) == 0 || gen_for == "gen-config") {
                throw ConfigError("for", "unknown command '" + gen_for + "'");
            }
            CommandContext ctx{resolve(gen_for, subs[command]), out, err};
            return cmd_gen_config(ctx, gen_file);
        }
        CommandContext ctx{resolve(command, subs[command]), out, err};
        if (command == "free-energy") {
            return cmd_free_energy(ctx, false);
        }
        if (command == "entropy-scan") {
            return cmd_free_energy(ctx, true);
        }
        if (command == "bounds") {
            return cmd_bounds(ctx);
        }
        if (command == "beta-star") {
            return cmd_beta_star(ctx);
        }
        if (command == "interpolate") {
            return cmd_interpolate(ctx);
        }
        if (command == "concentration") {
            return cmd_concentration(ctx);
        }
        if (command == "hps-covariance") {
            return cmd_hps_covariance(ctx);
        }
        if (command == "mc-run") {
            return cmd_mc_run(ctx);
        }
        if (command == "verify") {
            return cmd_verify(ctx, aggregate_files, only_aggregates);
        }
        if (command == "plot") {
            return cmd_plot(ctx, plot_input);
        }
        err << "error: unknown command\n";
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << e.what() << "\n";
        return kExitCapacity;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RangeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IntegrityError& e) {
        err << "integrity failure: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace hglass::app
