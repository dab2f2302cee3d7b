#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"

namespace {

void add_common_flags(CLI::App* cmd, ncg::cli::flag_overrides& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", flags.seeds, "replica seed, repeatable (overrides config seeds)");
    cmd->add_option("--steps", flags.steps, "evolution steps");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--wmax", flags.w_max, "limit-table weight range");
    cmd->add_option("--eps", flags.eps, "degree-tail window exponent, in (0, 1/6)");
    cmd->add_option("--tail-tol", flags.tail_tol, "certified tail tolerance for u_d");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"N-interaction random graph simulator and limit calculator"};
    app.require_subcommand(1);

    ncg::cli::flag_overrides flags;
    std::string tier = "simulable";

    auto* simulate = app.add_subcommand("simulate", "run replicas and write snapshot CSVs");
    add_common_flags(simulate, flags);
    auto* limits = app.add_subcommand("limits", "compute limiting distributions and write CSVs");
    add_common_flags(limits, flags);
    auto* compare = app.add_subcommand("compare", "compare simulation snapshots against theory");
    add_common_flags(compare, flags);
    auto* validate = app.add_subcommand("validate", "check params against a validation tier");
    add_common_flags(validate, flags);
    validate->add_option("--tier", tier, "governing tier: simulable or theorem")
        ->check(CLI::IsMember({"simulable", "theorem"}));

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = ncg::cli::resolve_config(flags);
        if (simulate->parsed()) return ncg::cli::cmd_simulate(config);
        if (limits->parsed()) return ncg::cli::cmd_limits(config);
        if (compare->parsed()) return ncg::cli::cmd_compare(config);
        return ncg::cli::cmd_validate(config, tier);
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = "command failed";
        err["what"] = e.what();
        std::cerr << err.dump() << '\n';
        return 1;
    }
}
