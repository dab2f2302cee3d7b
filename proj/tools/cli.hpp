#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ncg/params.hpp"

namespace ncg::cli {

// One experiment, normally loaded from a JSON config document. Command-line
// flags override individual fields; precedence is defaults < config < flags.
struct experiment_config {
    model_params params;

    std::vector<std::uint64_t> seeds{1};
    std::uint64_t steps = 100000;
    std::vector<std::uint64_t> snapshot_at;  // empty selects {steps}

    int w_max = 2000;
    std::uint32_t w_cut = 30;
    std::uint32_t d_cut = 60;
    double eps = 0.1;
    double tail_tol = 1e-10;
    std::uint32_t fit_w_min = 0, fit_w_max = 0;  // 0 = default window
    std::uint32_t fit_d_min = 0, fit_d_max = 0;
    std::uint32_t ud_max_d = 100;
    int xdw_out_w_max = 0;  // 0 selects min(w_max, 100)

    std::filesystem::path out_dir = "out";
    bool export_edges = false;
    bool track_all_cliques = false;
};

// Flag values captured by the command line; unset fields leave the config as
// loaded.
struct flag_overrides {
    std::optional<std::string> config_path;
    std::vector<std::uint64_t> seeds;
    std::optional<std::uint64_t> steps;
    std::optional<std::string> out_dir;
    std::optional<int> w_max;
    std::optional<double> eps;
    std::optional<double> tail_tol;
};

experiment_config load_config(const std::filesystem::path& path);
experiment_config resolve_config(const flag_overrides& flags);

// Normalizes derived fields (snapshot_at default) and throws
// std::invalid_argument on inconsistent settings.
void finalize_config(experiment_config& config);

// Replica parallelism cap: NCG_THREADS when set, hardware concurrency
// otherwise, never more than replica_count and never less than one.
std::size_t replica_thread_cap(std::size_t replica_count);

// Subcommands. All return a process exit code (0 on success).
int cmd_simulate(const experiment_config& config);
int cmd_limits(const experiment_config& config);
int cmd_compare(const experiment_config& config);
// tier is "simulable" or "theorem"; prints a JSON verdict on stdout and
// returns 2 when the requested tier is violated.
int cmd_validate(const experiment_config& config, const std::string& tier);

}  // namespace ncg::cli
