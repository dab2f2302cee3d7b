#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ncg/io.hpp"
#include "ncg/limits.hpp"
#include "ncg/simulator.hpp"
#include "ncg/stats.hpp"

namespace ncg::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* tool_version = "0.1.0";

ordered_json params_json(const model_params& p) {
    return {{"N", p.N}, {"p", p.p}, {"q", p.q}, {"r", p.r}};
}

void write_json_file(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
}

ordered_json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    ordered_json j;
    in >> j;
    return j;
}

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

metadata_map base_metadata(const experiment_config& config, std::uint64_t seed) {
    metadata_map meta;
    meta["N"] = std::to_string(config.params.N);
    meta["p"] = format_double(config.params.p);
    meta["q"] = format_double(config.params.q);
    meta["r"] = format_double(config.params.r);
    meta["seed"] = std::to_string(seed);
    meta["steps"] = std::to_string(config.steps);
    meta["generator"] = rng_name;
    meta["tool"] = std::string("ncg-") + tool_version;
    return meta;
}

void require_valid_params(const model_params& params) {
    const auto violations = validate(params, validation_tier::simulable);
    if (!violations.empty()) {
        std::string msg = "config params invalid:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
}

// Runs fn over each seed index with at most replica_thread_cap threads.
template <typename Fn>
void for_each_seed(const std::vector<std::uint64_t>& seeds, Fn&& fn) {
    const std::size_t nthreads = replica_thread_cap(seeds.size());
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(seeds.size());
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

std::filesystem::path snapshot_path(const experiment_config& config, std::uint64_t seed,
                                    std::uint64_t n) {
    return config.out_dir / ("snapshot_" + seed_tag(seed) + "_n" + std::to_string(n) + ".csv");
}

struct simulate_result {
    std::vector<std::string> outputs;  // file names relative to out_dir
};

simulate_result simulate_seed(const experiment_config& config, std::uint64_t seed) {
    graph_options opts;
    opts.track_all_cliques = config.track_all_cliques;
    graph_state state(config.params, seed, opts);

    simulate_result result;
    std::size_t next_snap = 0;
    const auto& at = config.snapshot_at;
    const auto emit = [&](const snapshot& snap) {
        auto meta = base_metadata(config, seed);
        meta["n"] = std::to_string(snap.n);
        meta["V_n"] = std::to_string(snap.vertex_count);
        const auto path = snapshot_path(config, seed, snap.n);
        write_snapshot_csv(path, snap, meta);
        result.outputs.push_back(path.filename().string());
    };

    while (next_snap < at.size() && at[next_snap] == 0) {
        emit(state.make_snapshot());
        ++next_snap;
    }
    for (std::uint64_t s = 1; s <= config.steps; ++s) {
        state.step();
        while (next_snap < at.size() && at[next_snap] == s) {
            const auto snap = state.make_snapshot();
            state.check_invariants();
            emit(snap);
            ++next_snap;
        }
    }

    if (config.export_edges) {
        const auto path = config.out_dir / ("edges_" + seed_tag(seed) + ".txt");
        write_edge_list(state, path);
        result.outputs.push_back(path.filename().string());
        result.outputs.push_back(path.filename().string() + ".json");
    }
    return result;
}

ordered_json manifest_skeleton(const experiment_config& config, const std::string& command) {
    ordered_json m;
    m["tool"] = "ncg";
    m["version"] = tool_version;
    m["command"] = command;
    m["params"] = params_json(config.params);
    m["generator"] = rng_name;
    return m;
}

}  // namespace

std::size_t replica_thread_cap(std::size_t replica_count) {
    std::size_t cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    if (const char* env = std::getenv("NCG_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || parsed == 0)
            throw std::invalid_argument("NCG_THREADS must be a positive integer");
        cap = parsed;
    }
    return std::max<std::size_t>(1, std::min(cap, replica_count));
}

experiment_config load_config(const std::filesystem::path& path) {
    const auto j = read_json_file(path);
    experiment_config config;
    if (j.contains("N")) config.params.N = j.at("N").get<int>();
    if (j.contains("p")) config.params.p = j.at("p").get<double>();
    if (j.contains("q")) config.params.q = j.at("q").get<double>();
    if (j.contains("r")) config.params.r = j.at("r").get<double>();
    if (j.contains("seeds")) config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("steps")) config.steps = j.at("steps").get<std::uint64_t>();
    if (j.contains("snapshot_at"))
        config.snapshot_at = j.at("snapshot_at").get<std::vector<std::uint64_t>>();
    if (j.contains("w_max")) config.w_max = j.at("w_max").get<int>();
    if (j.contains("w_cut")) config.w_cut = j.at("w_cut").get<std::uint32_t>();
    if (j.contains("d_cut")) config.d_cut = j.at("d_cut").get<std::uint32_t>();
    if (j.contains("eps")) config.eps = j.at("eps").get<double>();
    if (j.contains("tail_tol")) config.tail_tol = j.at("tail_tol").get<double>();
    if (j.contains("fit_weight_window")) {
        const auto win = j.at("fit_weight_window").get<std::vector<std::uint32_t>>();
        if (win.size() != 2) throw std::invalid_argument("fit_weight_window needs [min, max]");
        config.fit_w_min = win[0];
        config.fit_w_max = win[1];
    }
    if (j.contains("fit_degree_window")) {
        const auto win = j.at("fit_degree_window").get<std::vector<std::uint32_t>>();
        if (win.size() != 2) throw std::invalid_argument("fit_degree_window needs [min, max]");
        config.fit_d_min = win[0];
        config.fit_d_max = win[1];
    }
    if (j.contains("ud_max_d")) config.ud_max_d = j.at("ud_max_d").get<std::uint32_t>();
    if (j.contains("xdw_out_w_max")) config.xdw_out_w_max = j.at("xdw_out_w_max").get<int>();
    if (j.contains("out_dir")) config.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("export_edges")) config.export_edges = j.at("export_edges").get<bool>();
    if (j.contains("track_all_cliques"))
        config.track_all_cliques = j.at("track_all_cliques").get<bool>();
    return config;
}

experiment_config resolve_config(const flag_overrides& flags) {
    experiment_config config;
    if (flags.config_path) config = load_config(*flags.config_path);
    if (!flags.seeds.empty()) config.seeds = flags.seeds;
    if (flags.steps) config.steps = *flags.steps;
    if (flags.out_dir) config.out_dir = *flags.out_dir;
    if (flags.w_max) config.w_max = *flags.w_max;
    if (flags.eps) config.eps = *flags.eps;
    if (flags.tail_tol) config.tail_tol = *flags.tail_tol;
    finalize_config(config);
    return config;
}

void finalize_config(experiment_config& config) {
    if (config.seeds.empty()) throw std::invalid_argument("config: at least one seed required");
    if (config.snapshot_at.empty()) config.snapshot_at = {config.steps};
    if (!std::is_sorted(config.snapshot_at.begin(), config.snapshot_at.end()))
        throw std::invalid_argument("config: snapshot_at must be sorted");
    if (config.snapshot_at.back() > config.steps)
        throw std::invalid_argument("config: snapshot_at entries must lie in [0, steps]");
    if (config.w_max < 1) throw std::invalid_argument("config: w_max must be >= 1");
    if (config.w_cut < 1 || config.w_cut > static_cast<std::uint32_t>(config.w_max))
        throw std::invalid_argument("config: w_cut must lie in [1, w_max]");
    if (config.xdw_out_w_max == 0) config.xdw_out_w_max = std::min(config.w_max, 100);
    if (config.xdw_out_w_max < 1 || config.xdw_out_w_max > config.w_max)
        throw std::invalid_argument("config: xdw_out_w_max must lie in [1, w_max]");
    if (!(config.eps > 0.0 && config.eps < 1.0 / 6.0))
        throw std::invalid_argument("config: eps must lie in (0, 1/6)");
    if (!(config.tail_tol > 0.0)) throw std::invalid_argument("config: tail_tol must be positive");
}

int cmd_simulate(const experiment_config& config) {
    require_valid_params(config.params);
    std::filesystem::create_directories(config.out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<simulate_result> results(config.seeds.size());
    for_each_seed(config.seeds, [&](std::size_t i) {
        results[i] = simulate_seed(config, config.seeds[i]);
    });

    std::vector<std::string> outputs;
    for (const auto& r : results)
        outputs.insert(outputs.end(), r.outputs.begin(), r.outputs.end());
    std::sort(outputs.begin(), outputs.end());

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto manifest = manifest_skeleton(config, "simulate");
    manifest["seeds"] = config.seeds;
    manifest["steps"] = config.steps;
    manifest["snapshot_at"] = config.snapshot_at;
    manifest["outputs"] = outputs;
    manifest["wall_time_seconds"] = wall;
    write_json_file(config.out_dir / "manifest_simulate.json", manifest);

    std::cout << "simulate: " << outputs.size() << " files in " << config.out_dir.string() << '\n';
    return 0;
}

int cmd_limits(const experiment_config& config) {
    require_valid_params(config.params);
    std::filesystem::create_directories(config.out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    const auto constants = derive_constants(config.params);
    const auto table = xdw_table(constants, config.params.N, config.w_max);
    const auto xw = xw_recurrence(constants, config.w_max);

    metadata_map meta;
    meta["N"] = std::to_string(config.params.N);
    meta["p"] = format_double(config.params.p);
    meta["q"] = format_double(config.params.q);
    meta["r"] = format_double(config.params.r);
    meta["w_max"] = std::to_string(config.w_max);
    meta["tool"] = std::string("ncg-") + tool_version;

    std::vector<std::string> outputs;
    write_xdw_csv(config.out_dir / "xdw.csv", table, config.xdw_out_w_max, meta);
    outputs.push_back("xdw.csv");
    write_xw_csv(config.out_dir / "xw.csv", constants, xw, meta);
    outputs.push_back("xw.csv");

    const bool ud_supported = constants.alpha > 0.0 && constants.alpha2 > 0.0;
    if (ud_supported) {
        std::vector<ud_csv_row> rows;
        for (std::uint32_t d = table.d_min(); d <= config.ud_max_d; ++d) {
            const auto res = u_d(constants, config.params.N, d, config.eps, config.tail_tol);
            rows.push_back({d, res.value, u_d_asymptotic(constants, d), res.tail_bound});
        }
        auto ud_meta = meta;
        ud_meta["eps"] = format_double(config.eps);
        ud_meta["tail_tol"] = format_double(config.tail_tol);
        write_ud_csv(config.out_dir / "ud.csv", rows, ud_meta);
        outputs.push_back("ud.csv");
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto manifest = manifest_skeleton(config, "limits");
    manifest["w_max"] = config.w_max;
    manifest["xdw_out_w_max"] = config.xdw_out_w_max;
    manifest["ud_max_d"] = config.ud_max_d;
    manifest["ud_supported"] = ud_supported;
    manifest["normalization_deficit"] = table.normalization_deficit;
    manifest["outputs"] = outputs;
    manifest["wall_time_seconds"] = wall;
    write_json_file(config.out_dir / "manifest_limits.json", manifest);

    std::cout << "limits: " << outputs.size() << " files in " << config.out_dir.string() << '\n';
    return 0;
}

int cmd_compare(const experiment_config& config) {
    require_valid_params(config.params);
    std::filesystem::create_directories(config.out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    // Snapshots come from the simulate artifacts; produce them on the fly when
    // absent so compare works standalone.
    bool have_all = true;
    for (const auto seed : config.seeds)
        for (const auto n : config.snapshot_at)
            if (!std::filesystem::exists(snapshot_path(config, seed, n))) have_all = false;
    if (!have_all) {
        if (const int rc = cmd_simulate(config); rc != 0) return rc;
    }

    const auto constants = derive_constants(config.params);
    const auto table = xdw_table(constants, config.params.N, config.w_max);
    compare_options opts;
    opts.W_cut = config.w_cut;
    opts.D_cut = config.d_cut;
    opts.fit_w_min = config.fit_w_min;
    opts.fit_w_max = config.fit_w_max;
    opts.fit_d_min = config.fit_d_min;
    opts.fit_d_max = config.fit_d_max;

    const bool single = config.seeds.size() == 1;
    std::vector<std::string> outputs;
    for (const auto seed : config.seeds) {
        std::vector<series_row> series;
        std::optional<comparison_report> final_report;
        for (const auto n : config.snapshot_at) {
            const auto file = read_snapshot_csv(snapshot_path(config, seed, n));
            const auto emp = empirical_ratios(file.snap);
            auto rep = compare(emp, table, config.params, opts);
            series.push_back({rep.n, rep.vertex_count, rep.tv_weights, rep.tv_degrees,
                              rep.vn_drift.value_or(0.0)});
            final_report = std::move(rep);
        }
        const std::string report_name = single ? "report.json" : "report_" + seed_tag(seed) + ".json";
        const std::string series_name = single ? "series.csv" : "series_" + seed_tag(seed) + ".csv";
        write_report_json(config.out_dir / report_name, *final_report);
        write_series_csv(config.out_dir / series_name, series, base_metadata(config, seed));
        outputs.push_back(report_name);
        outputs.push_back(series_name);
    }
    std::sort(outputs.begin(), outputs.end());

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto manifest = manifest_skeleton(config, "compare");
    manifest["seeds"] = config.seeds;
    manifest["steps"] = config.steps;
    manifest["snapshot_at"] = config.snapshot_at;
    manifest["w_max"] = config.w_max;
    manifest["W_cut"] = config.w_cut;
    manifest["D_cut"] = config.d_cut;
    manifest["outputs"] = outputs;
    manifest["wall_time_seconds"] = wall;
    write_json_file(config.out_dir / "manifest_compare.json", manifest);

    std::cout << "compare: " << outputs.size() << " files in " << config.out_dir.string() << '\n';
    return 0;
}

int cmd_validate(const experiment_config& config, const std::string& tier) {
    if (tier != "simulable" && tier != "theorem")
        throw std::invalid_argument("validate: tier must be 'simulable' or 'theorem'");

    const auto sim = validate(config.params, validation_tier::simulable);
    const auto thm = validate(config.params, validation_tier::theorem_grade);

    ordered_json j;
    j["params"] = params_json(config.params);
    j["simulable"] = {{"ok", sim.empty()}, {"violations", sim}};
    j["theorem_grade"] = {{"ok", thm.empty()}, {"violations", thm}};
    if (sim.empty()) {
        const auto c = derive_constants(config.params);
        ordered_json constants;
        constants["alpha1"] = c.alpha1;
        constants["alpha2"] = c.alpha2;
        constants["alpha"] = c.alpha;
        constants["beta"] = c.beta;
        if (c.gamma_exponent)
            constants["gamma_exponent"] = *c.gamma_exponent;
        else
            constants["gamma_exponent"] = nullptr;
        j["constants"] = constants;
    }
    std::cout << j.dump(2) << '\n';

    const auto& governing = tier == "simulable" ? sim : thm;
    return governing.empty() ? 0 : 2;
}

}  // namespace ncg::cli
