#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cli.hpp"
#include "ncg/io.hpp"

using namespace ncg;
namespace fs = std::filesystem;

namespace {

struct temp_dir {
    fs::path path;
    explicit temp_dir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~temp_dir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

nlohmann::ordered_json read_json(const fs::path& path) {
    nlohmann::ordered_json j;
    std::ifstream in(path);
    REQUIRE(in.good());
    in >> j;
    return j;
}

// Manifests are identical up to the wall clock.
void check_manifests_equal_modulo_walltime(const fs::path& a, const fs::path& b) {
    auto ja = read_json(a);
    auto jb = read_json(b);
    ja.erase("wall_time_seconds");
    jb.erase("wall_time_seconds");
    CHECK(ja.dump() == jb.dump());
}

cli::experiment_config small_config(const fs::path& out_dir) {
    cli::experiment_config config;
    config.params = {4, 0.5, 0.5, 0.5};
    config.seeds = {11};
    config.steps = 2000;
    config.snapshot_at = {1000, 2000};
    config.w_max = 200;
    config.w_cut = 12;
    config.d_cut = 25;
    config.ud_max_d = 15;
    config.xdw_out_w_max = 25;
    config.out_dir = out_dir;
    return config;
}

}  // namespace

TEST_CASE("config loading and flag precedence") {
    temp_dir tmp("ncg_test_cli_config");
    write_file(tmp.path / "config.json", R"({
        "N": 5, "p": 0.6, "q": 0.4, "r": 0.7,
        "seeds": [3, 4], "steps": 500,
        "snapshot_at": [100, 500],
        "w_max": 50, "w_cut": 10, "d_cut": 20,
        "fit_weight_window": [5, 10],
        "out_dir": "ignored"
    })");

    cli::flag_overrides flags;
    flags.config_path = (tmp.path / "config.json").string();
    flags.steps = 800;
    flags.out_dir = (tmp.path / "out").string();
    flags.seeds = {9};

    // flags.steps puts snapshot_at=[100,500] within range, so resolve succeeds
    const auto config = cli::resolve_config(flags);
    CHECK(config.params.N == 5);
    CHECK(config.params.p == 0.6);
    CHECK(config.steps == 800);
    CHECK(config.seeds == std::vector<std::uint64_t>{9});
    CHECK(config.out_dir == tmp.path / "out");
    CHECK(config.fit_w_min == 5);
    CHECK(config.fit_w_max == 10);
}

TEST_CASE("finalize_config rejects inconsistent settings") {
    cli::experiment_config config = small_config("unused");
    SUBCASE("snapshot beyond steps") {
        config.snapshot_at = {5000};
        CHECK_THROWS_AS(cli::finalize_config(config), std::invalid_argument);
    }
    SUBCASE("unsorted snapshots") {
        config.snapshot_at = {2000, 1000};
        CHECK_THROWS_AS(cli::finalize_config(config), std::invalid_argument);
    }
    SUBCASE("w_cut beyond w_max") {
        config.w_cut = 500;
        CHECK_THROWS_AS(cli::finalize_config(config), std::invalid_argument);
    }
    SUBCASE("bad eps") {
        config.eps = 0.5;
        CHECK_THROWS_AS(cli::finalize_config(config), std::invalid_argument);
    }
    SUBCASE("empty snapshot_at defaults to steps") {
        config.snapshot_at.clear();
        cli::finalize_config(config);
        CHECK(config.snapshot_at == std::vector<std::uint64_t>{2000});
    }
}

TEST_CASE("simulate is deterministic across invocations") {
    temp_dir a("ncg_test_cli_sim_a");
    temp_dir b("ncg_test_cli_sim_b");
    auto ca = small_config(a.path);
    auto cb = small_config(b.path);
    REQUIRE(cli::cmd_simulate(ca) == 0);
    REQUIRE(cli::cmd_simulate(cb) == 0);

    for (const char* name : {"snapshot_seed11_n1000.csv", "snapshot_seed11_n2000.csv"})
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    check_manifests_equal_modulo_walltime(a.path / "manifest_simulate.json",
                                          b.path / "manifest_simulate.json");
}

TEST_CASE("limits command emits the three tables") {
    temp_dir tmp("ncg_test_cli_limits");
    auto config = small_config(tmp.path);
    REQUIRE(cli::cmd_limits(config) == 0);
    CHECK(fs::exists(tmp.path / "xdw.csv"));
    CHECK(fs::exists(tmp.path / "xw.csv"));
    CHECK(fs::exists(tmp.path / "ud.csv"));

    // first x_w row carries the base cell
    const auto rows = read_xw_csv(tmp.path / "xw.csv");
    REQUIRE(!rows.empty());
    CHECK(rows[0].recurrence == doctest::Approx(0.2025316).epsilon(1e-6));

    const auto manifest = read_json(tmp.path / "manifest_limits.json");
    CHECK(manifest.at("ud_supported").get<bool>());
}

TEST_CASE("limits command with alpha=0 skips u_d and marks NA") {
    temp_dir tmp("ncg_test_cli_limits0");
    auto config = small_config(tmp.path);
    config.params = {5, 0.5, 0.0, 0.0};
    REQUIRE(cli::cmd_limits(config) == 0);
    CHECK(fs::exists(tmp.path / "xw.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "ud.csv"));
    const auto rows = read_xw_csv(tmp.path / "xw.csv");
    CHECK(std::isnan(rows[0].closed_form));
    const auto manifest = read_json(tmp.path / "manifest_limits.json");
    CHECK_FALSE(manifest.at("ud_supported").get<bool>());
}

TEST_CASE("compare runs standalone and writes a full report") {
    temp_dir tmp("ncg_test_cli_compare");
    auto config = small_config(tmp.path);
    REQUIRE(cli::cmd_compare(config) == 0);
    CHECK(fs::exists(tmp.path / "report.json"));
    CHECK(fs::exists(tmp.path / "series.csv"));
    CHECK(fs::exists(tmp.path / "snapshot_seed11_n2000.csv"));  // simulated on the fly

    const auto rep = read_json(tmp.path / "report.json");
    CHECK(rep.at("n").get<std::uint64_t>() == 2000);
    CHECK(rep.at("theoretical_exponent").get<double>() ==
          doctest::Approx(-3.2857142857142856));
    CHECK(rep.at("tv_weights").get<double>() >= 0.0);
    CHECK(rep.at("tv_weights").get<double>() <= 1.0);

    // rerunning compare on the existing snapshots gives the identical report
    temp_dir tmp2("ncg_test_cli_compare2");
    auto config2 = small_config(tmp2.path);
    REQUIRE(cli::cmd_compare(config2) == 0);
    CHECK(slurp(tmp.path / "report.json") == slurp(tmp2.path / "report.json"));
    CHECK(slurp(tmp.path / "series.csv") == slurp(tmp2.path / "series.csv"));
}

TEST_CASE("golden report stays bit-identical") {
    temp_dir tmp("ncg_test_cli_golden");
    auto config = cli::load_config(fs::path(NCG_TEST_DATA_DIR) / "golden_config.json");
    config.out_dir = tmp.path;
    cli::finalize_config(config);
    REQUIRE(cli::cmd_compare(config) == 0);
    CHECK(slurp(tmp.path / "report.json") ==
          slurp(fs::path(NCG_TEST_DATA_DIR) / "golden_report.json"));
}

TEST_CASE("the installed binary honors exit codes and determinism") {
    temp_dir tmp("ncg_test_cli_bin");
    write_file(tmp.path / "cfg.json",
               R"({"N":3,"p":1.0,"q":0.5,"r":0.5,"seeds":[2],"steps":300,"w_max":50,"w_cut":10,"d_cut":20})");

    const std::string bin = NCG_BIN_PATH;
    const auto run = [&](const std::string& args) {
        const int status = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };

    CHECK(run("validate --config " + (tmp.path / "cfg.json").string()) == 0);
    // p=1 violates the theorem tier
    CHECK(run("validate --tier theorem --config " + (tmp.path / "cfg.json").string()) == 2);
    CHECK(run("validate --config /does/not/exist.json") != 0);

    const auto out1 = tmp.path / "run1";
    const auto out2 = tmp.path / "run2";
    CHECK(run("simulate --config " + (tmp.path / "cfg.json").string() + " --out " +
              out1.string()) == 0);
    CHECK(run("simulate --config " + (tmp.path / "cfg.json").string() + " --out " +
              out2.string()) == 0);
    CHECK(slurp(out1 / "snapshot_seed2_n300.csv") == slurp(out2 / "snapshot_seed2_n300.csv"));
}

TEST_CASE("replica thread cap respects NCG_THREADS") {
    unsetenv("NCG_THREADS");
    CHECK(cli::replica_thread_cap(1) == 1);
    setenv("NCG_THREADS", "2", 1);
    CHECK(cli::replica_thread_cap(8) == 2);
    CHECK(cli::replica_thread_cap(1) == 1);
    setenv("NCG_THREADS", "garbage", 1);
    CHECK_THROWS_AS(cli::replica_thread_cap(4), std::invalid_argument);
    unsetenv("NCG_THREADS");
}

TEST_CASE("multi-seed simulate writes per-seed artifacts") {
    temp_dir tmp("ncg_test_cli_multi");
    auto config = small_config(tmp.path);
    config.seeds = {1, 2, 3};
    config.snapshot_at = {2000};
    setenv("NCG_THREADS", "2", 1);
    REQUIRE(cli::cmd_simulate(config) == 0);
    unsetenv("NCG_THREADS");
    for (const auto seed : config.seeds)
        CHECK(fs::exists(tmp.path / ("snapshot_seed" + std::to_string(seed) + "_n2000.csv")));

    // per-seed files do not depend on scheduling: rerun serially and compare
    temp_dir tmp2("ncg_test_cli_multi2");
    auto config2 = config;
    config2.out_dir = tmp2.path;
    setenv("NCG_THREADS", "1", 1);
    REQUIRE(cli::cmd_simulate(config2) == 0);
    unsetenv("NCG_THREADS");
    for (const auto seed : config.seeds) {
        const std::string name = "snapshot_seed" + std::to_string(seed) + "_n2000.csv";
        CHECK(slurp(tmp.path / name) == slurp(tmp2.path / name));
    }
}
