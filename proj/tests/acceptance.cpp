// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Statistical checks run on fixed seeds with precomputed
// bands, so the whole suite is deterministic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "ncg/io.hpp"
#include "ncg/limits.hpp"
#include "ncg/simulator.hpp"
#include "ncg/stats.hpp"
#include "oracles.hpp"

using namespace ncg;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<model_params> reference_sets = {
    {3, 0.5, 0.5, 0.5}, {4, 0.5, 0.5, 0.5}, {5, 0.25, 0.75, 0.5},
    {3, 0.9, 0.1, 0.9}, {6, 0.5, 0.5, 0.5},
};

double choose(double n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v *= (n - i) / (k - i);
    return v;
}

// 1. max_{w<=500} |xw_recurrence - xw_closed_form| <= 1e-10 per parameter set.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& params : reference_sets) {
        const auto c = derive_constants(params);
        const auto rec = xw_recurrence(c, 500);
        for (int w = 1; w <= 500; ++w)
            worst = std::max(worst, std::abs(rec[w - 1] - xw_closed_form(c, w)));
    }
    const double secs = seconds_since(t0);
    report(1, "recurrence/closed-form agreement",
           worst <= 1e-10 && secs < 1.0,
           "max |rec-closed| = " + fmt(worst) + " (limit 1e-10), " + fmt(secs) + " s (limit 1)");
}

// 2. sum_{w<=1e4} x_w within [1-2T, 1] for the analytic tail T, and table row
// sums equal to x_w within 1e-12 for w <= 60.
void criterion_2() {
    bool pass = true;
    std::string detail;
    for (const auto& params : reference_sets) {
        const auto c = derive_constants(params);
        const auto rec = xw_recurrence(c, 10000);
        double sum = 0.0;
        for (const double v : rec) sum += v;
        const double tail =
            xw_constant(c) * c.alpha * std::pow(10000.0, -1.0 / c.alpha);
        if (!(sum >= 1.0 - 2.0 * tail && sum <= 1.0)) pass = false;

        const auto table = xdw_table(c, params.N, 60);
        double worst_row = 0.0;
        for (int w = 1; w <= 60; ++w)
            worst_row = std::max(worst_row, std::abs(table.xw[w - 1] - rec[w - 1]));
        if (worst_row > 1e-12) pass = false;
        if (params.N == 4)
            detail = "deficit = " + fmt(1.0 - sum) + " vs 2T = " + fmt(2.0 * tail) +
                     ", max row-sum gap = " + fmt(worst_row);
    }
    report(2, "weight-law normalization", pass, detail);
}

// 3. exact zero band at w=2 for N in {4,5,6}, positive boundary cells, and the
// hand-computed second-row values for (4, .5, .5, .5).
void criterion_3() {
    bool pass = true;
    for (const int N : {4, 5, 6}) {
        const auto c = derive_constants({N, 0.5, 0.5, 0.5});
        const auto t = xdw_table(c, N, 3);
        for (int d = N + 1; d <= 2 * N - 3; ++d)
            if (t.at(d, 2) != 0.0) pass = false;
        if (!(t.at(N - 1, 2) > 0.0 && t.at(N, 2) > 0.0 && t.at(2 * (N - 1), 2) > 0.0))
            pass = false;
    }
    const auto c4 = derive_constants({4, 0.5, 0.5, 0.5});
    const auto t4 = xdw_table(c4, 4, 3);
    const double e32 = std::abs(t4.at(3, 2) - 0.0094201);
    const double e42 = std::abs(t4.at(4, 2) - 0.0070651);
    const double e62 = std::abs(t4.at(6, 2) - 0.1318812);
    if (e32 > 1e-6 || e42 > 1e-6 || e62 > 1e-6) pass = false;
    report(3, "zero-limit band at w=2", pass,
           "x_{5,2} = " + fmt(t4.at(5, 2)) + " exactly, hand-value gaps " + fmt(e32) + "/" +
               fmt(e42) + "/" + fmt(e62) + " (limit 1e-6)");
}

// 4. log-log fit of the closed form on w in [1e3, 1e4] within 2% of -(1+1/a).
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst_rel = 0.0;
    for (const auto& params : reference_sets) {
        const auto c = derive_constants(params);
        std::map<std::uint32_t, double> dist;
        for (std::uint32_t w = 1000; w <= 10000; ++w) dist[w] = xw_closed_form(c, w);
        const auto fit = fit_power_law_exponent(dist, 1000, 10000, fit_method::loglog_ls);
        const double target = -(1.0 + 1.0 / c.alpha);
        const double rel = std::abs(fit.exponent - target) / std::abs(target);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 0.02) pass = false;
    }
    const double secs = seconds_since(t0);
    report(4, "weight tail exponent", pass && secs < 1.0,
           "worst relative gap = " + fmt(worst_rel) + " (limit 0.02), " + fmt(secs) +
               " s (limit 1)");
}

// 5. u_d vs a brute-force column sum at d in {50,100}, and the ratio to the
// asymptotic law approaching 1 on a small-beta parameter set.
void criterion_5() {
    bool pass = true;
    std::string detail;

    for (const auto& params : {model_params{4, 0.5, 0.5, 0.5}, model_params{3, 0.9, 0.1, 0.9}}) {
        const auto c = derive_constants(params);
        for (const std::uint64_t d : {50ULL, 100ULL}) {
            const auto res = u_d(c, params.N, d, 0.1, 1e-10);
            const double f = c.alpha / c.alpha2 * static_cast<double>(d);
            const auto table = xdw_table(c, params.N, static_cast<int>(std::ceil(4.0 * f)));
            double brute = 0.0;
            for (std::uint32_t w = 1; w <= static_cast<std::uint32_t>(table.W_max); ++w)
                brute += table.at(static_cast<std::uint32_t>(d), w);
            const double gap = std::abs(res.value - brute);
            if (gap > 1e-9) pass = false;
            if (params.N == 4 && d == 100) detail = "gap(d=100) = " + fmt(gap) + " (limit 1e-9)";
        }
    }

    // The asymptotic regime needs the log-term in E S_w to be small, hence the
    // small-beta reference set here.
    const auto c = derive_constants({3, 0.9, 0.1, 0.9});
    double prev_gap = 1e100;
    double final_ratio = 0.0;
    for (const std::uint64_t d : {50ULL, 100ULL, 200ULL}) {
        const auto res = u_d(c, 3, d, 0.1, 1e-10);
        const double ratio = res.value / u_d_asymptotic(c, d);
        const double gap = std::abs(ratio - 1.0);
        if (gap >= prev_gap) pass = false;
        prev_gap = gap;
        final_ratio = ratio;
    }
    if (std::abs(final_ratio - 1.0) > 0.20) pass = false;
    report(5, "degree marginal and tail law", pass,
           detail + ", ratio(d=200) = " + fmt(final_ratio) + " (limit 1 +- 0.2)");
}

// 6. representation identity: convolution DP equals the table for w <= 40, and
// a 1e6-sample Monte Carlo joint lands within TV 0.01 on w <= 30.
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = derive_constants({4, 0.5, 0.5, 0.5});
    const auto table = xdw_table(c, 4, 40);
    const auto joint = ncg::testing::representation_joint_dp(c, 4, 40);
    double worst = 0.0;
    for (std::uint32_t w = 1; w <= 40; ++w)
        for (std::uint32_t d = 3; d <= 3 * w; ++d)
            worst = std::max(worst, std::abs(table.at(d, w) - joint[w - 1][d - 3]));

    rng_engine rng(987654321);
    const auto hist = sample_representation(c, 4, rng, 1000000, 300);
    double emp_mass = 0.0, th_mass = 0.0;
    for (const auto& [cell, count] : hist.counts)
        if (cell.second <= 30) emp_mass += static_cast<double>(count);
    for (int w = 1; w <= 30; ++w) th_mass += table.xw[w - 1];
    double tv = 0.0;
    for (std::uint32_t w = 1; w <= 30; ++w)
        for (std::uint32_t d = 3; d <= 3 * w; ++d) {
            const auto it = hist.counts.find({d, w});
            const double e =
                it == hist.counts.end() ? 0.0 : static_cast<double>(it->second) / emp_mass;
            tv += std::abs(e - table.at(d, w) / th_mass);
        }
    tv *= 0.5;
    const double secs = seconds_since(t0);
    report(6, "representation of the joint law", worst <= 1e-10 && tv <= 0.01 && secs < 30.0,
           "max DP gap = " + fmt(worst) + " (limit 1e-10), MC TV = " + fmt(tv) +
               " (limit 0.01), " + fmt(secs) + " s (limit 30)");
}

// 7. local CLT: normalized sup error decreasing across w in {250,500,1000,2000}
// and consistent with O(w^-1/2) between w=500 and w=2000.
void criterion_7() {
    const auto c = derive_constants({4, 0.5, 0.5, 0.5});
    const auto table = xdw_table(c, 4, 2000);
    const auto sup_err = [&](std::uint64_t w) {
        double sup = 0.0;
        for (std::uint32_t d = 3; d <= 3 * static_cast<std::uint32_t>(w); ++d)
            sup = std::max(sup, std::abs(table.at(d, static_cast<std::uint32_t>(w)) -
                                         clt_approx_xdw(c, 4, d, w)));
        return sup *
               std::sqrt(2.0 * 3.14159265358979323846 * c.alpha1 * c.alpha2 *
                         static_cast<double>(w)) /
               (c.alpha * xw_closed_form(c, w));
    };
    const double e250 = sup_err(250), e500 = sup_err(500), e1000 = sup_err(1000),
                 e2000 = sup_err(2000);
    const bool decreasing = e250 > e500 && e500 > e1000 && e1000 > e2000;
    const double scaling_limit = 2.0 * e500 * std::sqrt(500.0 / 2000.0);
    report(7, "local CLT profile", decreasing && e2000 <= scaling_limit,
           "sup errors " + fmt(e250) + " > " + fmt(e500) + " > " + fmt(e1000) + " > " +
               fmt(e2000) + ", e2000 limit " + fmt(scaling_limit));
}

// 8. fixed-seed 1e6-step run against theory.
void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const model_params params{4, 0.5, 0.5, 0.5};
    const auto c = derive_constants(params);

    graph_state g(params, 20250810);
    const std::uint64_t at[] = {10000, 100000, 1000000};
    bool pass = true;
    std::vector<snapshot> snaps;
    std::size_t next = 0;
    for (std::uint64_t s = 1; s <= 1000000; ++s) {
        g.step();
        if (next < std::size(at) && at[next] == s) {
            try {
                g.check_invariants();
            } catch (const std::exception&) {
                pass = false;
            }
            snaps.push_back(g.make_snapshot());
            ++next;
        }
    }
    const auto& last = snaps.back();
    const double V = static_cast<double>(last.vertex_count);
    const double drift = std::abs(V / 1e6 - 0.5);
    if (drift > 0.002) pass = false;

    const auto xw = xw_recurrence(c, 10);
    double worst_w = 0.0;
    for (std::uint32_t w = 1; w <= 5; ++w) {
        const auto it = last.xw.find(w);
        const double emp = it == last.xw.end() ? 0.0 : static_cast<double>(it->second) / V;
        worst_w = std::max(worst_w, std::abs(emp - xw[w - 1]));
    }
    if (worst_w > 0.01) pass = false;

    double worst_d = 0.0;
    for (std::uint32_t d = 3; d <= 7; ++d) {
        const auto res = u_d(c, 4, d, 0.1, 1e-10);
        const auto it = last.ud.find(d);
        const double emp = it == last.ud.end() ? 0.0 : static_cast<double>(it->second) / V;
        worst_d = std::max(worst_d, std::abs(emp - res.value));
    }
    if (worst_d > 0.01) pass = false;

    const auto zero_it = last.xdw.find({5, 2});
    const double zero_ratio =
        zero_it == last.xdw.end() ? 0.0 : static_cast<double>(zero_it->second) / V;
    if (zero_ratio > 0.005) pass = false;

    const double secs = seconds_since(t0);
    if (secs > 60.0) pass = false;
    report(8, "simulation vs theory at n=1e6", pass,
           "drift = " + fmt(drift) + " (limit 0.002), max weight gap = " + fmt(worst_w) +
               ", max degree gap = " + fmt(worst_d) + " (limits 0.01), zero-band ratio = " +
               fmt(zero_ratio) + " (limit 0.005), " + fmt(secs) + " s (limit 60)");
}

// 9. one-step transition kernel on a frozen state, 1e5 replays, 3 standard
// errors per transition bullet.
void criterion_9() {
    const model_params params{4, 0.5, 0.5, 0.5};
    const auto c = derive_constants(params);
    const int N = params.N;

    graph_state frozen(params, 424242);
    frozen.run(150, {});
    const std::uint64_t n = frozen.steps_done() + 1;  // index of the replayed step
    const double V = static_cast<double>(frozen.vertex_count());

    // highest-weight vertex, lowest id on ties
    vertex_id tracked = 0;
    for (vertex_id v = 0; v < frozen.vertex_count(); ++v)
        if (frozen.weight(v) > frozen.weight(tracked)) tracked = v;
    const double w0 = static_cast<double>(frozen.weight(tracked));
    const double d0 = static_cast<double>(frozen.degree(tracked));

    // Transition probabilities for the tracked vertex: index 0 = untouched,
    // index 1+m = weight +1 and degree +m.
    std::vector<double> probs(static_cast<std::size_t>(N) + 1, 0.0);
    const double cn1 = choose(V, N - 1);
    const double cn = choose(V, N);
    probs[1] = (1.0 - params.p) *
               (params.q * w0 / static_cast<double>(n) + (1.0 - params.q) * choose(d0, N - 1) / cn);
    probs[2] = params.p * (params.r * (N - 1) * w0 / (N * static_cast<double>(n)) +
                           (1.0 - params.r) * choose(d0, N - 2) / cn1) +
               (1.0 - params.p) * (1.0 - params.q) * choose(d0, N - 2) * (V - d0 - 1.0) / cn;
    for (int m = 2; m <= N - 2; ++m)
        probs[1 + m] =
            params.p * (1.0 - params.r) * choose(d0, N - m - 1) * choose(V - d0 - 1.0, m - 1) /
                cn1 +
            (1.0 - params.p) * (1.0 - params.q) * choose(d0, N - m - 1) *
                choose(V - d0 - 1.0, m) / cn;
    probs[static_cast<std::size_t>(N)] =
        params.p * (1.0 - params.r) * choose(V - d0 - 1.0, N - 2) / cn1 +
        (1.0 - params.p) * (1.0 - params.q) * choose(V - d0 - 1.0, N - 1) / cn;
    const double participate = w0 * c.alpha / static_cast<double>(n) + params.p * c.beta / V;
    probs[0] = 1.0 - participate;

    double total = 0.0;
    for (const double p : probs) total += p;
    bool pass = std::abs(total - 1.0) <= 1e-12;

    const int replays = 100000;
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (int i = 0; i < replays; ++i) {
        graph_state trial = frozen;
        trial.reseed(777000000ULL + static_cast<std::uint64_t>(i));
        trial.step();
        const auto dw = trial.weight(tracked) - frozen.weight(tracked);
        const auto dd = trial.degree(tracked) - frozen.degree(tracked);
        const std::size_t bucket = dw == 0 ? 0 : 1 + static_cast<std::size_t>(dd);
        ++counts[bucket];
    }

    double worst_sigmas = 0.0;
    for (std::size_t b = 0; b < probs.size(); ++b) {
        const double freq = static_cast<double>(counts[b]) / replays;
        const double se = std::sqrt(probs[b] * (1.0 - probs[b]) / replays);
        const double gap = std::abs(freq - probs[b]);
        if (se == 0.0) {
            if (gap != 0.0) pass = false;
            continue;
        }
        worst_sigmas = std::max(worst_sigmas, gap / se);
        if (gap > 3.0 * se) pass = false;
    }
    report(9, "one-step transition kernel", pass,
           "tracked (d,w) = (" + fmt(d0) + "," + fmt(w0) + "), worst deviation = " +
               fmt(worst_sigmas) + " SE (limit 3)");
}

// 10. byte-identical artifacts across two invocations of the same config.
void criterion_10() {
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    const auto base = fs::temp_directory_path() / "ncg_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);

    cli::experiment_config config;
    config.params = {4, 0.5, 0.5, 0.5};
    config.seeds = {20250810};
    config.steps = 20000;
    config.snapshot_at = {10000, 20000};
    config.w_max = 300;
    config.w_cut = 20;
    config.d_cut = 40;
    config.ud_max_d = 20;
    config.xdw_out_w_max = 40;
    config.export_edges = true;

    bool pass = true;
    std::string failed_file = "none";
    {
        std::ostringstream sink;  // the commands narrate on stdout; keep our output clean
        auto* old = std::cout.rdbuf(sink.rdbuf());
        for (const char* sub : {"a", "b"}) {
            config.out_dir = base / sub;
            if (cli::cmd_simulate(config) != 0 || cli::cmd_limits(config) != 0 ||
                cli::cmd_compare(config) != 0)
                pass = false;
        }
        std::cout.rdbuf(old);
    }
    if (pass) {
        for (const auto& entry : fs::directory_iterator(base / "a")) {
            const auto name = entry.path().filename().string();
            const auto other = base / "b" / name;
            if (!fs::exists(other)) {
                pass = false;
                failed_file = name;
                break;
            }
            std::string lhs = slurp(entry.path());
            std::string rhs = slurp(other);
            if (name.starts_with("manifest_")) {
                auto ja = nlohmann::ordered_json::parse(lhs);
                auto jb = nlohmann::ordered_json::parse(rhs);
                ja.erase("wall_time_seconds");
                jb.erase("wall_time_seconds");
                lhs = ja.dump();
                rhs = jb.dump();
            }
            if (lhs != rhs) {
                pass = false;
                failed_file = name;
                break;
            }
        }
    }
    fs::remove_all(base);
    report(10, "byte-identical reruns", pass,
           pass ? "all CSV/JSON artifacts identical (manifests up to wall time)"
                : "first mismatch: " + failed_file);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0)
        std::printf("acceptance: all 10 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return g_failures;
}
