#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ncg/limits.hpp"
#include "ncg/simulator.hpp"

namespace ncg {

// Normalized counting statistics: each family sums to one over its support.
struct empirical_dists {
    std::uint64_t n = 0;
    std::uint64_t vertex_count = 0;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> xdw;  // (d, w)
    std::map<std::uint32_t, double> xw;
    std::map<std::uint32_t, double> ud;
};

empirical_dists empirical_ratios(const snapshot& s);

// Reads a limit table as if it were an observed distribution. Used for
// self-comparison smoke checks.
empirical_dists table_as_empirical(const limit_table& t);

enum class fit_method { loglog_ls, discrete_mle };

struct fit_result {
    double exponent = 0.0;  // negative for a decaying power law
    double stderr_ = 0.0;
    std::uint32_t points = 0;
};

// Fits mass(k) ~ C k^exponent on the window [k_min, k_max].
//   loglog_ls: least squares of log mass on log k; stderr is the OLS slope
//              standard error.
//   discrete_mle: maximum likelihood for a discrete power law truncated to the
//              window; masses are treated as counts; stderr comes from the
//              observed Fisher information.
// Throws std::invalid_argument with fewer than 10 positive-mass points.
fit_result fit_power_law_exponent(const std::map<std::uint32_t, double>& dist,
                                  std::uint32_t k_min, std::uint32_t k_max, fit_method method);

struct compare_options {
    std::uint32_t W_cut = 30;
    std::uint32_t D_cut = 60;
    // Weight-fit window; zeros select the default [max(10, W_cut/10), W_cut].
    std::uint32_t fit_w_min = 0;
    std::uint32_t fit_w_max = 0;
    // Degree-fit window; zeros select [max(10, D_cut/10), D_cut].
    std::uint32_t fit_d_min = 0;
    std::uint32_t fit_d_max = 0;
};

struct comparison_report {
    model_params params;
    derived_constants constants;
    std::uint64_t n = 0;
    std::uint64_t vertex_count = 0;
    std::uint32_t W_cut = 0;
    std::uint32_t D_cut = 0;
    std::uint32_t fit_w_min = 0, fit_w_max = 0;
    std::uint32_t fit_d_min = 0, fit_d_max = 0;

    double max_abs_dev_xdw = 0.0;  // over w <= W_cut, d <= D_cut
    double tv_weights = 0.0;       // on truncated-and-renormalized supports
    double tv_degrees = 0.0;
    double emp_weight_trunc_mass = 0.0;
    double theory_weight_trunc_mass = 0.0;
    double emp_degree_trunc_mass = 0.0;
    double theory_degree_trunc_mass = 0.0;

    std::optional<fit_result> weight_fit;
    std::optional<fit_result> degree_fit;
    std::optional<double> theoretical_exponent;  // -(1 + 1/alpha)
    std::optional<double> vn_drift;              // |V_n/n - p|, absent at n == 0
};

// Deterministic comparison of an empirical family against the table. Cuts must
// lie within the table range.
comparison_report compare(const empirical_dists& emp, const limit_table& table,
                          const model_params& params, compare_options opts);

// |V_n/n - p| per snapshot, paired with n. Snapshots with n == 0 are skipped.
std::vector<std::pair<std::uint64_t, double>> vn_drift(std::span<const snapshot> snaps, double p);

}  // namespace ncg
