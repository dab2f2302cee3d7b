#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ncg/limits.hpp"
#include "ncg/simulator.hpp"
#include "ncg/stats.hpp"

namespace ncg {

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double x);
double parse_double(std::string_view text);

using metadata_map = std::map<std::string, std::string>;

// Snapshot CSV: one '#'-commented metadata line, a `d,w,count` header, then
// one row per occupied cell in (d, w) order.
void write_snapshot_csv(const std::filesystem::path& path, const snapshot& s,
                        const metadata_map& metadata);
struct snapshot_file {
    snapshot snap;
    metadata_map metadata;
};
snapshot_file read_snapshot_csv(const std::filesystem::path& path);

// Limit-table CSVs. xdw: `w,d,x_dw` up to w_out rows; xw: `w,x_w,
// x_w_closed_form,x_w_asymptotic` (the last two are NA when alpha == 0);
// ud: `d,u_d,u_d_asymptotic,tail_bound`.
void write_xdw_csv(const std::filesystem::path& path, const limit_table& t, int w_out,
                   const metadata_map& metadata);
struct xdw_row {
    std::uint32_t w;
    std::uint32_t d;
    double value;
};
std::vector<xdw_row> read_xdw_csv(const std::filesystem::path& path);

void write_xw_csv(const std::filesystem::path& path, const derived_constants& c,
                  const std::vector<double>& xw_rec, const metadata_map& metadata);
struct xw_row {
    std::uint32_t w;
    double recurrence;
    double closed_form;  // NaN when the file says NA
    double asymptotic;
};
std::vector<xw_row> read_xw_csv(const std::filesystem::path& path);

struct ud_csv_row {
    std::uint32_t d;
    double value;
    double asymptotic;
    double tail_bound;
};
void write_ud_csv(const std::filesystem::path& path, const std::vector<ud_csv_row>& rows,
                  const metadata_map& metadata);
std::vector<ud_csv_row> read_ud_csv(const std::filesystem::path& path);

// Comparison series CSV: `n,V_n,tv_weights,tv_degrees,vn_drift`.
struct series_row {
    std::uint64_t n;
    std::uint64_t vertex_count;
    double tv_weights;
    double tv_degrees;
    double drift;
};
void write_series_csv(const std::filesystem::path& path, const std::vector<series_row>& rows,
                      const metadata_map& metadata);

// Report JSON mirroring comparison_report, deterministic field order.
void write_report_json(const std::filesystem::path& path, const comparison_report& rep);

}  // namespace ncg
