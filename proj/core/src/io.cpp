#include "ncg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ncg {

std::string format_double(double x) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return {buf, end};
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::runtime_error("parse_double: bad number '" + std::string(text) + "'");
    return value;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

void write_metadata_line(std::ofstream& out, const metadata_map& metadata) {
    out << '#';
    for (const auto& [k, v] : metadata) out << ' ' << k << '=' << v;
    out << '\n';
}

metadata_map parse_metadata_line(const std::string& line) {
    metadata_map meta;
    std::istringstream ss(line.substr(1));
    std::string token;
    while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        meta[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return meta;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

// Reads a CSV with optional leading '#' metadata lines and one header line.
struct csv_content {
    metadata_map metadata;
    std::vector<std::vector<std::string>> rows;
};

csv_content read_csv(const std::filesystem::path& path, const std::string& expect_header) {
    auto in = open_in(path);
    csv_content out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto meta = parse_metadata_line(line);
            out.metadata.insert(meta.begin(), meta.end());
            continue;
        }
        if (!header_seen) {
            if (line != expect_header)
                throw std::runtime_error("unexpected CSV header in " + path.string() + ": " + line);
            header_seen = true;
            continue;
        }
        out.rows.push_back(split_csv(line));
    }
    if (!header_seen) throw std::runtime_error("missing CSV header in " + path.string());
    return out;
}

double parse_or_nan(const std::string& field) {
    if (field == "NA") return std::nan("");
    return parse_double(field);
}

std::string na_or(double v) { return std::isnan(v) ? "NA" : format_double(v); }

}  // namespace

void write_snapshot_csv(const std::filesystem::path& path, const snapshot& s,
                        const metadata_map& metadata) {
    auto out = open_out(path);
    write_metadata_line(out, metadata);
    out << "d,w,count\n";
    for (const auto& [cell, count] : s.xdw)
        out << cell.first << ',' << cell.second << ',' << count << '\n';
}

snapshot_file read_snapshot_csv(const std::filesystem::path& path) {
    const auto csv = read_csv(path, "d,w,count");
    snapshot_file out;
    out.metadata = csv.metadata;
    for (const auto& row : csv.rows) {
        if (row.size() != 3) throw std::runtime_error("bad snapshot row in " + path.string());
        const auto d = static_cast<std::uint32_t>(std::stoul(row[0]));
        const auto w = static_cast<std::uint32_t>(std::stoul(row[1]));
        const auto count = static_cast<std::uint64_t>(std::stoull(row[2]));
        out.snap.xdw[{d, w}] = count;
        out.snap.xw[w] += count;
        out.snap.ud[d] += count;
        out.snap.vertex_count += count;
    }
    if (const auto it = out.metadata.find("n"); it != out.metadata.end())
        out.snap.n = std::stoull(it->second);
    return out;
}

void write_xdw_csv(const std::filesystem::path& path, const limit_table& t, int w_out,
                   const metadata_map& metadata) {
    if (w_out < 1 || w_out > t.W_max)
        throw std::invalid_argument("write_xdw_csv: w_out outside table range");
    auto out = open_out(path);
    write_metadata_line(out, metadata);
    out << "w,d,x_dw\n";
    for (std::uint32_t w = 1; w <= static_cast<std::uint32_t>(w_out); ++w) {
        const auto& row = t.rows[w - 1];
        for (std::size_t i = 0; i < row.size(); ++i)
            out << w << ',' << t.d_min() + i << ',' << format_double(row[i]) << '\n';
    }
}

std::vector<xdw_row> read_xdw_csv(const std::filesystem::path& path) {
    const auto csv = read_csv(path, "w,d,x_dw");
    std::vector<xdw_row> rows;
    rows.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        if (row.size() != 3) throw std::runtime_error("bad x_dw row in " + path.string());
        rows.push_back({static_cast<std::uint32_t>(std::stoul(row[0])),
                        static_cast<std::uint32_t>(std::stoul(row[1])), parse_double(row[2])});
    }
    return rows;
}

void write_xw_csv(const std::filesystem::path& path, const derived_constants& c,
                  const std::vector<double>& xw_rec, const metadata_map& metadata) {
    auto out = open_out(path);
    write_metadata_line(out, metadata);
    out << "w,x_w,x_w_closed_form,x_w_asymptotic\n";
    const bool have_closed = c.alpha > 0.0;
    for (std::size_t i = 0; i < xw_rec.size(); ++i) {
        const std::uint64_t w = i + 1;
        out << w << ',' << format_double(xw_rec[i]) << ',';
        if (have_closed)
            out << format_double(xw_closed_form(c, w)) << ',' << format_double(xw_asymptotic(c, w));
        else
            out << "NA,NA";
        out << '\n';
    }
}

std::vector<xw_row> read_xw_csv(const std::filesystem::path& path) {
    const auto csv = read_csv(path, "w,x_w,x_w_closed_form,x_w_asymptotic");
    std::vector<xw_row> rows;
    rows.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        if (row.size() != 4) throw std::runtime_error("bad x_w row in " + path.string());
        rows.push_back({static_cast<std::uint32_t>(std::stoul(row[0])), parse_double(row[1]),
                        parse_or_nan(row[2]), parse_or_nan(row[3])});
    }
    return rows;
}

void write_ud_csv(const std::filesystem::path& path, const std::vector<ud_csv_row>& rows,
                  const metadata_map& metadata) {
    auto out = open_out(path);
    write_metadata_line(out, metadata);
    out << "d,u_d,u_d_asymptotic,tail_bound\n";
    for (const auto& row : rows)
        out << row.d << ',' << format_double(row.value) << ',' << na_or(row.asymptotic) << ','
            << format_double(row.tail_bound) << '\n';
}

std::vector<ud_csv_row> read_ud_csv(const std::filesystem::path& path) {
    const auto csv = read_csv(path, "d,u_d,u_d_asymptotic,tail_bound");
    std::vector<ud_csv_row> rows;
    rows.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        if (row.size() != 4) throw std::runtime_error("bad u_d row in " + path.string());
        rows.push_back({static_cast<std::uint32_t>(std::stoul(row[0])), parse_double(row[1]),
                        parse_or_nan(row[2]), parse_double(row[3])});
    }
    return rows;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<series_row>& rows,
                      const metadata_map& metadata) {
    auto out = open_out(path);
    write_metadata_line(out, metadata);
    out << "n,V_n,tv_weights,tv_degrees,vn_drift\n";
    for (const auto& row : rows)
        out << row.n << ',' << row.vertex_count << ',' << format_double(row.tv_weights) << ','
            << format_double(row.tv_degrees) << ',' << format_double(row.drift) << '\n';
}

void write_report_json(const std::filesystem::path& path, const comparison_report& rep) {
    nlohmann::ordered_json j;
    j["params"] = {{"N", rep.params.N}, {"p", rep.params.p}, {"q", rep.params.q},
                   {"r", rep.params.r}};
    nlohmann::ordered_json constants;
    constants["alpha1"] = rep.constants.alpha1;
    constants["alpha2"] = rep.constants.alpha2;
    constants["alpha"] = rep.constants.alpha;
    constants["beta"] = rep.constants.beta;
    if (rep.constants.gamma_exponent)
        constants["gamma_exponent"] = *rep.constants.gamma_exponent;
    else
        constants["gamma_exponent"] = nullptr;
    j["constants"] = constants;
    j["n"] = rep.n;
    j["vertex_count"] = rep.vertex_count;
    j["window"] = {{"W_cut", rep.W_cut},
                   {"D_cut", rep.D_cut},
                   {"fit_w", {rep.fit_w_min, rep.fit_w_max}},
                   {"fit_d", {rep.fit_d_min, rep.fit_d_max}}};
    j["max_abs_dev_xdw"] = rep.max_abs_dev_xdw;
    j["tv_weights"] = rep.tv_weights;
    j["tv_degrees"] = rep.tv_degrees;
    j["trunc_mass"] = {{"weights_empirical", rep.emp_weight_trunc_mass},
                       {"weights_theory", rep.theory_weight_trunc_mass},
                       {"degrees_empirical", rep.emp_degree_trunc_mass},
                       {"degrees_theory", rep.theory_degree_trunc_mass}};
    const auto fit_json = [](const std::optional<fit_result>& fit) -> nlohmann::ordered_json {
        if (!fit) return nullptr;
        return {{"exponent", fit->exponent}, {"stderr", fit->stderr_}, {"points", fit->points}};
    };
    j["weight_fit"] = fit_json(rep.weight_fit);
    j["degree_fit"] = fit_json(rep.degree_fit);
    if (rep.theoretical_exponent)
        j["theoretical_exponent"] = *rep.theoretical_exponent;
    else
        j["theoretical_exponent"] = nullptr;
    if (rep.vn_drift)
        j["vn_drift"] = *rep.vn_drift;
    else
        j["vn_drift"] = nullptr;

    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace ncg
