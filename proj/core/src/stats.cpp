#include "ncg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncg {

empirical_dists empirical_ratios(const snapshot& s) {
    if (s.vertex_count == 0) throw std::invalid_argument("empirical_ratios: empty snapshot");
    empirical_dists e;
    e.n = s.n;
    e.vertex_count = s.vertex_count;
    const double inv = 1.0 / static_cast<double>(s.vertex_count);
    for (const auto& [cell, count] : s.xdw) e.xdw[cell] = count * inv;
    for (const auto& [w, count] : s.xw) e.xw[w] = count * inv;
    for (const auto& [d, count] : s.ud) e.ud[d] = count * inv;
    return e;
}

empirical_dists table_as_empirical(const limit_table& t) {
    empirical_dists e;
    for (std::uint32_t w = 1; w <= static_cast<std::uint32_t>(t.W_max); ++w) {
        const auto& row = t.rows[w - 1];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] == 0.0) continue;
            const auto d = static_cast<std::uint32_t>(t.d_min() + i);
            e.xdw[{d, w}] = row[i];
            e.ud[d] += row[i];
        }
        e.xw[w] = t.xw[w - 1];
    }
    return e;
}

namespace {

double lookup(const std::map<std::uint32_t, double>& m, std::uint32_t k) {
    const auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
}

// TV distance between two truncated-and-renormalized mass maps; masses beyond
// the cut go into the reported truncation figures.
struct tv_parts {
    double tv = 0.0;
    double lhs_trunc = 0.0;
    double rhs_trunc = 0.0;
};

tv_parts truncated_tv(const std::map<std::uint32_t, double>& lhs,
                      const std::map<std::uint32_t, double>& rhs, std::uint32_t cut) {
    double lhs_in = 0.0, lhs_all = 0.0, rhs_in = 0.0, rhs_all = 0.0;
    for (const auto& [k, v] : lhs) {
        lhs_all += v;
        if (k <= cut) lhs_in += v;
    }
    for (const auto& [k, v] : rhs) {
        rhs_all += v;
        if (k <= cut) rhs_in += v;
    }
    if (lhs_in <= 0.0 || rhs_in <= 0.0)
        throw std::invalid_argument("compare: truncation cut removes all mass");
    tv_parts out;
    out.lhs_trunc = lhs_all - lhs_in;
    out.rhs_trunc = rhs_all - rhs_in;
    double acc = 0.0;
    for (std::uint32_t k = 0; k <= cut; ++k)
        acc += std::abs(lookup(lhs, k) / lhs_in - lookup(rhs, k) / rhs_in);
    out.tv = 0.5 * acc;
    return out;
}

}  // namespace

fit_result fit_power_law_exponent(const std::map<std::uint32_t, double>& dist,
                                  std::uint32_t k_min, std::uint32_t k_max, fit_method method) {
    std::vector<std::pair<double, double>> pts;  // (k, mass)
    for (const auto& [k, mass] : dist)
        if (k >= k_min && k <= k_max && mass > 0.0)
            pts.emplace_back(static_cast<double>(k), mass);
    if (pts.size() < 10)
        throw std::invalid_argument("fit_power_law_exponent: fewer than 10 support points");

    fit_result res;
    res.points = static_cast<std::uint32_t>(pts.size());

    if (method == fit_method::loglog_ls) {
        const double m = static_cast<double>(pts.size());
        double sx = 0.0, sy = 0.0;
        for (const auto& [k, mass] : pts) {
            sx += std::log(k);
            sy += std::log(mass);
        }
        const double mx = sx / m, my = sy / m;
        double sxx = 0.0, sxy = 0.0;
        for (const auto& [k, mass] : pts) {
            const double dx = std::log(k) - mx;
            sxx += dx * dx;
            sxy += dx * (std::log(mass) - my);
        }
        res.exponent = sxy / sxx;
        double rss = 0.0;
        for (const auto& [k, mass] : pts) {
            const double fit = my + res.exponent * (std::log(k) - mx);
            const double r = std::log(mass) - fit;
            rss += r * r;
        }
        res.stderr_ = std::sqrt(rss / (m - 2.0) / sxx);
        return res;
    }

    // discrete_mle: the window-truncated law p_k = k^-g / Z(g) has score
    // sum n_k [E_g(log k) - log k]; E_g(log k) is strictly decreasing in g,
    // so the root is found by bisection.
    double total = 0.0, obs_mean_log = 0.0;
    for (const auto& [k, mass] : pts) {
        total += mass;
        obs_mean_log += mass * std::log(k);
    }
    obs_mean_log /= total;

    const auto mean_log = [&](double g) {
        double z = 0.0, zl = 0.0;
        for (const auto& [k, mass] : pts) {
            (void)mass;
            const double lk = std::log(k);
            const double p = std::exp(-g * lk);
            z += p;
            zl += p * lk;
        }
        return zl / z;
    };

    double lo = -60.0, hi = 60.0;
    if (obs_mean_log >= mean_log(lo) || obs_mean_log <= mean_log(hi))
        throw std::invalid_argument("fit_power_law_exponent: sample outside fittable range");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_log(mid) > obs_mean_log)
            lo = mid;
        else
            hi = mid;
    }
    const double g = 0.5 * (lo + hi);

    // Fisher information per observation is Var_g(log k).
    double z = 0.0, zl = 0.0, zll = 0.0;
    for (const auto& [k, mass] : pts) {
        (void)mass;
        const double lk = std::log(k);
        const double p = std::exp(-g * lk);
        z += p;
        zl += p * lk;
        zll += p * lk * lk;
    }
    const double var_log = zll / z - (zl / z) * (zl / z);
    res.exponent = -g;
    res.stderr_ = 1.0 / std::sqrt(total * var_log);
    return res;
}

comparison_report compare(const empirical_dists& emp, const limit_table& table,
                          const model_params& params, compare_options opts) {
    if (opts.W_cut < 1 || opts.W_cut > static_cast<std::uint32_t>(table.W_max))
        throw std::invalid_argument("compare: W_cut outside table range");
    if (opts.D_cut < table.d_min())
        throw std::invalid_argument("compare: D_cut below the degree floor");

    comparison_report rep;
    rep.params = params;
    rep.constants = table.constants;
    rep.n = emp.n;
    rep.vertex_count = emp.vertex_count;
    rep.W_cut = opts.W_cut;
    rep.D_cut = opts.D_cut;
    rep.fit_w_min = opts.fit_w_min ? opts.fit_w_min : std::max<std::uint32_t>(10, opts.W_cut / 10);
    rep.fit_w_max = opts.fit_w_max ? opts.fit_w_max : opts.W_cut;
    rep.fit_d_min = opts.fit_d_min ? opts.fit_d_min : std::max<std::uint32_t>(10, opts.D_cut / 10);
    rep.fit_d_max = opts.fit_d_max ? opts.fit_d_max : opts.D_cut;

    // Max cell deviation over the window, visiting both supports.
    double max_dev = 0.0;
    for (std::uint32_t w = 1; w <= opts.W_cut; ++w) {
        const std::uint32_t d_top = std::min(opts.D_cut, table.d_max(w));
        for (std::uint32_t d = table.d_min(); d <= d_top; ++d) {
            const auto it = emp.xdw.find({d, w});
            const double e = it == emp.xdw.end() ? 0.0 : it->second;
            max_dev = std::max(max_dev, std::abs(e - table.at(d, w)));
        }
    }
    for (const auto& [cell, e] : emp.xdw) {
        const auto& [d, w] = cell;
        if (w > opts.W_cut || d > opts.D_cut) continue;
        max_dev = std::max(max_dev, std::abs(e - table.at(d, w)));
    }
    rep.max_abs_dev_xdw = max_dev;

    std::map<std::uint32_t, double> theory_xw;
    for (std::uint32_t w = 1; w <= static_cast<std::uint32_t>(table.W_max); ++w)
        theory_xw[w] = table.xw[w - 1];
    std::vector<double> theory_ud_flat(table.d_max(static_cast<std::uint32_t>(table.W_max)) + 1,
                                       0.0);
    for (std::uint32_t w = 1; w <= static_cast<std::uint32_t>(table.W_max); ++w) {
        const auto& row = table.rows[w - 1];
        for (std::size_t i = 0; i < row.size(); ++i) theory_ud_flat[table.d_min() + i] += row[i];
    }
    std::map<std::uint32_t, double> theory_ud;
    for (std::uint32_t d = 0; d < theory_ud_flat.size(); ++d)
        if (theory_ud_flat[d] != 0.0) theory_ud[d] = theory_ud_flat[d];

    const auto tw = truncated_tv(emp.xw, theory_xw, opts.W_cut);
    rep.tv_weights = tw.tv;
    rep.emp_weight_trunc_mass = tw.lhs_trunc;
    rep.theory_weight_trunc_mass = tw.rhs_trunc;
    const auto td = truncated_tv(emp.ud, theory_ud, opts.D_cut);
    rep.tv_degrees = td.tv;
    rep.emp_degree_trunc_mass = td.lhs_trunc;
    rep.theory_degree_trunc_mass = td.rhs_trunc;

    try {
        rep.weight_fit = fit_power_law_exponent(emp.xw, rep.fit_w_min, rep.fit_w_max,
                                                fit_method::loglog_ls);
    } catch (const std::invalid_argument&) {
        rep.weight_fit.reset();
    }
    try {
        rep.degree_fit = fit_power_law_exponent(emp.ud, rep.fit_d_min, rep.fit_d_max,
                                                fit_method::loglog_ls);
    } catch (const std::invalid_argument&) {
        rep.degree_fit.reset();
    }

    if (table.constants.gamma_exponent)
        rep.theoretical_exponent = -*table.constants.gamma_exponent;
    if (emp.n > 0)
        rep.vn_drift = std::abs(static_cast<double>(emp.vertex_count) / static_cast<double>(emp.n) -
                                params.p);
    return rep;
}

std::vector<std::pair<std::uint64_t, double>> vn_drift(std::span<const snapshot> snaps, double p) {
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(snaps.size());
    for (const auto& s : snaps) {
        if (s.n == 0) continue;
        out.emplace_back(s.n, std::abs(static_cast<double>(s.vertex_count) /
                                           static_cast<double>(s.n) -
                                       p));
    }
    return out;
}

}  // namespace ncg
