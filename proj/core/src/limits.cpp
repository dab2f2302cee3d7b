#include "ncg/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ncg {

namespace {

void require_alpha_positive(const derived_constants& c, const char* who) {
    if (!(c.alpha > 0.0))
        throw std::domain_error(std::string(who) + ": requires alpha > 0");
}

double base_cell(const derived_constants& c) { return 1.0 / (c.alpha + c.beta + 1.0); }

// E xi_j and E xi_j^2 of the three-point increment law at position j >= 2.
struct xi_moments {
    double mean;
    double second;
};

xi_moments xi_moment(const derived_constants& c, int N, std::uint64_t j) {
    const double denom = c.alpha * static_cast<double>(j - 1) + c.beta;
    if (!(denom > 0.0))
        throw std::domain_error("sw_moments: alpha and beta both zero");
    const double nm1 = static_cast<double>(N - 1);
    const double p1 = c.alpha2 * static_cast<double>(j - 1) / denom;
    const double pn = c.beta / denom;
    return {p1 + nm1 * pn, p1 + nm1 * nm1 * pn};
}

}  // namespace

limit_table xdw_table(const derived_constants& c, int N, int W_max) {
    if (W_max < 1) throw std::invalid_argument("xdw_table: W_max must be >= 1");
    if (N < 3) throw std::invalid_argument("xdw_table: N must be >= 3");

    limit_table t;
    t.constants = c;
    t.N = N;
    t.W_max = W_max;
    t.rows.reserve(W_max);
    t.xw.reserve(W_max);

    t.rows.push_back({base_cell(c)});
    t.xw.push_back(t.rows[0][0]);

    const int span = N - 1;
    for (int w = 2; w <= W_max; ++w) {
        const auto& prev = t.rows[w - 2];
        const std::size_t len = static_cast<std::size_t>(span) * (w - 1) + 1;
        std::vector<double> cur(len, 0.0);
        const double a1w = c.alpha1 * (w - 1);
        const double a2w = c.alpha2 * (w - 1);
        const double inv = 1.0 / (c.alpha * w + c.beta + 1.0);
        // cell i holds d = N-1+i; the three parents sit at offsets 0, -1, -(N-1).
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const double x = prev[i];
            if (x == 0.0) continue;
            cur[i] += a1w * x;
            cur[i + 1] += a2w * x;
            cur[i + span] += c.beta * x;
        }
        double sum = 0.0;
        for (double& v : cur) {
            v *= inv;
            sum += v;
        }
        t.rows.push_back(std::move(cur));
        t.xw.push_back(sum);
    }

    double total = 0.0;
    for (const double v : t.xw) total += v;
    t.normalization_deficit = 1.0 - total;
    return t;
}

std::vector<double> xw_recurrence(const derived_constants& c, int W_max) {
    if (W_max < 1) throw std::invalid_argument("xw_recurrence: W_max must be >= 1");
    std::vector<double> xw(W_max);
    xw[0] = base_cell(c);
    for (int w = 2; w <= W_max; ++w)
        xw[w - 1] = xw[w - 2] * (c.alpha * (w - 1) + c.beta) / (c.alpha * w + c.beta + 1.0);
    return xw;
}

double xw_constant(const derived_constants& c) {
    require_alpha_positive(c, "xw_constant");
    const double a = c.alpha;
    const double b = c.beta;
    return std::exp(std::lgamma(1.0 + (b + 1.0) / a) - std::log(a) - std::lgamma(1.0 + b / a));
}

double xw_closed_form(const derived_constants& c, std::uint64_t w) {
    require_alpha_positive(c, "xw_closed_form");
    if (w < 1) throw std::invalid_argument("xw_closed_form: w must be >= 1");
    const double a = c.alpha;
    const double b = c.beta;
    const double dw = static_cast<double>(w);
    const double log_value = std::lgamma(1.0 + (b + 1.0) / a) - std::log(a) -
                             std::lgamma(1.0 + b / a) + std::lgamma(dw + b / a) -
                             std::lgamma(dw + (b + 1.0) / a + 1.0);
    return std::exp(log_value);
}

double xw_asymptotic(const derived_constants& c, std::uint64_t w) {
    require_alpha_positive(c, "xw_asymptotic");
    if (w < 1) throw std::invalid_argument("xw_asymptotic: w must be >= 1");
    const double exponent = 1.0 + 1.0 / c.alpha;
    return std::exp(std::log(xw_constant(c)) - exponent * std::log(static_cast<double>(w)));
}

sw_stats sw_moments(const derived_constants& c, int N, std::uint64_t w) {
    if (w < 1) throw std::invalid_argument("sw_moments: w must be >= 1");
    sw_stats s{static_cast<double>(N - 1), 0.0};  // xi_1 is constant
    for (std::uint64_t j = 2; j <= w; ++j) {
        const auto m = xi_moment(c, N, j);
        s.mean += m.mean;
        s.variance += m.second - m.mean * m.mean;
    }
    return s;
}

double clt_approx_xdw(const derived_constants& c, int N, std::uint64_t d, std::uint64_t w) {
    if (!(c.alpha1 > 0.0 && c.alpha2 > 0.0))
        throw std::domain_error("clt_approx_xdw: requires alpha1 > 0 and alpha2 > 0");
    if (w < 2) throw std::invalid_argument("clt_approx_xdw: w must be >= 2");
    const auto m = sw_moments(c, N, w);
    const double xw = xw_closed_form(c, w);
    const double pref =
        c.alpha / std::sqrt(2.0 * std::numbers::pi * c.alpha1 * c.alpha2 * static_cast<double>(w));
    const double dev = static_cast<double>(d) - m.mean;
    return xw * pref * std::exp(-dev * dev / (2.0 * m.variance));
}

namespace {

// Certified bound on sum_{w >= w_from} x_w P(S_w = d) using the Hoeffding
// upper bound P(S_w <= d) <= exp(-2 (E S_w - d)^2 / ((w-1)(N-1)^2)) for the
// weights where E S_w > d, which holds throughout the range given w_from lies
// above the window. Terms decrease there, so once they are negligible the
// remainder is closed off geometrically with the last observed ratio.
double certified_upper_tail(const derived_constants& c, int N, std::uint64_t d,
                            std::uint64_t w_from) {
    const double nm1 = static_cast<double>(N - 1);
    const double dd = static_cast<double>(d);

    // Walk x_w and E S_w up to w_from.
    double xw = base_cell(c);
    double mean = nm1;
    for (std::uint64_t w = 2; w <= w_from; ++w) {
        xw *= (c.alpha * (w - 1) + c.beta) / (c.alpha * w + c.beta + 1.0);
        mean += xi_moment(c, N, w).mean;
    }

    double bound = 0.0;
    double prev_term = -1.0;
    constexpr std::uint64_t max_iter = 4'000'000;
    std::uint64_t w = w_from;
    for (std::uint64_t it = 0; it < max_iter; ++it, ++w) {
        if (w > w_from) {
            xw *= (c.alpha * (w - 1) + c.beta) / (c.alpha * w + c.beta + 1.0);
            mean += xi_moment(c, N, w).mean;
        }
        const double gap = mean - dd;
        double term;
        if (gap <= 0.0) {
            term = xw;  // no exponential control yet, count the full mass
        } else {
            term = xw * std::exp(-2.0 * gap * gap / (static_cast<double>(w - 1) * nm1 * nm1));
        }
        bound += term;
        if (term == 0.0 && gap > 0.0) return bound;  // later terms only shrink
        if (prev_term > 0.0 && term < prev_term) {
            const double ratio = term / prev_term;
            if (term < 1e-24 || term < bound * 1e-18) {
                bound += term * ratio / (1.0 - ratio);
                return bound;
            }
        }
        prev_term = term;
    }
    throw std::runtime_error("u_d: tail certificate did not converge");
}

}  // namespace

ud_result u_d(const derived_constants& c, int N, std::uint64_t d, double eps, double tail_tol) {
    require_alpha_positive(c, "u_d");
    if (!(c.alpha2 > 0.0))
        throw std::domain_error("u_d: unsupported for alpha2 == 0 (degree never grows weighted)");
    if (!(eps > 0.0 && eps < 1.0 / 6.0))
        throw std::invalid_argument("u_d: eps must lie in (0, 1/6)");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("u_d: tail_tol must be positive");
    if (d < static_cast<std::uint64_t>(N - 1))
        throw std::invalid_argument("u_d: d below N-1 has no mass");

    const double f = c.alpha / c.alpha2 * static_cast<double>(d);
    const std::uint64_t w_lo = (d + static_cast<std::uint64_t>(N) - 2) / (N - 1);  // ceil
    std::uint64_t w_end =
        std::max<std::uint64_t>(w_lo + 1, static_cast<std::uint64_t>(
                                              std::ceil(f + std::pow(f, 0.5 + eps))));

    double bound = certified_upper_tail(c, N, d, w_end + 1);
    constexpr std::uint64_t hard_cap = 1u << 24;
    while (bound > tail_tol) {
        if (w_end > hard_cap)
            throw std::runtime_error("u_d: tail tolerance unattainable within window cap");
        w_end *= 2;
        bound = certified_upper_tail(c, N, d, w_end + 1);
    }

    // Rolling two-row pass over the jagged recurrence, harvesting column d.
    const int span = N - 1;
    double sum = 0.0;
    std::vector<double> prev{base_cell(c)};
    if (d == static_cast<std::uint64_t>(span)) sum += prev[0];
    std::vector<double> cur;
    for (std::uint64_t w = 2; w <= w_end; ++w) {
        const std::size_t len = static_cast<std::size_t>(span) * (w - 1) + 1;
        cur.assign(len, 0.0);
        const double a1w = c.alpha1 * static_cast<double>(w - 1);
        const double a2w = c.alpha2 * static_cast<double>(w - 1);
        const double inv = 1.0 / (c.alpha * w + c.beta + 1.0);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const double x = prev[i];
            if (x == 0.0) continue;
            cur[i] += a1w * x;
            cur[i + 1] += a2w * x;
            cur[i + span] += c.beta * x;
        }
        for (double& v : cur) v *= inv;
        if (d >= static_cast<std::uint64_t>(span) && d <= static_cast<std::uint64_t>(span) * w)
            sum += cur[d - span];
        std::swap(prev, cur);
    }
    return {sum, bound, w_end};
}

double u_d_asymptotic(const derived_constants& c, std::uint64_t d) {
    require_alpha_positive(c, "u_d_asymptotic");
    if (!(c.alpha2 > 0.0)) throw std::domain_error("u_d_asymptotic: requires alpha2 > 0");
    const double a = c.alpha;
    const double b = c.beta;
    const double exponent = 1.0 + 1.0 / a;
    const double log_pref =
        std::lgamma(1.0 + (b + 1.0) / a) - std::log(c.alpha2) - std::lgamma(1.0 + b / a);
    return std::exp(log_pref - exponent * std::log(a * static_cast<double>(d) / c.alpha2));
}

representation_sample sample_representation(const derived_constants& c, int N, rng_engine& rng,
                                            std::uint64_t count, std::uint32_t W_cap) {
    require_alpha_positive(c, "sample_representation");
    if (W_cap < 1) throw std::invalid_argument("sample_representation: W_cap must be >= 1");

    const auto xw = xw_recurrence(c, static_cast<int>(W_cap));
    std::vector<double> cdf(W_cap);
    double acc = 0.0;
    for (std::uint32_t w = 0; w < W_cap; ++w) {
        acc += xw[w];
        cdf[w] = acc;
    }
    representation_sample out;
    out.truncated_mass = 1.0 - acc;
    if (!(out.truncated_mass < 1e-3))
        throw std::invalid_argument("sample_representation: W_cap truncates more than 1e-3 mass");

    const double nm1 = static_cast<double>(N - 1);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double u = unit_uniform(rng) * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto w = static_cast<std::uint32_t>(std::distance(cdf.begin(), it)) + 1;
        double d = nm1;  // xi_1
        for (std::uint32_t j = 2; j <= w; ++j) {
            const double denom = c.alpha * (j - 1) + c.beta;
            const double u2 = unit_uniform(rng) * denom;
            if (u2 < c.alpha1 * (j - 1)) {
                // degree increment 0
            } else if (u2 < c.alpha * (j - 1)) {
                d += 1.0;
            } else {
                d += nm1;
            }
        }
        ++out.counts[{static_cast<std::uint32_t>(d), w}];
        ++out.total;
    }
    return out;
}

}  // namespace ncg
