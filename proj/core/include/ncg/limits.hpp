#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ncg/params.hpp"
#include "ncg/random.hpp"

namespace ncg {

// Limiting joint distribution x_{d,w} of (degree, weight), stored as jagged
// dense rows: row w covers d = N-1 .. (N-1)w. xw holds the row sums and
// normalization_deficit the mass beyond W_max.
struct limit_table {
    derived_constants constants;
    int N = 3;
    int W_max = 0;
    std::vector<std::vector<double>> rows;  // rows[w-1], length (N-1)(w-1)+1
    std::vector<double> xw;                 // xw[w-1]
    double normalization_deficit = 0.0;

    std::uint32_t d_min() const { return static_cast<std::uint32_t>(N - 1); }
    std::uint32_t d_max(std::uint32_t w) const { return static_cast<std::uint32_t>(N - 1) * w; }

    // x_{d,w}; zero outside the table and outside the support band.
    double at(std::uint32_t d, std::uint32_t w) const {
        if (w < 1 || w > static_cast<std::uint32_t>(W_max)) return 0.0;
        if (d < d_min() || d > d_max(w)) return 0.0;
        return rows[w - 1][d - d_min()];
    }
};

// Builds the table from the base cell x_{N-1,1} = 1/(alpha+beta+1) and the
// one-row recurrence
//   x_{d,w} = [a1 (w-1) x_{d,w-1} + a2 (w-1) x_{d-1,w-1} + b x_{d-(N-1),w-1}]
//             / (a w + b + 1),
// out-of-range cells reading as zero. Works for alpha == 0 as well.
limit_table xdw_table(const derived_constants& c, int N, int W_max);

// Scalar weight-marginal recurrence x_1 = 1/(a+b+1),
// x_w = (a(w-1)+b)/(aw+b+1) x_{w-1}. Valid for alpha == 0 too.
std::vector<double> xw_recurrence(const derived_constants& c, int W_max);

// Tail constant C = Gamma(1+(b+1)/a) / (a Gamma(1+b/a)). Requires alpha > 0.
double xw_constant(const derived_constants& c);

// Closed form x_w = C * Gamma(w+b/a) / Gamma(w+(b+1)/a+1), evaluated through
// log-gamma differences so large w cannot overflow. Requires alpha > 0.
double xw_closed_form(const derived_constants& c, std::uint64_t w);

// Power-law tail C * w^-(1+1/alpha). Requires alpha > 0.
double xw_asymptotic(const derived_constants& c, std::uint64_t w);

struct sw_stats {
    double mean = 0.0;
    double variance = 0.0;
};

// Exact mean and variance of S_w, the degree of a weight-w vertex in the
// (S_W, W) representation: S_w = xi_1 + ... + xi_w with xi_1 = N-1 and xi_j
// for j >= 2 on {0, 1, N-1} with weights a1(j-1), a2(j-1), b over a(j-1)+b.
sw_stats sw_moments(const derived_constants& c, int N, std::uint64_t w);

// Gaussian local approximation
//   x_w * a / sqrt(2 pi a1 a2 w) * exp(-(d - E S_w)^2 / (2 Var S_w)),
// using exact moments and the closed-form x_w. Requires alpha1, alpha2 > 0 and
// w >= 2.
double clt_approx_xdw(const derived_constants& c, int N, std::uint64_t d, std::uint64_t w);

struct ud_result {
    double value = 0.0;       // sum of x_{d,w} over the certified window
    double tail_bound = 0.0;  // certified bound on the omitted upper-tail mass
    std::uint64_t w_end = 0;  // last weight included in the sum
};

// Degree marginal u_d = sum_w x_{d,w}. Sums the column from the support floor
// ceil(d/(N-1)) up to W* = ceil(f + f^(1/2+eps)) with f = (alpha/alpha2) d,
// then doubles the window until a Hoeffding certificate bounds the omitted
// mass by tail_tol. Requires alpha > 0, alpha2 > 0 and 0 < eps < 1/6.
ud_result u_d(const derived_constants& c, int N, std::uint64_t d, double eps = 0.1,
              double tail_tol = 1e-10);

// Tail law Gamma(1+(b+1)/a) / (a2 Gamma(1+b/a)) * (a d / a2)^-(1+1/alpha).
double u_d_asymptotic(const derived_constants& c, std::uint64_t d);

struct representation_sample {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;  // (d, w)
    std::uint64_t total = 0;
    double truncated_mass = 0.0;  // weight mass beyond W_cap, renormalized away
};

// Monte Carlo draws of (S_W, W): W by inverse CDF from {x_w} truncated and
// renormalized at W_cap, then S_W by summing the xi increments. Requires
// alpha > 0 and a cap loose enough that the truncated mass stays below 1e-3.
representation_sample sample_representation(const derived_constants& c, int N, rng_engine& rng,
                                            std::uint64_t count, std::uint32_t W_cap);

}  // namespace ncg
