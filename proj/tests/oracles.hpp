#pragma once

// Test-side oracles, kept independent of the implementation paths they check.

#include <cstdint>
#include <vector>

#include "ncg/limits.hpp"
#include "ncg/params.hpp"

namespace ncg::testing {

// Joint law of (S_W, W) by direct convolution of the increment laws against
// the closed-form weight marginal. Row w-1 covers d = N-1 .. (N-1)w. This is
// a different route to the same limit as the two-dimensional table recurrence.
inline std::vector<std::vector<double>> representation_joint_dp(const derived_constants& c, int N,
                                                                int W) {
    std::vector<std::vector<double>> joint;
    joint.reserve(W);
    std::vector<double> pmf{1.0};  // S_1 = N-1 with probability one
    for (int w = 1; w <= W; ++w) {
        if (w > 1) {
            const double denom = c.alpha * (w - 1) + c.beta;
            const double p0 = c.alpha1 * (w - 1) / denom;
            const double p1 = c.alpha2 * (w - 1) / denom;
            const double pn = c.beta / denom;
            std::vector<double> next(pmf.size() + static_cast<std::size_t>(N - 1), 0.0);
            for (std::size_t i = 0; i < pmf.size(); ++i) {
                if (pmf[i] == 0.0) continue;
                next[i] += p0 * pmf[i];
                next[i + 1] += p1 * pmf[i];
                next[i + static_cast<std::size_t>(N - 1)] += pn * pmf[i];
            }
            pmf = std::move(next);
        }
        const double xw = xw_closed_form(c, static_cast<std::uint64_t>(w));
        std::vector<double> row(pmf.size());
        for (std::size_t i = 0; i < pmf.size(); ++i) row[i] = pmf[i] * xw;
        joint.push_back(std::move(row));
    }
    return joint;
}

}  // namespace ncg::testing
