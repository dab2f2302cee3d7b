#include "ncg/params.hpp"

#include <cmath>
#include <stdexcept>

namespace ncg {

std::vector<std::string> validate(const model_params& params, validation_tier tier) {
    std::vector<std::string> violations;
    if (params.N < 3)
        violations.push_back("N >= 3");
    if (!(params.p > 0.0 && params.p <= 1.0))
        violations.push_back("0 < p <= 1");
    if (!(params.q >= 0.0 && params.q <= 1.0))
        violations.push_back("0 <= q <= 1");
    if (!(params.r >= 0.0 && params.r <= 1.0))
        violations.push_back("0 <= r <= 1");
    if (!std::isfinite(params.p) || !std::isfinite(params.q) || !std::isfinite(params.r))
        violations.push_back("p, q, r finite");

    if (tier == validation_tier::theorem_grade && violations.empty()) {
        if (!(params.p < 1.0)) violations.push_back("p < 1");
        if (!(params.q > 0.0)) violations.push_back("q > 0");
        if (!(params.r > 0.0)) violations.push_back("r > 0");
        if (!((1.0 - params.r) * (1.0 - params.q) > 0.0))
            violations.push_back("(1-r)(1-q) > 0");
    }
    return violations;
}

derived_constants derive_constants(const model_params& params) {
    const auto violations = validate(params, validation_tier::simulable);
    if (!violations.empty()) {
        std::string msg = "invalid model params:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw std::domain_error(msg);
    }

    derived_constants c;
    c.alpha1 = (1.0 - params.p) * params.q;
    c.alpha2 = static_cast<double>(params.N - 1) / params.N * params.p * params.r;
    c.alpha = c.alpha1 + c.alpha2;
    c.beta = (params.N - 1) * (1.0 - params.r) +
             params.N * (1.0 - params.p) * (1.0 - params.q) / params.p;
    if (c.alpha > 0.0) c.gamma_exponent = 1.0 + 1.0 / c.alpha;
    return c;
}

}  // namespace ncg
