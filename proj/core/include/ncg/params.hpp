#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ncg {

// Model inputs: the interaction size N and the three branch probabilities.
// Each evolution step either adds a new vertex (probability p) that interacts
// with N-1 old vertices, or lets N old vertices interact (probability 1-p).
// r and q pick weight-proportional clique selection over uniform selection in
// the new-vertex and old-vertex branches respectively.
struct model_params {
    int N = 3;       // vertices per interaction, N >= 3
    double p = 0.5;  // new-vertex step probability, 0 < p <= 1
    double q = 0.5;  // weight-proportional N-clique choice, 0 <= q <= 1
    double r = 0.5;  // weight-proportional (N-1)-clique choice, 0 <= r <= 1
};

// Constants controlling the limiting distributions.
//   alpha1 = (1-p) q
//   alpha2 = (N-1)/N p r
//   alpha  = alpha1 + alpha2          (always < 1 for valid params)
//   beta   = (N-1)(1-r) + N(1-p)(1-q)/p
// gamma_exponent = 1 + 1/alpha is the scale-free exponent of both the weight
// and the degree tails; it is absent exactly when alpha == 0.
struct derived_constants {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> gamma_exponent;
};

// simulable: the parameter box the evolution mechanism accepts.
// theorem_grade: the strict inequalities the limit theorems need on top of it
// (0 < p < 1, q > 0, r > 0, (1-r)(1-q) > 0).
enum class validation_tier { simulable, theorem_grade };

// Returns the list of violated conditions, empty when params pass the tier.
// Violations are data, not errors.
std::vector<std::string> validate(const model_params& params, validation_tier tier);

// Throws std::domain_error when params fail the simulable tier.
derived_constants derive_constants(const model_params& params);

}  // namespace ncg
