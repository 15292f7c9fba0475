#pragma once

#include <cmath>
#include <vector>

#include "genbound/errors.hpp"

namespace genbound {

/// Gauss-Hermite rule for weight exp(-x^2); weights sum to sqrt(pi).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes by Newton iteration on the Hermite recurrence with the classic
/// asymptotic initial guesses.
inline GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw DomainError("gauss_hermite: order must be >= 1");
    GaussHermiteRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    const double pim4 = 0.7511255444649424828587030047762;  // pi^{-1/4}
    const int max_iter = 100;
    int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.nodes[1];
        else
            z = 2.0 * z - rule.nodes[i - 2];

        double pp = 0.0;
        for (int iter = 0; iter < max_iter; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-14) break;
        }
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

/// E[f(S)] for S ~ N(mean, stddev^2), evaluated with the given rule.
template <typename F>
double gauss_hermite_mean(const GaussHermiteRule& rule, double mean, double stddev, F&& f) {
    const double inv_sqrt_pi = 0.56418958354775628694807945156077;
    const double sqrt2 = 1.4142135623730950488016887242097;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mean + sqrt2 * stddev * rule.nodes[i]);
    return acc * inv_sqrt_pi;
}

}  // namespace genbound
