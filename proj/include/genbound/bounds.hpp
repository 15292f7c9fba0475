#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "genbound/errors.hpp"

namespace genbound {

/// Per-sample mutual-information inputs for the contraction-tightened
/// bound. All quantities are in nats; mi_y[i] may not exceed log K.
struct MutualInfoInputs {
    std::vector<double> mi_x_given_y;  // I(X_i; W | Y_i)
    std::vector<double> mi_y;          // I(Y_i; W)
    double sigma = 1.0;                // sub-Gaussian parameter of the loss
    int label_count = 2;

    int sample_count() const { return static_cast<int>(mi_x_given_y.size()); }
};

inline void validate(const MutualInfoInputs& mi) {
    if (mi.mi_x_given_y.empty() || mi.mi_x_given_y.size() != mi.mi_y.size())
        throw DomainError("mutual info inputs: need n >= 1 matched pairs");
    if (!(mi.sigma > 0.0)) throw DomainError("mutual info inputs: sigma must be positive");
    if (mi.label_count < 1) throw DomainError("mutual info inputs: label count must be >= 1");
    double log_k = std::log(static_cast<double>(mi.label_count));
    for (std::size_t i = 0; i < mi.mi_y.size(); ++i) {
        if (mi.mi_x_given_y[i] < 0.0 || mi.mi_y[i] < 0.0)
            throw DomainError("mutual info inputs: values must be nonnegative");
        if (mi.mi_y[i] > log_k + 1e-12)
            throw DomainError("mutual info inputs: mi_y exceeds log(label_count)");
    }
}

/// (sigma*sqrt(2)/n) * sum_i sqrt(eta_product * I(X_i;W|Y_i) + I(Y_i;W)).
/// The feature term contracts with eta_product; the label term does not.
inline double contraction_bound(const MutualInfoInputs& mi, double eta_product) {
    validate(mi);
    if (!(eta_product >= 0.0 && eta_product <= 1.0))
        throw DomainError("contraction_bound: eta_product must be in [0,1]");
    double acc = 0.0;
    for (std::size_t i = 0; i < mi.mi_y.size(); ++i)
        acc += std::sqrt(eta_product * mi.mi_x_given_y[i] + mi.mi_y[i]);
    return mi.sigma * std::sqrt(2.0) / static_cast<double>(mi.sample_count()) * acc;
}

/// Bound for networks whose internal representation at some layer takes
/// finitely many values; t_bar is the largest attainable minimum joint mass.
struct DiscreteLatentSpec {
    double sigma;
    int label_count;
    double t_bar;
    int latent_size;
};

inline double discrete_latent_bound(const DiscreteLatentSpec& spec) {
    if (!(spec.sigma > 0.0)) throw DomainError("discrete_latent_bound: sigma must be positive");
    if (spec.label_count < 1 || spec.latent_size < 1)
        throw DomainError("discrete_latent_bound: counts must be >= 1");
    // Closed at the top so the uniform-mass boundary case evaluates.
    double upper = 1.0 / (static_cast<double>(spec.latent_size) * spec.label_count);
    if (!(spec.t_bar > 0.0 && spec.t_bar <= upper))
        throw DomainError("discrete_latent_bound: t_bar must lie in (0, 1/(latent_size*K)]");
    double k = static_cast<double>(spec.label_count);
    return std::sqrt(2.0 * spec.sigma * spec.sigma * std::log(k * k / spec.t_bar));
}

/// Mutual-information bound under input dropout: i_k[k] is the largest MI
/// carried by any k-coordinate subset of the input, nondecreasing with
/// i_k[0] = 0.
struct MiubInputs {
    int d0;
    std::vector<double> i_k;  // length d0 + 1
};

inline void validate(const MiubInputs& inputs) {
    if (inputs.d0 < 1) throw DomainError("miub inputs: d0 must be >= 1");
    if (inputs.i_k.size() != static_cast<std::size_t>(inputs.d0) + 1)
        throw DomainError("miub inputs: i_k must have d0+1 entries");
    if (inputs.i_k.front() != 0.0) throw DomainError("miub inputs: i_k[0] must be 0");
    for (std::size_t k = 1; k < inputs.i_k.size(); ++k)
        if (inputs.i_k[k] < inputs.i_k[k - 1])
            throw DomainError("miub inputs: i_k must be nondecreasing");
}

/// Binomial mixture of the subset MI levels under keep probability
/// 1 - delta0. Nonincreasing in delta0 and 0 at delta0 = 1.
inline double miub_dropout(const MiubInputs& inputs, double delta0) {
    validate(inputs);
    if (!(delta0 >= 0.0 && delta0 <= 1.0)) throw DomainError("miub_dropout: delta0 must be in [0,1]");
    int d0 = inputs.d0;
    double acc = 0.0;
    double binom = 1.0;  // C(d0, k), updated multiplicatively
    for (int k = 0; k <= d0; ++k) {
        if (k > 0) binom *= static_cast<double>(d0 - k + 1) / k;
        acc += binom * std::pow(delta0, d0 - k) * std::pow(1.0 - delta0, k) * inputs.i_k[k];
    }
    return acc;
}

/// Gibbs-posterior learner parameters: inverse temperature alpha, the
/// feature/label split constant gamma, sample count and the network's
/// contraction coefficient product.
struct GibbsSpec {
    double alpha;
    double gamma;
    long n;
    double eta_product;
};

inline void validate(const GibbsSpec& spec) {
    if (!(spec.alpha > 0.0)) throw DomainError("gibbs: alpha must be positive");
    if (!(spec.gamma >= 0.0 && spec.gamma <= 1.0)) throw DomainError("gibbs: gamma must be in [0,1]");
    if (spec.n < 1) throw DomainError("gibbs: n must be >= 1");
    if (!(spec.eta_product >= 0.0 && spec.eta_product <= 1.0))
        throw DomainError("gibbs: eta_product must be in [0,1]");
}

/// alpha/(4n) * sqrt(gamma * eta_product + 1 - gamma); never exceeds
/// alpha/(4n).
inline double gibbs_bound(const GibbsSpec& spec) {
    validate(spec);
    return spec.alpha / (4.0 * static_cast<double>(spec.n)) *
           std::sqrt(spec.gamma * spec.eta_product + 1.0 - spec.gamma);
}

/// gamma is existential; when no value is known, the guarantee is the worst
/// case over the endpoints of [0,1].
inline double gibbs_bound_gamma_free(double alpha, long n, double eta_product) {
    return std::max(gibbs_bound({alpha, 0.0, n, eta_product}),
                    gibbs_bound({alpha, 1.0, n, eta_product}));
}

/// Network whose weights live on a finite grid of B levels per entry.
struct FiniteParamSpec {
    std::vector<int> dims;  // d0..dL
    int levels;             // B
};

namespace detail {

// Entropy cap sum_l d_l*d_{l-1} * log(levels), without the levels >= 2 check
// so degenerate limits stay reachable from tests.
inline double finite_param_mi_ub_raw(const std::vector<int>& dims, int levels) {
    if (dims.size() < 2) throw DomainError("finite params: need at least one layer");
    for (int d : dims)
        if (d < 1) throw DomainError("finite params: widths must be >= 1");
    if (levels < 1) throw DomainError("finite params: levels must be >= 1");
    double weights = 0.0;
    for (std::size_t l = 1; l < dims.size(); ++l)
        weights += static_cast<double>(dims[l]) * dims[l - 1];
    return weights * std::log(static_cast<double>(levels));
}

}  // namespace detail

/// Worst-case mutual information (nats) of a finite-parameter network:
/// total weight count times log B.
inline double finite_param_mi_ub(const FiniteParamSpec& spec) {
    if (spec.levels < 2) throw DomainError("finite params: levels must be >= 2");
    return detail::finite_param_mi_ub_raw(spec.dims, spec.levels);
}

enum class ComparatorVerdict { wasserstein_tighter, inconclusive };

/// One-directional comparator: when rho0 * K^2 <= A the Wasserstein route is
/// provably tighter; otherwise nothing is claimed.
inline ComparatorVerdict kl_vs_wasserstein_flag(double rho0, int label_count, double loss_range_a) {
    if (!(rho0 > 0.0)) throw DomainError("comparator: rho0 must be positive");
    if (!(loss_range_a > 0.0)) throw DomainError("comparator: loss range must be positive");
    if (label_count < 1) throw DomainError("comparator: label count must be >= 1");
    double k = static_cast<double>(label_count);
    return rho0 * k * k <= loss_range_a ? ComparatorVerdict::wasserstein_tighter
                                        : ComparatorVerdict::inconclusive;
}

}  // namespace genbound
