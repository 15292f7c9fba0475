#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/matrix.hpp"
#include "genbound/parallel.hpp"
#include "genbound/quadrature.hpp"
#include "genbound/rng.hpp"

namespace genbound {

/// Binary Gaussian mixture: labels are fair +-1 coins and features are
/// N(y*mu0, sigma0^2 I).
struct GaussianMixtureSpec {
    std::vector<double> mu0;
    double sigma0 = 1.0;
    long n = 100;

    int dim() const { return static_cast<int>(mu0.size()); }
};

inline void validate(const GaussianMixtureSpec& spec) {
    if (spec.mu0.empty()) throw DomainError("mixture: mu0 must be nonempty");
    if (!(spec.sigma0 > 0.0)) throw DomainError("mixture: sigma0 must be positive");
    if (spec.n < 2) throw DomainError("mixture: n must be >= 2");
}

struct Dataset {
    MatrixR features;        // n x d0
    std::vector<int> labels;  // +-1

    Dataset(long n, int d0) : features(static_cast<int>(n), d0), labels(n, 1) {}
    long size() const { return static_cast<long>(labels.size()); }
};

inline Dataset sample_dataset(const GaussianMixtureSpec& spec, SeededRng& rng) {
    validate(spec);
    int d0 = spec.dim();
    Dataset data(spec.n, d0);
    for (long i = 0; i < spec.n; ++i) {
        int y = rng.sign();
        data.labels[i] = y;
        for (int j = 0; j < d0; ++j)
            data.features(static_cast<int>(i), j) = y * spec.mu0[j] + spec.sigma0 * rng.normal();
    }
    return data;
}

/// Mean-matching classifier: w = (1/n) sum_i y_i x_i.
inline std::vector<double> fit_mean_classifier(const Dataset& data) {
    if (data.size() < 1) throw DomainError("fit_mean_classifier: empty dataset");
    int d0 = data.features.cols();
    std::vector<double> w(d0, 0.0);
    for (long i = 0; i < data.size(); ++i)
        for (int j = 0; j < d0; ++j)
            w[j] += data.labels[i] * data.features(static_cast<int>(i), j);
    for (double& v : w) v /= static_cast<double>(data.size());
    return w;
}

/// Layout of the scaled-rotation stack: depth L with L-1 planar rotations
/// sharing one angle, a final 1x2 row, and two product constraints on the
/// layer scales (the first funnel_index scales multiply to
/// funnel_fraction * ||target||, all L multiply to ||target||).
struct RotationStackConfig {
    int depth = 10;
    double scale_total = 0.0;  // product of layer scales; 0 means take ||target||
    int funnel_index = 3;
    double funnel_fraction = 0.2;
};

inline void validate(const RotationStackConfig& cfg) {
    if (cfg.depth < 2) throw DomainError("rotation stack: depth must be >= 2");
    if (cfg.funnel_index < 1 || cfg.funnel_index > cfg.depth - 1)
        throw DomainError("rotation stack: funnel_index must lie in [1, depth-1]");
    if (!(cfg.funnel_fraction > 0.0 && cfg.funnel_fraction < 1.0))
        throw DomainError("rotation stack: funnel_fraction must be in (0,1)");
}

namespace detail {

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace detail

/// Build the stack from explicit layer scales. The common rotation angle is
/// the angle between the row direction (0,1) and the target, split evenly
/// over the L-1 rotations, signed so the full product reproduces target^T.
inline WeightStack rotation_stack_from_scales(const std::vector<double>& scales,
                                              const std::vector<double>& target) {
    if (target.size() != 2) throw DomainError("rotation stack: target must be 2-dimensional");
    int depth = static_cast<int>(scales.size());
    if (depth < 2) throw DomainError("rotation stack: need at least 2 layers");
    double norm = detail::norm2(target);
    if (norm < 1e-12) throw DegenerateTarget("rotation stack: target norm below 1e-12");

    double cos_total = std::clamp(target[1] / norm, -1.0, 1.0);
    double total = std::acos(cos_total);
    if (target[0] > 0.0) total = -total;
    double theta = total / (depth - 1);

    double c = std::cos(theta);
    double s = std::sin(theta);
    WeightStack stack;
    for (int l = 0; l < depth - 1; ++l)
        stack.layers.push_back(MatrixR(2, 2, {scales[l] * c, scales[l] * s,
                                              -scales[l] * s, scales[l] * c}));
    stack.layers.push_back(MatrixR(1, 2, {0.0, scales[depth - 1]}));
    return weight_products(std::move(stack));
}

/// Draw uniform layer scales and rescale the two groups so the partial
/// product through funnel_index equals funnel_fraction * ||target|| while
/// the full product equals ||target||.
inline WeightStack build_rotation_stack(const RotationStackConfig& cfg,
                                        const std::vector<double>& target, SeededRng& rng) {
    validate(cfg);
    if (target.size() != 2) throw DomainError("rotation stack: target must be 2-dimensional");
    double norm = detail::norm2(target);
    if (norm < 1e-12) throw DegenerateTarget("rotation stack: target norm below 1e-12");

    std::vector<double> scales(cfg.depth);
    for (double& v : scales) v = rng.uniform();

    int head = cfg.funnel_index;
    double log_head = 0.0, log_tail = 0.0;
    for (int l = 0; l < head; ++l) log_head += std::log(scales[l]);
    for (int l = head; l < cfg.depth; ++l) log_tail += std::log(scales[l]);

    // Groupwise geometric rescaling to meet both product constraints.
    double head_factor = std::exp((std::log(cfg.funnel_fraction * norm) - log_head) / head);
    double tail_factor = std::exp((-std::log(cfg.funnel_fraction) - log_tail) / (cfg.depth - head));
    for (int l = 0; l < head; ++l) scales[l] *= head_factor;
    for (int l = head; l < cfg.depth; ++l) scales[l] *= tail_factor;

    return rotation_stack_from_scales(scales, target);
}

enum class BoundKind { kl, wasserstein };

struct BoundProfile {
    std::vector<double> values;  // index 0..L
    int min_index = 0;           // argmin, lowest index on ties
    BoundKind kind = BoundKind::kl;
    long trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline int argmin_lowest(const std::vector<double>& values) {
    int best = 0;
    for (std::size_t l = 1; l < values.size(); ++l)
        if (values[l] < values[best]) best = static_cast<int>(l);
    return best;
}

inline void check_profile_inputs(const GaussianMixtureSpec& spec,
                                 const std::vector<WeightStack>& stacks) {
    validate(spec);
    if (stacks.empty()) throw DomainError("bound profile: need at least one stack");
    for (const WeightStack& st : stacks) {
        if (st.products.empty()) throw DomainError("bound profile: stacks must carry cached products");
        if (st.input_dim() != spec.dim())
            throw ShapeMismatch("bound profile: stack input width != mixture dimension");
        if (st.depth() != stacks.front().depth())
            throw ShapeMismatch("bound profile: stacks must share depth");
    }
}

}  // namespace detail

/// Per-layer values 2*sqrt(E[r_l]*(log(n/(n-1)) - 1/n) + d0/n) with the
/// expected rank estimated by the sample mean over the stacks. The profile
/// is nonincreasing in the layer index because ranks are.
inline BoundProfile kl_bound_profile(const GaussianMixtureSpec& spec,
                                     const std::vector<WeightStack>& stacks) {
    detail::check_profile_inputs(spec, stacks);
    int depth = stacks.front().depth();
    double nn = static_cast<double>(spec.n);
    double per_rank = std::log1p(1.0 / (nn - 1.0)) - 1.0 / nn;

    BoundProfile profile;
    profile.kind = BoundKind::kl;
    profile.trials = static_cast<long>(stacks.size());
    for (int l = 0; l <= depth; ++l) {
        double mean_rank = 0.0;
        for (const WeightStack& st : stacks) mean_rank += st.ranks[l];
        mean_rank /= static_cast<double>(stacks.size());
        profile.values.push_back(2.0 * std::sqrt(mean_rank * per_rank + spec.dim() / nn));
    }
    profile.min_index = detail::argmin_lowest(profile.values);
    return profile;
}

/// Weighted Wasserstein profile: coefficient
/// 4*sqrt(2)*sigma0*(sqrt(d0)+sqrt(n)-sqrt(n-1))/sqrt(n) times the root of
/// the sample mean of max(1, prod_{j>l} ||W_j||_op^2) * ||prod_l||_F^2.
inline BoundProfile wasserstein_bound_profile(const GaussianMixtureSpec& spec,
                                              const std::vector<WeightStack>& stacks) {
    detail::check_profile_inputs(spec, stacks);
    int depth = stacks.front().depth();
    double nn = static_cast<double>(spec.n);
    double coeff = 4.0 * std::sqrt(2.0) * spec.sigma0 *
                   (std::sqrt(static_cast<double>(spec.dim())) + std::sqrt(nn) - std::sqrt(nn - 1.0)) /
                   std::sqrt(nn);

    BoundProfile profile;
    profile.kind = BoundKind::wasserstein;
    profile.trials = static_cast<long>(stacks.size());
    for (int l = 0; l <= depth; ++l) {
        double mean = 0.0;
        for (const WeightStack& st : stacks) {
            double tail_op = 1.0;
            for (int j = l; j < depth; ++j) tail_op *= st.layer_op[j] * st.layer_op[j];
            mean += std::max(1.0, tail_op) * st.product_frob[l] * st.product_frob[l];
        }
        mean /= static_cast<double>(stacks.size());
        profile.values.push_back(coeff * std::sqrt(mean));
    }
    profile.min_index = detail::argmin_lowest(profile.values);
    return profile;
}

struct FunnelResult {
    int funnel_index = 0;               // argmin of the mean squared product norms
    std::vector<double> mean_frob_sq;   // per layer 0..L
    long trials = 0;
};

/// Funnel search over stacks produced by an arbitrary builder; the public
/// entry point below fixes the builder to the scaled-rotation construction.
template <typename BuildFn>
FunnelResult funnel_layer_with(const GaussianMixtureSpec& spec, int depth, BuildFn&& build,
                               int datasets, int stacks_per_dataset, const SeededRng& rng,
                               int workers = 1) {
    validate(spec);
    if (datasets < 1 || stacks_per_dataset < 1)
        throw DomainError("funnel_layer: trial counts must be >= 1");

    std::vector<std::vector<double>> partial(datasets, std::vector<double>(depth + 1, 0.0));
    for_each_index(datasets, workers, [&](long d) {
        SeededRng data_rng = rng.child(static_cast<std::uint64_t>(d));
        Dataset data = sample_dataset(spec, data_rng);
        std::vector<double> target = fit_mean_classifier(data);
        for (int k = 0; k < stacks_per_dataset; ++k) {
            SeededRng stack_rng = data_rng.child(static_cast<std::uint64_t>(k) + 1);
            WeightStack stack = build(target, stack_rng);
            for (int l = 0; l <= depth; ++l)
                partial[d][l] += stack.product_frob[l] * stack.product_frob[l];
        }
    });

    FunnelResult result;
    result.trials = static_cast<long>(datasets) * stacks_per_dataset;
    result.mean_frob_sq.assign(depth + 1, 0.0);
    for (int d = 0; d < datasets; ++d)
        for (int l = 0; l <= depth; ++l) result.mean_frob_sq[l] += partial[d][l];
    for (double& v : result.mean_frob_sq) v /= static_cast<double>(result.trials);
    result.funnel_index = detail::argmin_lowest(result.mean_frob_sq);
    return result;
}

inline FunnelResult funnel_layer(const GaussianMixtureSpec& spec, const RotationStackConfig& cfg,
                                 int datasets, int stacks_per_dataset, const SeededRng& rng,
                                 int workers = 1) {
    validate(cfg);
    return funnel_layer_with(
        spec, cfg.depth,
        [&cfg](const std::vector<double>& target, SeededRng& stack_rng) {
            return build_rotation_stack(cfg, target, stack_rng);
        },
        datasets, stacks_per_dataset, rng, workers);
}

// ---- Generalization error of the mean-matching classifier ----
//
// Loss (y - tanh(w.x))^2; under either label the score w.X is the same 1-D
// Gaussian up to sign, so the population risk reduces to a single Gaussian
// expectation.

inline const GaussHermiteRule& gauss_hermite_64() {
    static const GaussHermiteRule rule = gauss_hermite(64);
    return rule;
}

inline double empirical_risk(const std::vector<double>& w, const Dataset& data) {
    int d0 = data.features.cols();
    double acc = 0.0;
    for (long i = 0; i < data.size(); ++i) {
        double score = 0.0;
        for (int j = 0; j < d0; ++j) score += w[j] * data.features(static_cast<int>(i), j);
        double r = data.labels[i] - std::tanh(score);
        acc += r * r;
    }
    return acc / static_cast<double>(data.size());
}

inline double population_risk_quadrature(const std::vector<double>& w,
                                         const GaussianMixtureSpec& spec) {
    double mean = 0.0;
    for (int j = 0; j < spec.dim(); ++j) mean += w[j] * spec.mu0[j];
    double sd = spec.sigma0 * detail::norm2(w);
    return gauss_hermite_mean(gauss_hermite_64(), mean, sd, [](double s) {
        double r = 1.0 - std::tanh(s);
        return r * r;
    });
}

struct MonteCarloRisk {
    double mean = 0.0;
    double std_error = 0.0;
};

inline MonteCarloRisk population_risk_monte_carlo(const std::vector<double>& w,
                                                  const GaussianMixtureSpec& spec, long n_test,
                                                  SeededRng& rng) {
    if (n_test < 2) throw DomainError("population risk: n_test must be >= 2");
    double sum = 0.0, sum_sq = 0.0;
    for (long t = 0; t < n_test; ++t) {
        int y = rng.sign();
        double score = 0.0;
        for (int j = 0; j < spec.dim(); ++j)
            score += w[j] * (y * spec.mu0[j] + spec.sigma0 * rng.normal());
        double r = y - std::tanh(score);
        double loss = r * r;
        sum += loss;
        sum_sq += loss * loss;
    }
    MonteCarloRisk out;
    out.mean = sum / static_cast<double>(n_test);
    double var = (sum_sq - sum * sum / static_cast<double>(n_test)) / static_cast<double>(n_test - 1);
    out.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(n_test));
    return out;
}

enum class RiskMode { quadrature, monte_carlo };

using Trainer = std::function<std::vector<double>(const Dataset&)>;

struct GenErrorEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    long datasets = 0;
};

/// Sample mean over dataset draws of population risk minus empirical risk
/// for the trained classifier. Quadrature mode computes the population term
/// exactly; monte_carlo mode estimates it from n_test fresh samples.
inline GenErrorEstimate empirical_gen_error(const GaussianMixtureSpec& spec, const Trainer& trainer,
                                            long datasets, const SeededRng& rng, RiskMode mode,
                                            long n_test = 0, int workers = 1) {
    validate(spec);
    if (datasets < 2) throw DomainError("empirical_gen_error: need at least 2 dataset draws");

    std::vector<double> gaps(datasets, 0.0);
    for_each_index(datasets, workers, [&](long t) {
        SeededRng trial_rng = rng.child(static_cast<std::uint64_t>(t));
        Dataset data = sample_dataset(spec, trial_rng);
        std::vector<double> w = trainer(data);
        double pop;
        if (mode == RiskMode::quadrature) {
            pop = population_risk_quadrature(w, spec);
        } else {
            SeededRng test_rng = trial_rng.child(0);
            pop = population_risk_monte_carlo(w, spec, n_test, test_rng).mean;
        }
        gaps[t] = pop - empirical_risk(w, data);
    });

    GenErrorEstimate out;
    out.datasets = datasets;
    for (double g : gaps) out.estimate += g;
    out.estimate /= static_cast<double>(datasets);
    double ss = 0.0;
    for (double g : gaps) ss += (g - out.estimate) * (g - out.estimate);
    out.std_error = std::sqrt(ss / static_cast<double>(datasets - 1) / static_cast<double>(datasets));
    return out;
}

}  // namespace genbound
