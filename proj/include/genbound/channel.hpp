#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "genbound/errors.hpp"

namespace genbound {

/// Discrete memoryless channel: row-stochastic matrix of conditional
/// probabilities, rows indexed by input symbol.
class FiniteChannel {
  public:
    FiniteChannel(int in_size, int out_size, std::vector<double> probs)
        : in_size_(in_size), out_size_(out_size), p_(std::move(probs)) {
        if (in_size < 1 || out_size < 1) throw DomainError("channel: alphabets must be nonempty");
        if (p_.size() != static_cast<std::size_t>(in_size) * out_size)
            throw ShapeMismatch("channel: probability matrix size mismatch");
        for (int x = 0; x < in_size_; ++x) {
            double row_sum = 0.0;
            for (int y = 0; y < out_size_; ++y) {
                double v = prob(x, y);
                if (v < 0.0 || v > 1.0) throw DomainError("channel: probabilities must be in [0,1]");
                row_sum += v;
            }
            if (std::abs(row_sum - 1.0) > 1e-12)
                throw DomainError("channel: row " + std::to_string(x) + " does not sum to 1");
        }
    }

    int input_size() const { return in_size_; }
    int output_size() const { return out_size_; }
    double prob(int x, int y) const { return p_[static_cast<std::size_t>(x) * out_size_ + y]; }

    static FiniteChannel identity(int k) {
        std::vector<double> p(static_cast<std::size_t>(k) * k, 0.0);
        for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i) * k + i] = 1.0;
        return FiniteChannel(k, k, std::move(p));
    }

    // Two nonzero inputs, each erased to a shared 0 symbol with probability delta.
    static FiniteChannel binary_erasure(double delta) {
        return FiniteChannel(2, 3,
                             {1.0 - delta, 0.0, delta,
                              0.0, 1.0 - delta, delta});
    }

    // Inputs {nonzero, 0}: the nonzero symbol decays to 0 with probability delta.
    static FiniteChannel z_channel(double delta) {
        return FiniteChannel(2, 2,
                             {1.0 - delta, delta,
                              0.0, 1.0});
    }

    static FiniteChannel binary_symmetric(double p) {
        return FiniteChannel(2, 2, {1.0 - p, p, p, 1.0 - p});
    }

    /// Coordinatewise dropout acting on two input vectors `a` and `b`:
    /// every nonzero coordinate is independently zeroed with the matching
    /// delta. The output alphabet is the set of reachable masked vectors.
    static FiniteChannel dropout_product(const std::vector<double>& deltas,
                                         const std::vector<double>& a,
                                         const std::vector<double>& b) {
        int width = static_cast<int>(deltas.size());
        if (width < 1 || a.size() != deltas.size() || b.size() != deltas.size())
            throw ShapeMismatch("dropout_product: deltas and inputs must share length");
        for (double d : deltas)
            if (!(d > 0.0 && d < 1.0))
                throw DomainError("dropout_product: deltas must be in (0,1)");
        if (width > 6) throw DomainError("dropout_product: width capped at 6");

        std::map<std::vector<double>, int> symbol_of;
        std::vector<std::pair<std::vector<double>, double>> outcomes;  // reused per input
        auto enumerate = [&](const std::vector<double>& v) {
            outcomes.clear();
            for (unsigned mask = 0; mask < (1u << width); ++mask) {
                std::vector<double> out(v);
                double p = 1.0;
                bool feasible = true;
                for (int i = 0; i < width; ++i) {
                    if (mask & (1u << i)) {
                        if (v[i] == 0.0) {  // zero coordinates never toggle
                            feasible = false;
                            break;
                        }
                        out[i] = 0.0;
                        p *= deltas[i];
                    } else if (v[i] != 0.0) {
                        p *= 1.0 - deltas[i];
                    }
                }
                if (!feasible) continue;
                outcomes.emplace_back(std::move(out), p);
                symbol_of.emplace(outcomes.back().first, 0);
            }
        };
        enumerate(a);
        enumerate(b);
        int next_id = 0;
        for (auto& kv : symbol_of) kv.second = next_id++;

        int out_size = next_id;
        std::vector<double> probs(2u * out_size, 0.0);
        int row = 0;
        for (const std::vector<double>* v : {&a, &b}) {
            enumerate(*v);
            for (const auto& [sym, p] : outcomes)
                probs[static_cast<std::size_t>(row) * out_size + symbol_of.at(sym)] += p;
            ++row;
        }
        return FiniteChannel(2, out_size, std::move(probs));
    }

    /// Convenience: `width`-fold dropout channel with common delta acting on
    /// two all-distinct nonzero inputs. Width capped at 2 so the oracle's
    /// pair enumeration stays trivial.
    static FiniteChannel dropout_product(double delta, int width) {
        if (width < 1 || width > 2) throw DomainError("dropout_product: width must be 1 or 2");
        std::vector<double> deltas(width, delta);
        std::vector<double> a, b;
        for (int i = 0; i < width; ++i) {
            a.push_back(i + 1.0);
            b.push_back(width + i + 1.0);
        }
        return dropout_product(deltas, a, b);
    }

  private:
    int in_size_;
    int out_size_;
    std::vector<double> p_;
};

namespace detail {

inline double kl_bernoulli(double alpha, double beta) {
    return alpha * std::log(alpha / beta) + (1.0 - alpha) * std::log((1.0 - alpha) / (1.0 - beta));
}

}  // namespace detail

/// Grid search for the KL contraction coefficient. Inputs are restricted to
/// pairs of channel symbols carrying Bernoulli weights (alpha, beta) on a
/// lattice of the given resolution; near-equal (alpha, beta) are excluded to
/// avoid 0/0 and the alpha -> beta limit is probed separately on the
/// symmetric direction around 1/2. The result converges to the coefficient
/// from below as the grid grows.
inline double eta_kl_bruteforce(const FiniteChannel& ch, int grid) {
    if (ch.input_size() > 64 || ch.output_size() > 64)
        throw AlphabetTooLarge("eta_kl_bruteforce: alphabets capped at 64 symbols");
    if (grid < 100) throw DomainError("eta_kl_bruteforce: grid must be >= 100");

    const int out = ch.output_size();
    std::vector<double> lattice(grid - 1), log_lat(grid - 1), log_one_minus(grid - 1);
    for (int i = 1; i < grid; ++i) {
        double v = static_cast<double>(i) / grid;
        lattice[i - 1] = v;
        log_lat[i - 1] = std::log(v);
        log_one_minus[i - 1] = std::log(1.0 - v);
    }

    double best = 0.0;
    std::vector<double> mix_p(out), log_mix_q(static_cast<std::size_t>(grid - 1) * out);
    for (int t = 0; t < ch.input_size(); ++t) {
        for (int u = t + 1; u < ch.input_size(); ++u) {
            auto ratio_at = [&](double alpha, double beta) {
                double kl_in = detail::kl_bernoulli(alpha, beta);
                double kl_out = 0.0;
                for (int y = 0; y < out; ++y) {
                    double p = alpha * ch.prob(t, y) + (1.0 - alpha) * ch.prob(u, y);
                    double q = beta * ch.prob(t, y) + (1.0 - beta) * ch.prob(u, y);
                    if (p > 0.0) kl_out += p * std::log(p / q);
                }
                return kl_out / kl_in;
            };

            // Precompute log of each beta-mixture row.
            for (int j = 0; j < grid - 1; ++j) {
                double beta = lattice[j];
                for (int y = 0; y < out; ++y) {
                    double q = beta * ch.prob(t, y) + (1.0 - beta) * ch.prob(u, y);
                    log_mix_q[static_cast<std::size_t>(j) * out + y] =
                        q > 0.0 ? std::log(q) : -std::numeric_limits<double>::infinity();
                }
            }

            for (int i = 0; i < grid - 1; ++i) {
                double alpha = lattice[i];
                double log_p_sum = 0.0;
                for (int y = 0; y < out; ++y) {
                    double p = alpha * ch.prob(t, y) + (1.0 - alpha) * ch.prob(u, y);
                    mix_p[y] = p;
                    if (p > 0.0) log_p_sum += p * std::log(p);
                }
                for (int j = 0; j < grid - 1; ++j) {
                    if (std::abs(lattice[i] - lattice[j]) < 1e-6) continue;
                    double kl_in = lattice[i] * (log_lat[i] - log_lat[j]) +
                                   (1.0 - lattice[i]) * (log_one_minus[i] - log_one_minus[j]);
                    double kl_out = log_p_sum;
                    const double* lq = &log_mix_q[static_cast<std::size_t>(j) * out];
                    for (int y = 0; y < out; ++y)
                        if (mix_p[y] > 0.0) kl_out -= mix_p[y] * lq[y];
                    double r = kl_out / kl_in;
                    if (r > best) best = r;
                }
            }

            // Symmetric probes finer than the lattice.
            for (double h : {0.5 / grid, 0.125 / grid}) {
                if (2.0 * h < 1e-6) continue;
                double r = ratio_at(0.5 + h, 0.5 - h);
                if (r > best) best = r;
            }
        }
    }
    return best;
}

/// Half the largest squared Hellinger distance between output rows; a lower
/// bound on the KL contraction coefficient.
inline double hellinger_eta_lower_bound(const FiniteChannel& ch) {
    double best = 0.0;
    for (int t = 0; t < ch.input_size(); ++t) {
        for (int u = t + 1; u < ch.input_size(); ++u) {
            double h2 = 0.0;
            for (int y = 0; y < ch.output_size(); ++y) {
                double d = std::sqrt(ch.prob(t, y)) - std::sqrt(ch.prob(u, y));
                h2 += d * d;
            }
            best = std::max(best, 0.5 * h2);
        }
    }
    return best;
}

}  // namespace genbound
