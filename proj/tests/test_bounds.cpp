#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "genbound/bounds.hpp"
#include "genbound/rng.hpp"

using namespace genbound;

TEST(ContractionBound, ZeroAndIdentityCoefficients) {
    MutualInfoInputs mi;
    mi.mi_x_given_y = {1.0, 2.0};
    mi.mi_y = {0.0, 0.0};
    mi.sigma = 1.0;
    EXPECT_DOUBLE_EQ(contraction_bound(mi, 0.0), 0.0);

    mi.mi_y = {0.3, 0.5};
    double untightened = 0.0;
    for (int i = 0; i < 2; ++i)
        untightened += std::sqrt(mi.mi_x_given_y[i] + mi.mi_y[i]);
    untightened *= mi.sigma * std::sqrt(2.0) / 2.0;
    EXPECT_DOUBLE_EQ(contraction_bound(mi, 1.0), untightened);
}

TEST(ContractionBound, SingleSampleValue) {
    MutualInfoInputs mi;
    mi.mi_x_given_y = {1.0};
    mi.mi_y = {0.1};
    mi.sigma = 0.5;
    EXPECT_NEAR(contraction_bound(mi, 0.5), 0.54772255750516611, 1e-15);
}

TEST(ContractionBound, DomainChecks) {
    MutualInfoInputs mi;
    mi.mi_x_given_y = {1.0};
    mi.mi_y = {0.1};
    EXPECT_THROW(contraction_bound(mi, 1.5), DomainError);
    EXPECT_THROW(contraction_bound(mi, -0.1), DomainError);
    mi.mi_y = {2.0};  // exceeds log(2)
    EXPECT_THROW(contraction_bound(mi, 0.5), DomainError);
    mi.mi_y = {};
    EXPECT_THROW(contraction_bound(mi, 0.5), DomainError);
}

TEST(ContractionBound, MonotoneInEveryInput) {
    SeededRng rng(17, 0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng.next_u32() % 5);
        MutualInfoInputs mi;
        mi.label_count = 4;
        mi.sigma = 0.5 + rng.uniform();
        for (int i = 0; i < n; ++i) {
            mi.mi_x_given_y.push_back(2.0 * rng.uniform());
            mi.mi_y.push_back(rng.uniform() * std::log(4.0));
        }
        double eta = rng.uniform();
        double base = contraction_bound(mi, eta);

        MutualInfoInputs bumped = mi;
        int idx = static_cast<int>(rng.next_u32() % static_cast<unsigned>(n));
        bumped.mi_x_given_y[idx] += 0.25;
        EXPECT_GE(contraction_bound(bumped, eta), base);

        bumped = mi;
        bumped.mi_y[idx] = std::min(bumped.mi_y[idx] + 0.1, std::log(4.0));
        EXPECT_GE(contraction_bound(bumped, eta), base);

        EXPECT_GE(contraction_bound(mi, std::min(1.0, eta + 0.1)), base);
    }
}

TEST(DiscreteLatentBound, CaseStudyValue) {
    EXPECT_NEAR(discrete_latent_bound({0.5, 2, 0.25, 2}), 1.1774100225154747, 1e-15);
}

TEST(DiscreteLatentBound, VanishesAsMassApproachesUniform) {
    // K^2/t_bar -> 1 drives the logarithm to zero; reachable inside the
    // t_bar domain only for a single label, where t_bar can approach 1.
    double b = discrete_latent_bound({1.0, 1, 1.0 - 1e-9, 1});
    EXPECT_LT(b, 1e-3);
}

TEST(DiscreteLatentBound, DoublingLabelsAddsTwoLogTwoUnderRoot) {
    double sigma = 0.7, t_bar = 0.01;
    double b2 = discrete_latent_bound({sigma, 2, t_bar, 3});
    double b4 = discrete_latent_bound({sigma, 4, t_bar, 3});
    EXPECT_GT(b4, b2);
    EXPECT_NEAR(b4 * b4 - b2 * b2, 2.0 * sigma * sigma * 2.0 * std::log(2.0), 1e-12);
}

TEST(DiscreteLatentBound, DomainChecks) {
    EXPECT_THROW(discrete_latent_bound({0.5, 2, 0.3, 2}), DomainError);   // above 1/(latent*K)
    EXPECT_THROW(discrete_latent_bound({0.5, 2, 0.0, 2}), DomainError);
    EXPECT_THROW(discrete_latent_bound({-1.0, 2, 0.1, 2}), DomainError);
}

TEST(MiubDropout, EndpointValues) {
    MiubInputs in{3, {0.0, 0.4, 0.9, 1.0}};
    EXPECT_DOUBLE_EQ(miub_dropout(in, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(miub_dropout(in, 0.0), 1.0);
}

TEST(MiubDropout, LinearLevelsDecayLinearly) {
    double alpha = 0.37;
    int d0 = 8;
    MiubInputs in{d0, {}};
    for (int k = 0; k <= d0; ++k) in.i_k.push_back(alpha * k);
    for (double delta : {0.0, 0.1, 0.45, 0.8, 1.0})
        EXPECT_NEAR(miub_dropout(in, delta), alpha * d0 * (1.0 - delta), 1e-12);
}

TEST(MiubDropout, NonincreasingOnGrid) {
    SeededRng rng(21, 3);
    for (int trial = 0; trial < 20; ++trial) {
        int d0 = 1 + static_cast<int>(rng.next_u32() % 10);
        MiubInputs in{d0, {0.0}};
        for (int k = 1; k <= d0; ++k) in.i_k.push_back(in.i_k.back() + rng.uniform());
        double prev = miub_dropout(in, 0.0);
        for (int g = 1; g <= 100; ++g) {
            double cur = miub_dropout(in, g / 100.0);
            EXPECT_LE(cur, prev + 1e-12 * (1.0 + std::abs(prev)));
            prev = cur;
        }
    }
}

TEST(MiubDropout, InputValidation) {
    EXPECT_THROW(miub_dropout({2, {0.1, 0.2, 0.3}}, 0.5), DomainError);   // i_k[0] != 0
    EXPECT_THROW(miub_dropout({2, {0.0, 0.5, 0.2}}, 0.5), DomainError);   // decreasing
    EXPECT_THROW(miub_dropout({2, {0.0, 0.5}}, 0.5), DomainError);        // wrong length
    EXPECT_THROW(miub_dropout({2, {0.0, 0.1, 0.2}}, 1.5), DomainError);
}

TEST(GibbsBound, EndpointAndExampleValues) {
    EXPECT_DOUBLE_EQ(gibbs_bound({2.0, 0.0, 50, 0.3}), 2.0 / 200.0);
    EXPECT_DOUBLE_EQ(gibbs_bound({2.0, 1.0, 50, 0.0}), 0.0);
    EXPECT_NEAR(gibbs_bound({1.0, 0.5, 100, 0.25}), 0.0019764235376052371, 1e-17);
}

TEST(GibbsBound, CeilingAndScaling) {
    SeededRng rng(8, 8);
    for (int trial = 0; trial < 100; ++trial) {
        GibbsSpec spec{0.1 + 3.0 * rng.uniform(), rng.uniform(), 10 + static_cast<long>(rng.next_u32() % 1000),
                       rng.uniform()};
        EXPECT_LE(gibbs_bound(spec), spec.alpha / (4.0 * spec.n) + 1e-18);
    }
    // O(1/n): bound*n is constant across n.
    double ref = gibbs_bound({1.3, 0.7, 100, 0.4}) * 100.0;
    for (long n : {1000L, 10000L}) {
        double v = gibbs_bound({1.3, 0.7, n, 0.4}) * static_cast<double>(n);
        EXPECT_NEAR(v, ref, 1e-15 * std::abs(ref));
    }
}

TEST(GibbsBound, ShrinksWithStrongerContraction) {
    // For gamma > 0 the bound falls monotonically as the coefficient
    // product shrinks toward 0.
    double prev = gibbs_bound({1.0, 0.6, 100, 1.0});
    for (double eta : {0.8, 0.5, 0.2, 0.0}) {
        double cur = gibbs_bound({1.0, 0.6, 100, eta});
        EXPECT_LT(cur, prev);
        prev = cur;
    }
}

TEST(GibbsBound, GammaFreeWorstCase) {
    EXPECT_DOUBLE_EQ(gibbs_bound_gamma_free(1.0, 100, 0.25), 1.0 / 400.0);
    EXPECT_DOUBLE_EQ(gibbs_bound_gamma_free(1.0, 100, 1.0), 1.0 / 400.0);
}

TEST(FiniteParamMiUb, Values) {
    EXPECT_NEAR(finite_param_mi_ub({{10, 20, 2}, 2}), 166.35532333438687, 1e-12);
    EXPECT_NEAR(finite_param_mi_ub({{10, 1, 20, 2}, 2}), 48.520302639196172, 1e-12);
    EXPECT_DOUBLE_EQ(detail::finite_param_mi_ub_raw({10, 20, 2}, 1), 0.0);  // singleton limit
    EXPECT_THROW(finite_param_mi_ub({{10, 20, 2}, 1}), DomainError);
    EXPECT_THROW(finite_param_mi_ub({{10, 0, 2}, 2}), DomainError);
}

TEST(FiniteParamMiUb, SplitSweepMinimizedAtAnEndpoint) {
    int argmin = 1;
    double best = finite_param_mi_ub({{10, 1, 29, 2}, 2});
    for (int d = 2; d <= 29; ++d) {
        double v = finite_param_mi_ub({{10, d, 30 - d, 2}, 2});
        if (v < best) {
            best = v;
            argmin = d;
        }
    }
    EXPECT_TRUE(argmin == 1 || argmin == 29);
}

TEST(FiniteParamMiUb, NarrowAddedLayerShrinksTightenedBound) {
    double delta = 0.5;
    auto tightened = [&](const std::vector<int>& dims) {
        double eta = 1.0;
        for (std::size_t l = 0; l + 1 < dims.size(); ++l)
            eta *= 1.0 - std::pow(delta, dims[l]);
        return std::sqrt(eta * finite_param_mi_ub({dims, 2}));
    };
    EXPECT_LT(tightened({10, 1, 20, 2}), tightened({10, 20, 2}));
}

TEST(KlVsWasserstein, CaseStudyConstantsAreInconclusive) {
    EXPECT_EQ(kl_vs_wasserstein_flag(4.0 * std::sqrt(2.0), 2, 4.0),
              ComparatorVerdict::inconclusive);
}

TEST(KlVsWasserstein, SmallLipschitzConstantFavorsWasserstein) {
    EXPECT_EQ(kl_vs_wasserstein_flag(0.1, 2, 4.0), ComparatorVerdict::wasserstein_tighter);
}

TEST(KlVsWasserstein, BoundaryIsInclusive) {
    EXPECT_EQ(kl_vs_wasserstein_flag(1.0, 2, 4.0), ComparatorVerdict::wasserstein_tighter);
    EXPECT_THROW(kl_vs_wasserstein_flag(0.0, 2, 4.0), DomainError);
    EXPECT_THROW(kl_vs_wasserstein_flag(1.0, 2, 0.0), DomainError);
}
