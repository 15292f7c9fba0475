#include <gtest/gtest.h>

#include <cmath>

#include "genbound/experiments.hpp"

using namespace genbound;

namespace {

double real_cell(const ReportRow& row, const std::string& key) {
    for (const auto& [k, v] : row.cells)
        if (k == key) return std::get<double>(v);
    throw std::out_of_range(key);
}

long long int_cell(const ReportRow& row, const std::string& key) {
    for (const auto& [k, v] : row.cells)
        if (k == key) return std::get<long long>(v);
    throw std::out_of_range(key);
}

}  // namespace

TEST(Config, UnknownAndMalformedFieldsAreNamed) {
    try {
        parse_experiment_config({{"bogus", 1}}, ExperimentKind::table1);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "bogus");
    }
    try {
        parse_experiment_config({{"dims", {10, 0, 2}}}, ExperimentKind::sdpi_table);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "dims");
    }
    try {
        parse_experiment_config({{"kind", "table1"}}, ExperimentKind::sdpi_table);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "kind");
    }
    EXPECT_THROW(parse_experiment_config({{"fraction", 1.0}}, ExperimentKind::table1), ConfigError);
    EXPECT_THROW(parse_experiment_config({{"format", "xml"}}, ExperimentKind::table1), ConfigError);
}

TEST(Config, SeedRequiredForRandomizedKinds) {
    ExperimentConfig cfg = parse_experiment_config(nlohmann::json::object(), ExperimentKind::table1);
    cfg.datasets = 2;
    cfg.stacks_per_dataset = 2;
    try {
        run_experiment(cfg);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "seed");
    }
    ExperimentConfig sweep = parse_experiment_config(nlohmann::json::object(),
                                                     ExperimentKind::add_layer_sweep);
    EXPECT_NO_THROW(run_experiment(sweep));  // deterministic kinds run seedless
}

TEST(DepthSweep, DropoutPanelShape) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::add_layer_sweep;
    ExperimentReport report = run_depth_sweep(cfg);
    ASSERT_EQ(report.rows.size(), 31u);  // baseline + d* in [1,30]

    double baseline = real_cell(report.rows[0], "bound");
    double first = real_cell(report.rows[1], "bound");
    EXPECT_LT(first, baseline);
    for (std::size_t r = 2; r < report.rows.size(); ++r)
        EXPECT_GT(real_cell(report.rows[r], "bound"), real_cell(report.rows[r - 1], "bound"));

    // Spot-check the d*=1 row against hand arithmetic.
    double eta = (1.0 - std::pow(0.5, 10)) * (1.0 - 0.5) * (1.0 - std::pow(0.5, 20));
    EXPECT_NEAR(real_cell(report.rows[1], "eta_product"), eta, 1e-12);
    EXPECT_NEAR(real_cell(report.rows[1], "mi_ub"), 70.0 * std::log(2.0), 1e-10);
}

TEST(DepthSweep, NoisePanelShape) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::add_layer_sweep;
    cfg.reg = "noise";
    ExperimentReport report = run_depth_sweep(cfg);
    double baseline = real_cell(report.rows[0], "bound");
    EXPECT_LT(real_cell(report.rows[1], "bound"), baseline);
    for (std::size_t r = 2; r < report.rows.size(); ++r)
        EXPECT_GT(real_cell(report.rows[r], "bound"), real_cell(report.rows[r - 1], "bound"));
}

TEST(DepthSweep, SplitPanelEndpoints) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::split_layer_sweep;
    ExperimentReport report = run_depth_sweep(cfg);
    ASSERT_EQ(report.rows.size(), 30u);  // baseline + d in [1,29]
    EXPECT_NEAR(real_cell(report.rows[1], "mi_ub"), 97.0 * std::log(2.0), 1e-10);
    EXPECT_NEAR(real_cell(report.rows[29], "mi_ub"), 321.0 * std::log(2.0), 1e-10);
}

TEST(SdpiTable, DefaultDropoutNetwork) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::sdpi_table;
    ExperimentReport report = run_sdpi_table(cfg);
    // Two dropout sites, product, approximation and its gap.
    ASSERT_EQ(report.rows.size(), 5u);
    EXPECT_EQ(std::get<std::string>(report.rows[0].cells[1].second), "dropout");
    EXPECT_EQ(std::get<std::string>(report.rows[2].cells[1].second), "eta_product");
    EXPECT_EQ(std::get<std::string>(report.rows[3].cells[1].second), "eta_product_approx");
}

TEST(SdpiTable, MixedSitesSkipApproximation) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::sdpi_table;
    cfg.dims = {4, 3, 2};
    cfg.regs = {{0, "dropout", 0.5, 0, 0}, {1, "dropconnect", 0.5, 0, 0}, {2, "noise", 0, 1.0, 1.0}};
    ExperimentReport report = run_sdpi_table(cfg);
    ASSERT_EQ(report.rows.size(), 4u);  // three sites + product, no approx rows
    EXPECT_EQ(std::get<std::string>(report.rows[1].cells[3].second), "upper_bound");
    EXPECT_THROW(
        [&] {
            ExperimentConfig bad = cfg;
            bad.regs[0].layer = 5;  // site index out of range
            run_sdpi_table(bad);
        }(),
        ConfigError);
    EXPECT_THROW(
        [&] {
            ExperimentConfig bad = cfg;
            bad.regs[2].layer = 0;  // noise site at the input layer
            run_sdpi_table(bad);
        }(),
        ConfigError);
}

TEST(Table1, SmallConfigurationRuns) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::table1;
    cfg.depth = 6;
    cfg.l_prime = {2};
    cfg.datasets = 5;
    cfg.stacks_per_dataset = 5;
    cfg.has_seed = true;
    cfg.seed = 7;
    ExperimentReport report = run_experiment(cfg);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(int_cell(report.rows[0], "l_prime"), 2);
    long long l_star = int_cell(report.rows[0], "l_star");
    EXPECT_GE(l_star, 0);
    EXPECT_LE(l_star, 6);
    ASSERT_EQ(report.header.size(), 2u + 7u);
}

TEST(Table1, EarlyFunnelWithLargeFractionStillProducesARow) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::table1;
    cfg.l_prime = {1};
    cfg.fraction = 0.9;
    cfg.datasets = 5;
    cfg.stacks_per_dataset = 5;
    cfg.has_seed = true;
    cfg.seed = 19;
    ExperimentReport report = run_experiment(cfg);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(int_cell(report.rows[0], "l_prime"), 1);
    long long l_star = int_cell(report.rows[0], "l_star");
    EXPECT_GE(l_star, 0);
    EXPECT_LE(l_star, 10);
}

TEST(BoundProfile, DeterministicAndMonotone) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::bound_profile;
    cfg.datasets = 4;
    cfg.stacks_per_dataset = 3;
    cfg.has_seed = true;
    cfg.seed = 11;
    ExperimentReport a = run_experiment(cfg);
    ExperimentReport b = run_experiment(cfg);
    EXPECT_EQ(to_csv(a), to_csv(b));
    for (std::size_t r = 1; r < a.rows.size(); ++r)
        EXPECT_LE(real_cell(a.rows[r], "kl_bound"), real_cell(a.rows[r - 1], "kl_bound"));
}

TEST(GenBound, RowsCarryBothBounds) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::gen_bound;
    cfg.n_list = {20};
    cfg.gen_datasets = 50;
    cfg.has_seed = true;
    cfg.seed = 3;
    ExperimentReport report = run_experiment(cfg);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_GT(real_cell(report.rows[0], "kl_bound_last"), 0.0);
    EXPECT_GT(real_cell(report.rows[0], "w_bound_min"), 0.0);
    EXPECT_LT(std::abs(real_cell(report.rows[0], "estimate")), 1.0);
}
