#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "genbound/bounds.hpp"
#include "genbound/case_study.hpp"
#include "genbound/errors.hpp"
#include "genbound/report.hpp"
#include "genbound/sdpi.hpp"

namespace genbound {

enum class ExperimentKind {
    table1,
    add_layer_sweep,
    split_layer_sweep,
    bound_profile,
    sdpi_table,
    gen_bound,
};

inline const char* kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::table1: return "table1";
        case ExperimentKind::add_layer_sweep: return "add_layer_sweep";
        case ExperimentKind::split_layer_sweep: return "split_layer_sweep";
        case ExperimentKind::bound_profile: return "bound_profile";
        case ExperimentKind::sdpi_table: return "sdpi_table";
        case ExperimentKind::gen_bound: return "gen_bound";
    }
    return "?";
}

/// Scalar regularization descriptor for one network site.
struct RegDescriptor {
    int layer = 0;
    std::string type;  // dropout | dropconnect | noise
    double delta = 0.5;
    double eps = 1.0;
    double act_sup = 1.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::table1;

    // Case-study parameters.
    int depth = 10;
    long n = 100;
    std::vector<double> mu0 = {0.5, 0.0};
    double sigma0 = 1.0;
    double fraction = 0.2;
    std::vector<int> l_prime = {3, 5, 7};
    int datasets = 100;
    int stacks_per_dataset = 100;
    std::vector<long> n_list = {20, 100, 500};
    long gen_datasets = 500;

    // Depth/width sweep parameters.
    std::string reg = "dropout";  // dropout | noise
    double delta = 0.5;
    double eps = 1.0;
    double act_sup = 1.0;
    int levels = 2;  // parameter grid size B
    int label_count = 2;
    int d_star_min = 1;
    int d_star_max = 30;

    // Network description for the coefficient table.
    std::vector<int> dims;
    std::vector<RegDescriptor> regs;

    bool has_seed = false;
    std::uint64_t seed = 0;
    ReportFormat format = ReportFormat::csv;
    std::string out = "-";
};

// ---- Configuration parsing ----

namespace detail {

template <typename T>
T get_field(const nlohmann::json& j, const std::string& field) {
    try {
        return j.at(field).template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(field, e.what());
    }
}

inline void require(bool ok, const std::string& field, const std::string& msg) {
    if (!ok) throw ConfigError(field, msg);
}

}  // namespace detail

/// Parse and validate a JSON experiment configuration. Unknown fields and
/// kind mismatches are rejected; every error names the offending field.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j, ExperimentKind expected) {
    using detail::get_field;
    using detail::require;

    ExperimentConfig cfg;
    cfg.kind = expected;
    require(j.is_object(), "config", "configuration must be a JSON object");

    static const std::vector<std::string> known = {
        "kind", "depth", "n", "mu0", "sigma0", "fraction", "l_prime", "datasets",
        "stacks_per_dataset", "n_list", "gen_datasets", "reg", "delta", "eps", "act_sup",
        "levels", "label_count", "d_star_min", "d_star_max", "dims", "regularization",
        "seed", "format", "out"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const std::string& k : known) ok = ok || k == it.key();
        require(ok, it.key(), "unknown field");
    }

    if (j.contains("kind"))
        require(get_field<std::string>(j, "kind") == kind_name(expected), "kind",
                std::string("expected '") + kind_name(expected) + "'");

    if (j.contains("depth")) cfg.depth = get_field<int>(j, "depth");
    require(cfg.depth >= 2, "depth", "must be >= 2");
    if (j.contains("n")) cfg.n = get_field<long>(j, "n");
    require(cfg.n >= 2, "n", "must be >= 2");
    if (j.contains("mu0")) cfg.mu0 = get_field<std::vector<double>>(j, "mu0");
    require(!cfg.mu0.empty(), "mu0", "must be a nonempty array of reals");
    if (j.contains("sigma0")) cfg.sigma0 = get_field<double>(j, "sigma0");
    require(cfg.sigma0 > 0.0, "sigma0", "must be positive");
    if (j.contains("fraction")) cfg.fraction = get_field<double>(j, "fraction");
    require(cfg.fraction > 0.0 && cfg.fraction < 1.0, "fraction", "must be in (0,1)");
    if (j.contains("l_prime")) cfg.l_prime = get_field<std::vector<int>>(j, "l_prime");
    for (int l : cfg.l_prime)
        require(l >= 1 && l <= cfg.depth - 1, "l_prime", "entries must lie in [1, depth-1]");
    if (j.contains("datasets")) cfg.datasets = get_field<int>(j, "datasets");
    require(cfg.datasets >= 1, "datasets", "must be >= 1");
    if (j.contains("stacks_per_dataset"))
        cfg.stacks_per_dataset = get_field<int>(j, "stacks_per_dataset");
    require(cfg.stacks_per_dataset >= 1, "stacks_per_dataset", "must be >= 1");
    if (j.contains("n_list")) cfg.n_list = get_field<std::vector<long>>(j, "n_list");
    require(!cfg.n_list.empty(), "n_list", "must be nonempty");
    for (long v : cfg.n_list) require(v >= 2, "n_list", "entries must be >= 2");
    if (j.contains("gen_datasets")) cfg.gen_datasets = get_field<long>(j, "gen_datasets");
    require(cfg.gen_datasets >= 2, "gen_datasets", "must be >= 2");

    if (j.contains("reg")) cfg.reg = get_field<std::string>(j, "reg");
    require(cfg.reg == "dropout" || cfg.reg == "noise", "reg", "must be 'dropout' or 'noise'");
    if (j.contains("delta")) cfg.delta = get_field<double>(j, "delta");
    require(cfg.delta > 0.0 && cfg.delta < 1.0, "delta", "must be in (0,1)");
    if (j.contains("eps")) cfg.eps = get_field<double>(j, "eps");
    require(cfg.eps > 0.0, "eps", "must be positive");
    if (j.contains("act_sup")) cfg.act_sup = get_field<double>(j, "act_sup");
    require(cfg.act_sup > 0.0, "act_sup", "must be positive");
    if (j.contains("levels")) cfg.levels = get_field<int>(j, "levels");
    require(cfg.levels >= 2, "levels", "must be >= 2");
    if (j.contains("label_count")) cfg.label_count = get_field<int>(j, "label_count");
    require(cfg.label_count >= 2, "label_count", "must be >= 2");
    if (j.contains("d_star_min")) cfg.d_star_min = get_field<int>(j, "d_star_min");
    if (j.contains("d_star_max")) cfg.d_star_max = get_field<int>(j, "d_star_max");
    require(cfg.d_star_min >= 1 && cfg.d_star_min <= cfg.d_star_max, "d_star_min",
            "need 1 <= d_star_min <= d_star_max");

    if (j.contains("dims")) cfg.dims = get_field<std::vector<int>>(j, "dims");
    if (j.contains("dims")) {
        require(cfg.dims.size() >= 2, "dims", "need at least d0 and d1");
        for (int d : cfg.dims) require(d >= 1, "dims", "widths must be >= 1");
    }
    if (j.contains("regularization")) {
        const nlohmann::json& arr = j.at("regularization");
        require(arr.is_array(), "regularization", "must be an array of site descriptors");
        for (const nlohmann::json& item : arr) {
            RegDescriptor rd;
            rd.layer = detail::get_field<int>(item, "layer");
            rd.type = detail::get_field<std::string>(item, "type");
            require(rd.type == "dropout" || rd.type == "dropconnect" || rd.type == "noise",
                    "regularization.type", "must be dropout, dropconnect or noise");
            if (item.contains("delta")) rd.delta = detail::get_field<double>(item, "delta");
            if (item.contains("eps")) rd.eps = detail::get_field<double>(item, "eps");
            if (item.contains("act_sup")) rd.act_sup = detail::get_field<double>(item, "act_sup");
            cfg.regs.push_back(rd);
        }
    }

    if (j.contains("seed")) {
        cfg.seed = get_field<std::uint64_t>(j, "seed");
        cfg.has_seed = true;
    }
    if (j.contains("format")) {
        std::string f = get_field<std::string>(j, "format");
        require(f == "csv" || f == "json", "format", "must be 'csv' or 'json'");
        cfg.format = f == "csv" ? ReportFormat::csv : ReportFormat::json;
    }
    if (j.contains("out")) cfg.out = get_field<std::string>(j, "out");
    return cfg;
}

inline bool experiment_needs_seed(ExperimentKind kind) {
    return kind == ExperimentKind::table1 || kind == ExperimentKind::bound_profile ||
           kind == ExperimentKind::gen_bound;
}

// ---- Runners ----

namespace detail {

inline NetworkSpec sweep_network(const std::vector<int>& dims, const ExperimentConfig& cfg) {
    NetworkSpec net;
    net.dims = dims;
    net.label_count = cfg.label_count;
    net.regs.assign(dims.size(), NoReg{});
    int depth = net.depth();
    if (cfg.reg == "dropout") {
        for (int l = 0; l <= depth - 1; ++l) net.regs[l] = DropoutReg{cfg.delta, dims[l]};
    } else {
        for (int l = 1; l <= depth; ++l) net.regs[l] = GaussianNoiseReg{cfg.eps, cfg.act_sup, dims[l]};
    }
    return net;
}

inline ReportRow sweep_row(const std::string& key, int value, const std::vector<int>& dims,
                           const ExperimentConfig& cfg) {
    NetworkSpec net = sweep_network(dims, cfg);
    double eta = network_eta_product(net);
    double mi_ub = finite_param_mi_ub({dims, cfg.levels});
    double bound = std::sqrt(eta * mi_ub + std::log(static_cast<double>(cfg.label_count)));
    ReportRow row;
    row.add(key, value).add("eta_product", eta).add("mi_ub", mi_ub).add("bound", bound);
    return row;
}

}  // namespace detail

/// Funnel-layer table: one row per requested funnel_index with the located
/// funnel layer and the per-layer mean squared product norms.
inline ExperimentReport run_table1(const ExperimentConfig& cfg) {
    GaussianMixtureSpec spec{cfg.mu0, cfg.sigma0, cfg.n};
    if (spec.dim() != 2) throw ConfigError("mu0", "the rotation construction requires d0 = 2");

    ExperimentReport report;
    for (std::size_t idx = 0; idx < cfg.l_prime.size(); ++idx) {
        RotationStackConfig stack_cfg;
        stack_cfg.depth = cfg.depth;
        stack_cfg.funnel_index = cfg.l_prime[idx];
        stack_cfg.funnel_fraction = cfg.fraction;
        SeededRng rng(cfg.seed, static_cast<std::uint64_t>(idx));
        FunnelResult res =
            funnel_layer(spec, stack_cfg, cfg.datasets, cfg.stacks_per_dataset, rng);
        ReportRow row;
        row.add("l_prime", cfg.l_prime[idx]).add("l_star", res.funnel_index);
        for (std::size_t l = 0; l < res.mean_frob_sq.size(); ++l)
            row.add("mean_frob_sq_" + std::to_string(l), res.mean_frob_sq[l]);
        report.append(std::move(row));
    }
    return report;
}

/// Depth/width sweeps over finite-parameter networks. Row 0 is the
/// unmodified baseline; the sweep variable follows.
inline ExperimentReport run_depth_sweep(const ExperimentConfig& cfg) {
    std::vector<int> base = cfg.dims;
    if (base.empty())
        base = cfg.kind == ExperimentKind::add_layer_sweep ? std::vector<int>{10, 20, 2}
                                                           : std::vector<int>{10, 30, 2};
    if (base.size() != 3) throw ConfigError("dims", "sweeps expect a 2-layer baseline d0,d1,d2");

    ExperimentReport report;
    if (cfg.kind == ExperimentKind::add_layer_sweep) {
        report.append(detail::sweep_row("d_star", 0, base, cfg));
        for (int d = cfg.d_star_min; d <= cfg.d_star_max; ++d)
            report.append(detail::sweep_row("d_star", d, {base[0], d, base[1], base[2]}, cfg));
    } else {
        report.append(detail::sweep_row("d_split", 0, base, cfg));
        for (int d = 1; d <= base[1] - 1; ++d)
            report.append(detail::sweep_row("d_split", d, {base[0], d, base[1] - d, base[2]}, cfg));
    }
    return report;
}

/// Contraction coefficient table for one described network: per-site rows,
/// the coefficient product, and for dropout-only networks the exponential
/// approximation and its relative gap.
inline ExperimentReport run_sdpi_table(const ExperimentConfig& cfg) {
    std::vector<int> dims = cfg.dims.empty() ? std::vector<int>{10, 20, 2} : cfg.dims;
    NetworkSpec net;
    net.dims = dims;
    net.label_count = cfg.label_count;
    net.regs.assign(dims.size(), NoReg{});
    if (cfg.regs.empty()) {
        net = detail::sweep_network(dims, cfg);
    }
    for (const RegDescriptor& rd : cfg.regs) {
        if (rd.layer < 0 || rd.layer >= static_cast<int>(dims.size()))
            throw ConfigError("regularization.layer", "site index out of range");
        if (rd.type == "dropout") {
            net.regs[rd.layer] = DropoutReg{rd.delta, dims[rd.layer]};
        } else if (rd.type == "dropconnect") {
            if (rd.layer < 1) throw ConfigError("regularization.layer", "dropconnect sites start at 1");
            std::size_t count =
                static_cast<std::size_t>(dims[rd.layer]) * dims[rd.layer - 1];
            net.regs[rd.layer] = DropConnectReg{MatrixR(
                dims[rd.layer], dims[rd.layer - 1], std::vector<double>(count, rd.delta))};
        } else {
            net.regs[rd.layer] = GaussianNoiseReg{rd.eps, rd.act_sup, dims[rd.layer]};
        }
    }

    std::vector<EtaTerm> terms;
    try {
        terms = network_eta_terms(net);
    } catch (const DomainError& e) {
        throw ConfigError("regularization", e.what());
    } catch (const ShapeMismatch& e) {
        throw ConfigError("regularization", e.what());
    }

    ExperimentReport report;
    bool all_exact = true;
    bool dropout_only = true;
    double product = 1.0;
    for (const EtaTerm& t : terms) {
        ReportRow row;
        row.add("site", std::to_string(t.site))
            .add("channel", t.channel)
            .add("eta", t.value)
            .add("exactness", t.exactness == EtaExactness::exact ? "exact" : "upper_bound");
        report.append(std::move(row));
        product *= t.value;
        all_exact = all_exact && t.exactness == EtaExactness::exact;
        dropout_only = dropout_only && t.channel == "dropout";
    }
    ReportRow prod_row;
    prod_row.add("site", "all")
        .add("channel", "eta_product")
        .add("eta", product)
        .add("exactness", all_exact ? "exact" : "upper_bound");
    report.append(std::move(prod_row));
    if (dropout_only) {
        double approx = eta_product_approx(net);
        double gap = product != 0.0 ? std::abs(approx - product) / product : std::abs(approx);
        ReportRow a;
        a.add("site", "all").add("channel", "eta_product_approx").add("eta", approx).add("exactness",
                                                                                         "approximation");
        report.append(std::move(a));
        ReportRow g;
        g.add("site", "all").add("channel", "approx_rel_gap").add("eta", gap).add("exactness",
                                                                                  "approximation");
        report.append(std::move(g));
    }
    return report;
}

/// Per-layer bound profiles for the rotation-stack case study.
inline ExperimentReport run_bound_profile(const ExperimentConfig& cfg) {
    GaussianMixtureSpec spec{cfg.mu0, cfg.sigma0, cfg.n};
    if (spec.dim() != 2) throw ConfigError("mu0", "the rotation construction requires d0 = 2");
    RotationStackConfig stack_cfg;
    stack_cfg.depth = cfg.depth;
    stack_cfg.funnel_index = cfg.l_prime.empty() ? 3 : cfg.l_prime.front();
    stack_cfg.funnel_fraction = cfg.fraction;
    validate(stack_cfg);

    SeededRng rng(cfg.seed, 0);
    std::vector<WeightStack> stacks;
    stacks.reserve(static_cast<std::size_t>(cfg.datasets) * cfg.stacks_per_dataset);
    for (int d = 0; d < cfg.datasets; ++d) {
        SeededRng data_rng = rng.child(static_cast<std::uint64_t>(d));
        Dataset data = sample_dataset(spec, data_rng);
        std::vector<double> target = fit_mean_classifier(data);
        for (int k = 0; k < cfg.stacks_per_dataset; ++k) {
            SeededRng stack_rng = data_rng.child(static_cast<std::uint64_t>(k) + 1);
            stacks.push_back(build_rotation_stack(stack_cfg, target, stack_rng));
        }
    }

    BoundProfile kl = kl_bound_profile(spec, stacks);
    BoundProfile wass = wasserstein_bound_profile(spec, stacks);
    kl.seed = wass.seed = cfg.seed;

    ExperimentReport report;
    for (std::size_t l = 0; l < kl.values.size(); ++l) {
        double mean_rank = 0.0, mean_frob_sq = 0.0;
        for (const WeightStack& st : stacks) {
            mean_rank += st.ranks[l];
            mean_frob_sq += st.product_frob[l] * st.product_frob[l];
        }
        mean_rank /= static_cast<double>(stacks.size());
        mean_frob_sq /= static_cast<double>(stacks.size());
        ReportRow row;
        row.add("layer", static_cast<int>(l))
            .add("kl_bound", kl.values[l])
            .add("w_bound", wass.values[l])
            .add("mean_rank", mean_rank)
            .add("mean_frob_sq", mean_frob_sq);
        report.append(std::move(row));
    }
    return report;
}

/// Generalization-error estimate of the mean-matching classifier against
/// its KL and Wasserstein bounds, one row per sample size.
inline ExperimentReport run_gen_bound(const ExperimentConfig& cfg) {
    ExperimentReport report;
    for (std::size_t idx = 0; idx < cfg.n_list.size(); ++idx) {
        GaussianMixtureSpec spec{cfg.mu0, cfg.sigma0, cfg.n_list[idx]};
        validate(spec);
        SeededRng rng(cfg.seed, static_cast<std::uint64_t>(idx));
        GenErrorEstimate est = empirical_gen_error(spec, fit_mean_classifier, cfg.gen_datasets,
                                                   rng, RiskMode::quadrature);

        // The trained model is the fitted row vector; redo the same draws to
        // collect the one-layer stacks the profiles are evaluated on.
        std::vector<WeightStack> stacks;
        stacks.reserve(cfg.gen_datasets);
        for (long t = 0; t < cfg.gen_datasets; ++t) {
            SeededRng trial_rng = rng.child(static_cast<std::uint64_t>(t));
            Dataset data = sample_dataset(spec, trial_rng);
            std::vector<double> w = fit_mean_classifier(data);
            WeightStack stack;
            stack.layers.push_back(MatrixR(1, spec.dim(), w));
            stacks.push_back(weight_products(std::move(stack)));
        }
        BoundProfile kl = kl_bound_profile(spec, stacks);
        BoundProfile wass = wasserstein_bound_profile(spec, stacks);

        ReportRow row;
        row.add("n", cfg.n_list[idx])
            .add("estimate", est.estimate)
            .add("std_error", est.std_error)
            .add("kl_bound_last", kl.values.back())
            .add("w_bound_min", wass.values[wass.min_index]);
        report.append(std::move(row));
    }
    return report;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (experiment_needs_seed(cfg.kind) && !cfg.has_seed)
        throw ConfigError("seed", "required for randomized experiments");
    switch (cfg.kind) {
        case ExperimentKind::table1: return run_table1(cfg);
        case ExperimentKind::add_layer_sweep:
        case ExperimentKind::split_layer_sweep: return run_depth_sweep(cfg);
        case ExperimentKind::bound_profile: return run_bound_profile(cfg);
        case ExperimentKind::sdpi_table: return run_sdpi_table(cfg);
        case ExperimentKind::gen_bound: return run_gen_bound(cfg);
    }
    throw ConfigError("kind", "unknown experiment kind");
}

}  // namespace genbound
