#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/matrix.hpp"
#include "genbound/qfunc.hpp"

namespace genbound {

// Per-layer stochastic regularization descriptors. Dropout acts on the
// source representation of width d_l (sites 0..L-1), DropConnect masks the
// d_l x d_{l-1} weight matrix (sites 1..L), Gaussian noise perturbs the
// destination representation of width d_l (sites 1..L).
struct NoReg {};
struct DropoutReg {
    double delta;
    int width;
};
struct DropConnectReg {
    MatrixR deltas;  // keep-out probabilities, one per weight entry
};
struct GaussianNoiseReg {
    double eps;
    double act_sup;  // sup norm of the layer activation
    int width;
};
using LayerRegularization = std::variant<NoReg, DropoutReg, DropConnectReg, GaussianNoiseReg>;

/// Contraction coefficient of the coordinatewise dropout channel on a
/// width-`width` representation. This one is an equality, not a bound.
inline double dropout_eta(double delta, int width) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("dropout_eta: delta must be in (0,1)");
    if (width < 1) throw DomainError("dropout_eta: width must be >= 1");
    return 1.0 - std::pow(delta, width);
}

/// Upper bound on the contraction coefficient of the DropConnect channel:
/// 1 minus the product of all entrywise drop probabilities.
inline double dropconnect_eta_ub(const MatrixR& deltas) {
    double prod = 1.0;
    for (double d : deltas.data()) {
        if (!(d > 0.0 && d < 1.0))
            throw DomainError("dropconnect_eta_ub: probabilities must be in (0,1)");
        prod *= d;
    }
    return 1.0 - prod;
}

/// Upper bound on the contraction coefficient of a bounded map followed by
/// isotropic Gaussian noise of scale eps on a width-`width` output.
/// Strictly below 1; decreasing in eps, increasing in width and act_sup.
inline double noise_eta_ub(double eps, double act_sup, int width) {
    if (!(eps > 0.0)) throw DomainError("noise_eta_ub: eps must be positive");
    if (!(act_sup > 0.0)) throw DomainError("noise_eta_ub: act_sup must be positive");
    if (width < 1) throw DomainError("noise_eta_ub: width must be >= 1");
    return 1.0 - 2.0 * q_function(std::sqrt(2.0 * width) * act_sup / (2.0 * eps));
}

/// Total variation between two isotropic Gaussians N(m, eps^2 I) and
/// N(m', eps^2 I) with ||m - m'|| = shift_norm.
inline double tv_shifted_gaussians(double shift_norm, double eps) {
    if (!(eps > 0.0)) throw DomainError("tv_shifted_gaussians: eps must be positive");
    if (shift_norm < 0.0) throw DomainError("tv_shifted_gaussians: shift_norm must be >= 0");
    return 1.0 - 2.0 * q_function(shift_norm / (2.0 * eps));
}

enum class EtaExactness { exact, upper_bound };

struct EtaTerm {
    int site;  // layer index the coefficient is attached to
    std::string channel;
    double value;
    EtaExactness exactness;
};

/// Network layout plus per-site regularization. dims holds d_0..d_L and
/// regs has one entry per site index 0..L.
struct NetworkSpec {
    std::vector<int> dims;
    int label_count = 2;
    std::vector<LayerRegularization> regs;

    int depth() const { return static_cast<int>(dims.size()) - 1; }
};

inline void validate(const NetworkSpec& spec) {
    if (spec.dims.size() < 2) throw DomainError("network: need at least one layer (dims d0..dL)");
    for (int d : spec.dims)
        if (d < 1) throw DomainError("network: layer widths must be >= 1");
    if (spec.label_count < 1) throw DomainError("network: label count must be >= 1");
    if (spec.regs.size() != spec.dims.size())
        throw DomainError("network: need one regularization entry per site 0..L");

    int depth = spec.depth();
    for (int l = 0; l <= depth; ++l) {
        const LayerRegularization& reg = spec.regs[l];
        if (const auto* drop = std::get_if<DropoutReg>(&reg)) {
            if (l > depth - 1) throw DomainError("network: dropout sites are layers 0..L-1");
            if (drop->width != spec.dims[l])
                throw ShapeMismatch("network: dropout width must equal d_" + std::to_string(l));
            if (!(drop->delta > 0.0 && drop->delta < 1.0))
                throw DomainError("network: dropout delta must be in (0,1)");
        } else if (const auto* dc = std::get_if<DropConnectReg>(&reg)) {
            if (l < 1) throw DomainError("network: dropconnect sites are layers 1..L");
            if (dc->deltas.rows() != spec.dims[l] || dc->deltas.cols() != spec.dims[l - 1])
                throw ShapeMismatch("network: dropconnect matrix must be d_l x d_{l-1}");
        } else if (const auto* gn = std::get_if<GaussianNoiseReg>(&reg)) {
            if (l < 1) throw DomainError("network: noise sites are layers 1..L");
            if (gn->width != spec.dims[l])
                throw ShapeMismatch("network: noise width must equal d_" + std::to_string(l));
            if (!(gn->eps > 0.0) || !(gn->act_sup > 0.0))
                throw DomainError("network: noise eps and act_sup must be positive");
        }
    }
}

/// Per-site contraction coefficients. Unregularized sites are deterministic
/// maps and contribute factor 1 (omitted from the list).
inline std::vector<EtaTerm> network_eta_terms(const NetworkSpec& spec) {
    validate(spec);
    std::vector<EtaTerm> terms;
    for (int l = 0; l <= spec.depth(); ++l) {
        const LayerRegularization& reg = spec.regs[l];
        if (const auto* drop = std::get_if<DropoutReg>(&reg)) {
            terms.push_back({l, "dropout", dropout_eta(drop->delta, drop->width), EtaExactness::exact});
        } else if (const auto* dc = std::get_if<DropConnectReg>(&reg)) {
            terms.push_back({l, "dropconnect", dropconnect_eta_ub(dc->deltas), EtaExactness::upper_bound});
        } else if (const auto* gn = std::get_if<GaussianNoiseReg>(&reg)) {
            terms.push_back(
                {l, "noise", noise_eta_ub(gn->eps, gn->act_sup, gn->width), EtaExactness::upper_bound});
        }
    }
    return terms;
}

inline double network_eta_product(const NetworkSpec& spec) {
    double prod = 1.0;
    for (const EtaTerm& t : network_eta_terms(spec)) prod *= t.value;
    return prod;
}

/// exp(-sum_l delta_l^{d_l}) approximation of the dropout coefficient
/// product. Only defined for dropout-only networks; the gap against the
/// exact product grows when some delta_l^{d_l} is not small.
inline double eta_product_approx(const NetworkSpec& spec) {
    validate(spec);
    double exponent = 0.0;
    for (int l = 0; l <= spec.depth(); ++l) {
        const LayerRegularization& reg = spec.regs[l];
        if (std::holds_alternative<NoReg>(reg)) continue;
        const auto* drop = std::get_if<DropoutReg>(&reg);
        if (!drop)
            throw UnsupportedRegularization("eta_product_approx: dropout-only networks");
        exponent += std::pow(drop->delta, drop->width);
    }
    return std::exp(-exponent);
}

}  // namespace genbound
