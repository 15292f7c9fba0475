#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "genbound/errors.hpp"

namespace genbound {

/// Small dense real matrix, row-major, double precision.
class MatrixR {
  public:
    MatrixR(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(check_dims(rows, cols), fill) {}

    MatrixR(int rows, int cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (static_cast<std::size_t>(check_dims(rows, cols)) != data_.size())
            throw ShapeMismatch("entry count does not match rows*cols");
        for (double v : data_)
            if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
    }

    MatrixR(int rows, int cols, std::initializer_list<double> entries)
        : MatrixR(rows, cols, std::vector<double>(entries)) {}

    static MatrixR identity(int d) {
        MatrixR m(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const MatrixR& other) const = default;

  private:
    static std::size_t check_dims(int rows, int cols) {
        if (rows < 1 || cols < 1) throw ShapeMismatch("matrix dimensions must be >= 1");
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }

    int rows_;
    int cols_;
    std::vector<double> data_;
};

inline MatrixR multiply(const MatrixR& a, const MatrixR& b) {
    if (a.cols() != b.rows()) throw ShapeMismatch("inner dimensions disagree");
    MatrixR c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline MatrixR transpose(const MatrixR& m) {
    MatrixR t(m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

inline double frobenius_norm(const MatrixR& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

/// Singular values in descending order, by one-sided Jacobi orthogonalization.
/// Adequate and accurate for the small dense matrices used here.
inline std::vector<double> singular_values(const MatrixR& m) {
    // Work on the tall orientation so columns are the shorter side.
    MatrixR a = m.rows() >= m.cols() ? m : transpose(m);
    int rows = a.rows();
    int cols = a.cols();

    auto col_dot = [&](int p, int q) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += a(i, p) * a(i, q);
        return s;
    };

    const double tol = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double app = col_dot(p, p);
                double aqq = col_dot(q, q);
                double apq = col_dot(p, q);
                if (std::abs(apq) <= tol * std::sqrt(app * aqq)) continue;
                rotated = true;
                double zeta = (aqq - app) / (2.0 * apq);
                double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (int i = 0; i < rows; ++i) {
                    double vp = a(i, p);
                    double vq = a(i, q);
                    a(i, p) = c * vp - s * vq;
                    a(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(cols);
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += a(i, j) * a(i, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

inline double operator_norm(const MatrixR& m) { return singular_values(m).front(); }

/// Count of singular values above tol_factor * max(rows,cols) * s_max.
/// The zero matrix has rank 0.
inline int numerical_rank(const MatrixR& m, double tol_factor = 1e-10) {
    std::vector<double> sv = singular_values(m);
    double cutoff = tol_factor * std::max(m.rows(), m.cols()) * sv.front();
    if (sv.front() == 0.0) return 0;
    int r = 0;
    for (double s : sv)
        if (s > cutoff) ++r;
    return r;
}

/// Weight matrices W_1..W_L plus, once populated, the cached partial
/// products W_l * W_{l-1} * ... * W_1 (index 0 holds the input-side
/// identity), their numerical ranks and Frobenius norms, and the
/// per-layer operator norms.
struct WeightStack {
    std::vector<MatrixR> layers;

    std::vector<MatrixR> products;
    std::vector<int> ranks;
    std::vector<double> product_frob;
    std::vector<double> layer_op;

    int depth() const { return static_cast<int>(layers.size()); }
    int input_dim() const { return layers.front().cols(); }
};

/// Populate the cached products, ranks and norms by left-to-right
/// accumulation. Throws ShapeMismatch when adjacent layers do not compose.
inline WeightStack weight_products(WeightStack stack) {
    if (stack.layers.empty()) throw ShapeMismatch("weight stack must have at least one layer");
    for (std::size_t l = 1; l < stack.layers.size(); ++l)
        if (stack.layers[l].cols() != stack.layers[l - 1].rows())
            throw ShapeMismatch("layer " + std::to_string(l + 1) + " input width " +
                                std::to_string(stack.layers[l].cols()) + " != layer " +
                                std::to_string(l) + " output width " +
                                std::to_string(stack.layers[l - 1].rows()));

    int d0 = stack.input_dim();
    stack.products.clear();
    stack.products.reserve(stack.layers.size() + 1);
    stack.products.push_back(MatrixR::identity(d0));
    for (const MatrixR& w : stack.layers)
        stack.products.push_back(multiply(w, stack.products.back()));

    stack.ranks.clear();
    stack.product_frob.clear();
    for (const MatrixR& p : stack.products) {
        stack.ranks.push_back(numerical_rank(p));
        stack.product_frob.push_back(frobenius_norm(p));
    }
    stack.layer_op.clear();
    for (const MatrixR& w : stack.layers) stack.layer_op.push_back(operator_norm(w));
    return stack;
}

}  // namespace genbound
