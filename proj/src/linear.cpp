#include "tdkit/linear.hpp"

#include "tdkit/error.hpp"

#include <cmath>
#include <string>

namespace tdkit {

namespace {

bool all_binary(const std::vector<double>& values) {
    for (double v : values) {
        if (v != 0.0 && v != 1.0) return false;
    }
    return true;
}

void check_dims(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ContractError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
    }
}

} // namespace

FeatureVector FeatureVector::dense(std::vector<double> values) {
    FeatureVector fv;
    fv.dim_ = values.size();
    fv.is_sparse_ = false;
    fv.is_binary_ = all_binary(values);
    fv.values_ = std::move(values);
    return fv;
}

FeatureVector FeatureVector::sparse(std::size_t dim, std::vector<std::size_t> indices,
                                    std::vector<double> values) {
    if (indices.size() != values.size()) {
        throw ContractError("FeatureVector::sparse: indices and values differ in length");
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= dim) {
            throw ContractError("FeatureVector::sparse: index " + std::to_string(indices[k]) +
                                " out of range for dimension " + std::to_string(dim));
        }
        if (k > 0 && indices[k] <= indices[k - 1]) {
            throw ContractError("FeatureVector::sparse: indices must be strictly increasing");
        }
    }
    FeatureVector fv;
    fv.dim_ = dim;
    fv.is_sparse_ = true;
    fv.is_binary_ = all_binary(values);
    fv.indices_ = std::move(indices);
    fv.values_ = std::move(values);
    return fv;
}

FeatureVector FeatureVector::binary(std::size_t dim, std::vector<std::size_t> indices) {
    std::vector<double> ones(indices.size(), 1.0);
    return sparse(dim, std::move(indices), std::move(ones));
}

double FeatureVector::at(std::size_t i) const {
    if (i >= dim_) throw ContractError("FeatureVector::at: index out of range");
    if (!is_sparse_) return values_[i];
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] == i) return values_[k];
        if (indices_[k] > i) break;
    }
    return 0.0;
}

std::vector<double> FeatureVector::to_dense() const {
    if (!is_sparse_) return values_;
    std::vector<double> out(dim_, 0.0);
    for (std::size_t k = 0; k < indices_.size(); ++k) out[indices_[k]] = values_[k];
    return out;
}

double dot(std::span<const double> w, const FeatureVector& phi, OpCounter* ops) {
    check_dims(w.size(), phi.dim(), "dot");
    double sum = 0.0;
    bool first = true;
    phi.for_each([&](std::size_t i, double v) {
        double term = w[i] * v;
        sum = first ? term : sum + term;
        first = false;
    });
    if (ops != nullptr) {
        const std::size_t m = phi.active_count();
        if (m > 0) {
            ops->mul(m);
            ops->add(m - 1);
        }
    }
    return sum;
}

void axpy_into(std::span<double> w, double scalar, const FeatureVector& v, OpCounter* ops) {
    check_dims(w.size(), v.dim(), "axpy_into");
    if (!std::isfinite(scalar)) throw ContractError("axpy_into: non-finite scalar");
    v.for_each([&](std::size_t i, double x) { w[i] += scalar * x; });
    if (ops != nullptr) {
        ops->mul(v.active_count());
        ops->add(v.active_count());
    }
}

void axpy_into(std::span<double> w, double scalar, std::span<const double> v, OpCounter* ops) {
    check_dims(w.size(), v.size(), "axpy_into");
    if (!std::isfinite(scalar)) throw ContractError("axpy_into: non-finite scalar");
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += scalar * v[i];
    if (ops != nullptr) {
        ops->mul(w.size());
        ops->add(w.size());
    }
}

void scale_into(std::span<double> w, double scalar, OpCounter* ops) {
    for (double& x : w) x *= scalar;
    if (ops != nullptr) ops->mul(w.size());
}

} // namespace tdkit
