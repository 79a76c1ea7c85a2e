#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace tdkit {

/// Tally of basic arithmetic (additions and multiplications) performed by
/// the vector kernels. Subtractions count as additions.
struct OpCounter {
    std::uint64_t additions = 0;
    std::uint64_t multiplications = 0;

    void add(std::uint64_t n = 1) { additions += n; }
    void mul(std::uint64_t n = 1) { multiplications += n; }
    std::uint64_t total() const { return additions + multiplications; }
    void reset() { additions = multiplications = 0; }
};

/// Feature vector phi(s). Either dense (n stored values) or sparse
/// (strictly increasing indices with values, declared dimension n).
/// Immutable once built.
class FeatureVector {
public:
    FeatureVector() = default;

    static FeatureVector dense(std::vector<double> values);
    static FeatureVector sparse(std::size_t dim, std::vector<std::size_t> indices,
                                std::vector<double> values);
    /// Sparse vector with value 1 at every listed index.
    static FeatureVector binary(std::size_t dim, std::vector<std::size_t> indices);

    std::size_t dim() const { return dim_; }
    /// m: number of structurally non-zero entries (n for dense storage).
    std::size_t active_count() const { return is_sparse_ ? indices_.size() : dim_; }
    bool is_sparse() const { return is_sparse_; }
    /// True when every stored value is 0 or 1.
    bool is_binary() const { return is_binary_; }

    /// Empty for dense storage.
    std::span<const std::size_t> indices() const { return indices_; }
    std::span<const double> values() const { return values_; }

    double at(std::size_t i) const;

    /// Visits (index, value) in ascending index order.
    template <class F>
    void for_each(F&& f) const {
        if (is_sparse_) {
            for (std::size_t k = 0; k < indices_.size(); ++k) f(indices_[k], values_[k]);
        } else {
            for (std::size_t i = 0; i < values_.size(); ++i) f(i, values_[i]);
        }
    }

    std::vector<double> to_dense() const;
    FeatureVector densified() const { return dense(to_dense()); }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::size_t dim_ = 0;
    bool is_sparse_ = true;
    bool is_binary_ = true;
    std::vector<std::size_t> indices_;
    std::vector<double> values_;
};

/// Dense weight vector theta.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
    explicit WeightVector(std::vector<double> values) : values_(std::move(values)) {}
    WeightVector(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> span() { return values_; }
    std::span<const double> span() const { return values_; }
    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> values_;
};

/// sum_i w_i phi_i in ascending index order. Charges m multiplications and
/// m-1 additions (nothing for an empty support).
double dot(std::span<const double> w, const FeatureVector& phi, OpCounter* ops = nullptr);
inline double dot(const WeightVector& w, const FeatureVector& phi, OpCounter* ops = nullptr) {
    return dot(w.span(), phi, ops);
}

/// w <- w + scalar * v over v's support. Charges 2m.
void axpy_into(std::span<double> w, double scalar, const FeatureVector& v,
               OpCounter* ops = nullptr);
inline void axpy_into(WeightVector& w, double scalar, const FeatureVector& v,
                      OpCounter* ops = nullptr) {
    axpy_into(w.span(), scalar, v, ops);
}
/// Dense overload. Charges 2n.
void axpy_into(std::span<double> w, double scalar, std::span<const double> v,
               OpCounter* ops = nullptr);

/// w <- scalar * w. Charges n multiplications.
void scale_into(std::span<double> w, double scalar, OpCounter* ops = nullptr);

} // namespace tdkit
