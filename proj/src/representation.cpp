#include "tdkit/representation.hpp"

#include "tdkit/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace tdkit {

std::string_view to_string(RepKind kind) {
    switch (kind) {
    case RepKind::tabular: return "tabular";
    case RepKind::binary: return "binary";
    case RepKind::normal: return "normal";
    case RepKind::aliased_constant: return "aliased_constant";
    }
    return "?";
}

RepKind parse_rep_kind(std::string_view name) {
    if (name == "tabular") return RepKind::tabular;
    if (name == "binary") return RepKind::binary;
    if (name == "normal") return RepKind::normal;
    if (name == "aliased_constant" || name == "aliased") return RepKind::aliased_constant;
    throw ContractError("unknown representation '" + std::string(name) + "'");
}

Representation::Representation(RepKind kind, std::size_t n, std::vector<FeatureVector> rows)
    : kind_(kind), n_(n), rows_(std::move(rows)), binary_(true) {
    if (rows_.empty()) throw ContractError("Representation: needs at least one state");
    for (const auto& row : rows_) {
        if (row.dim() != n_) throw ContractError("Representation: row dimension mismatch");
        binary_ = binary_ && row.is_binary();
    }
}

const FeatureVector& Representation::features(std::size_t s) const {
    if (s >= rows_.size()) {
        throw ContractError("features_of: state " + std::to_string(s) + " out of range (k=" +
                            std::to_string(rows_.size()) + ")");
    }
    return rows_[s];
}

Representation make_tabular(std::size_t k) {
    if (k == 0) throw ContractError("make_tabular: k must be >= 1");
    std::vector<FeatureVector> rows;
    rows.reserve(k);
    for (std::size_t s = 0; s < k; ++s) rows.push_back(FeatureVector::binary(k, {s}));
    return Representation(RepKind::tabular, k, std::move(rows));
}

Representation make_binary(std::size_t k) {
    if (k == 0) throw ContractError("make_binary: k must be >= 1");
    const std::size_t n = std::bit_width(k);
    std::vector<FeatureVector> rows;
    rows.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        const std::size_t code = s + 1;
        std::vector<std::size_t> active;
        // feature 0 holds the most significant bit
        for (std::size_t j = 0; j < n; ++j) {
            if ((code >> (n - 1 - j)) & 1U) active.push_back(j);
        }
        rows.push_back(FeatureVector::binary(n, std::move(active)));
    }
    return Representation(RepKind::binary, n, std::move(rows));
}

Representation make_normal(std::size_t k, Rng& rng, std::size_t dim) {
    if (k == 0 || dim == 0) throw ContractError("make_normal: k and dim must be >= 1");
    std::vector<FeatureVector> rows;
    rows.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        std::vector<double> v(dim);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& x : v) {
                x = standard_normal(rng);
                norm += x * x;
            }
            norm = std::sqrt(norm);
        } while (norm == 0.0);
        for (double& x : v) x /= norm;
        rows.push_back(FeatureVector::dense(std::move(v)));
    }
    return Representation(RepKind::normal, dim, std::move(rows));
}

Representation make_aliased_constant(std::size_t k) {
    if (k == 0) throw ContractError("make_aliased_constant: k must be >= 1");
    std::vector<FeatureVector> rows(k, FeatureVector::binary(1, {0}));
    return Representation(RepKind::aliased_constant, 1, std::move(rows));
}

} // namespace tdkit
