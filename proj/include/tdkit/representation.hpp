#pragma once

#include "tdkit/linear.hpp"
#include "tdkit/rng.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace tdkit {

enum class RepKind { tabular, binary, normal, aliased_constant };

std::string_view to_string(RepKind kind);
RepKind parse_rep_kind(std::string_view name);

/// Fixed state -> feature map, materialised as k rows at construction.
/// States are 0-based here; the binary encoding uses index + 1.
class Representation {
public:
    Representation(RepKind kind, std::size_t n, std::vector<FeatureVector> rows);

    RepKind kind() const { return kind_; }
    std::size_t num_states() const { return rows_.size(); }
    std::size_t dim() const { return n_; }
    /// Every row contains only 0/1 values (valid input for replacing traces).
    bool is_binary() const { return binary_; }

    const FeatureVector& features(std::size_t s) const;
    const std::vector<FeatureVector>& rows() const { return rows_; }

private:
    RepKind kind_;
    std::size_t n_;
    std::vector<FeatureVector> rows_;
    bool binary_;
};

/// One-hot rows, n = k.
Representation make_tabular(std::size_t k);
/// Big-endian binary code of (s + 1), n = ceil(log2(k + 1)).
Representation make_binary(std::size_t k);
/// Rows drawn i.i.d. N(0, 1) per entry, then scaled to unit length.
Representation make_normal(std::size_t k, Rng& rng, std::size_t dim = 5);
/// Single feature equal to 1 in every state.
Representation make_aliased_constant(std::size_t k);

inline const FeatureVector& features_of(const Representation& rep, std::size_t s) {
    return rep.features(s);
}

} // namespace tdkit
