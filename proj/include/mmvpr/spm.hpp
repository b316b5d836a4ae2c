#pragma once

#include <cstdint>
#include <vector>

#include "mmvpr/types.hpp"

namespace mmvpr {

/// Pyramid depth L (levels 0..L) and class count K. L is capped at 10 to
/// guard against pathological memory use.
struct SpmConfig {
    int levels;
    int num_classes;

    SpmConfig(int levels_, int num_classes_);
};

/// Weighted multi-scale semantic descriptor [h^0; h^1; ...; h^L]. Within each
/// level, cells are concatenated row-major with classes fastest-varying; this
/// order is part of the persisted code-vector format.
struct SpmCode {
    FeatureVector vector;
    SpmConfig config;
};

/// Level weight: 2^-L for level 0, otherwise 2^(l-L-1). Sums to 1 over 0..L.
double spm_weight(int level, int levels);

/// K * (4^(L+1) - 1) / 3.
std::size_t spm_code_length(int levels, int num_classes);

/// Cell boundaries along one axis: bounds[i] = floor(i * extent / cells),
/// i = 0..cells. Cell i covers [bounds[i], bounds[i+1]).
std::vector<int> spm_cell_bounds(int extent, int cells);

/// Raw per-cell class counts for one pyramid level (2^level x 2^level cells,
/// row-major, classes fastest). Each cell tallies its pixels with a masked
/// scan, so the per-query coding cost grows with the cell count; this is the
/// cost profile the coding-time benchmark measures.
std::vector<std::uint32_t> level_histograms(const SemanticMap& m, int level);

SpmCode encode_spm(const SemanticMap& m, const SpmConfig& cfg);

}  // namespace mmvpr
