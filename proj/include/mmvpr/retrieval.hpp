#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mmvpr/bow.hpp"
#include "mmvpr/spm.hpp"
#include "mmvpr/types.hpp"

namespace mmvpr {

/// Trade-off between the visual (BoW) and semantic (SPM) modalities.
struct FusionConfig {
    double alpha = 0.5;

    FusionConfig() = default;
    explicit FusionConfig(double alpha_);
};

struct LandmarkEntry {
    std::uint64_t id = 0;
    BowCode g;
    SpmCode h;
};

/// The (BoW, SPM) code pair of one image.
struct QueryCodes {
    BowCode g;
    SpmCode h;
};

/// Unique ids, uniform g and h dimensions, matching SPM configs.
void validate_index(const std::vector<LandmarkEntry>& index);

/// Cosine of the L2-normalized vectors. Two zero vectors compare as 1,
/// exactly one zero vector as 0.
double cosine(const FeatureVector& a, const FeatureVector& b);

/// alpha * cos(g_q, g_l) + (1 - alpha) * cos(h_q, h_l).
double fused_similarity(const QueryCodes& q, const QueryCodes& l, const FusionConfig& cfg);

/// Exhaustive scan; top min(k, N) by fused similarity descending, ties broken
/// by ascending id.
std::vector<std::pair<std::uint64_t, double>> query(const std::vector<LandmarkEntry>& index,
                                                    const QueryCodes& q, std::size_t k,
                                                    const FusionConfig& cfg);

struct QuerySample {
    QueryCodes codes;
    std::uint64_t true_id = 0;
};

struct RecallReport {
    std::map<std::size_t, double> recall_at;  // cutoffs 1, 5, 10 and top-1%
    std::size_t top1pct_cutoff = 1;
    std::vector<double> curve;  // R@K for K = 1..N
};

/// Top-1% cutoff: max(1, ceil(0.01 * N)).
std::size_t top_percent_cutoff(std::size_t index_size);

RecallReport eval_recall(const std::vector<LandmarkEntry>& index,
                         const std::vector<QuerySample>& queries, const FusionConfig& cfg);

}  // namespace mmvpr
