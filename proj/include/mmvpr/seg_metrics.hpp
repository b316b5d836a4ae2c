#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mmvpr/types.hpp"

namespace mmvpr {

/// counts[gt][pred], row-major K x K.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int num_classes);
    ConfusionMatrix(int num_classes, std::vector<std::uint64_t> counts);

    int num_classes() const { return num_classes_; }
    std::uint64_t at(int gt, int pred) const {
        return counts_[static_cast<std::size_t>(gt) * num_classes_ + pred];
    }
    void add(int gt, int pred, std::uint64_t n = 1) {
        counts_[static_cast<std::size_t>(gt) * num_classes_ + pred] += n;
    }
    std::uint64_t total() const;
    std::uint64_t row_sum(int gt) const;
    std::uint64_t col_sum(int pred) const;
    const std::vector<std::uint64_t>& counts() const { return counts_; }

private:
    int num_classes_;
    std::vector<std::uint64_t> counts_;
};

/// PA, MPA, MIoU, FWIoU. Classes whose IoU (or per-class accuracy) is 0/0 are
/// left out of the corresponding mean; per_class_iou holds nullopt for them.
struct SegScores {
    double pixel_accuracy = 0.0;
    double mean_pixel_accuracy = 0.0;
    double mean_iou = 0.0;
    double freq_weighted_iou = 0.0;
    std::vector<std::optional<double>> per_class_iou;
};

ConfusionMatrix confusion(const SemanticMap& gt, const SemanticMap& pred);
SegScores seg_scores(const ConfusionMatrix& cm);

enum class Reduction { Sum, Mean };

/// Class weight 1 / ln(r + 1 + epsilon); larger for rarer classes.
double ce_class_weight(double frequency, double epsilon);

/// Weighted multi-class cross-entropy score over a probability map against
/// ground-truth labels. Natural logarithm throughout. A zero probability at a
/// ground-truth class is an error unless clamp_zeros is set, in which case
/// probabilities below 1e-12 are clamped to 1e-12.
double weighted_ce(const ProbabilityMap& probs, const SemanticMap& gt, const ClassStats& stats,
                   Reduction reduction, bool clamp_zeros = false);

}  // namespace mmvpr
