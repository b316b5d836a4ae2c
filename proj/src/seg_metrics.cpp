#include "mmvpr/seg_metrics.hpp"

#include <cmath>
#include <sstream>

#include "mmvpr/error.hpp"

namespace mmvpr {

ConfusionMatrix::ConfusionMatrix(int num_classes)
    : num_classes_(num_classes),
      counts_(static_cast<std::size_t>(num_classes) * num_classes, 0) {
    if (num_classes_ < 1) {
        throw Error("ConfusionMatrix.num_classes: must be >= 1, got " + std::to_string(num_classes_));
    }
}

ConfusionMatrix::ConfusionMatrix(int num_classes, std::vector<std::uint64_t> counts)
    : num_classes_(num_classes), counts_(std::move(counts)) {
    if (num_classes_ < 1) {
        throw Error("ConfusionMatrix.num_classes: must be >= 1, got " + std::to_string(num_classes_));
    }
    const std::size_t expected = static_cast<std::size_t>(num_classes_) * num_classes_;
    if (counts_.size() != expected) {
        std::ostringstream os;
        os << "ConfusionMatrix.counts: expected " << expected << " entries, got " << counts_.size();
        throw Error(os.str());
    }
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (std::uint64_t v : counts_) t += v;
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(int gt) const {
    std::uint64_t s = 0;
    for (int j = 0; j < num_classes_; ++j) s += at(gt, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(int pred) const {
    std::uint64_t s = 0;
    for (int i = 0; i < num_classes_; ++i) s += at(i, pred);
    return s;
}

ConfusionMatrix confusion(const SemanticMap& gt, const SemanticMap& pred) {
    if (gt.height() != pred.height() || gt.width() != pred.width()) {
        std::ostringstream os;
        os << "confusion: dimension mismatch, gt " << gt.height() << "x" << gt.width() << " vs pred "
           << pred.height() << "x" << pred.width();
        throw Error(os.str());
    }
    if (gt.num_classes() != pred.num_classes()) {
        std::ostringstream os;
        os << "confusion: class-count mismatch, gt K=" << gt.num_classes() << " vs pred K="
           << pred.num_classes();
        throw Error(os.str());
    }
    ConfusionMatrix cm(gt.num_classes());
    const std::size_t n = gt.labels().size();
    for (std::size_t i = 0; i < n; ++i) {
        cm.add(gt.labels()[i], pred.labels()[i]);
    }
    return cm;
}

SegScores seg_scores(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (total == 0) {
        throw Error("seg_scores: confusion matrix is empty (total = 0)");
    }
    const int k = cm.num_classes();

    SegScores s;
    s.per_class_iou.assign(static_cast<std::size_t>(k), std::nullopt);

    std::uint64_t trace = 0;
    double acc_sum = 0.0;
    int acc_defined = 0;
    double iou_sum = 0.0;
    int iou_defined = 0;
    double fwiou = 0.0;

    for (int c = 0; c < k; ++c) {
        const std::uint64_t diag = cm.at(c, c);
        const std::uint64_t row = cm.row_sum(c);
        const std::uint64_t col = cm.col_sum(c);
        trace += diag;
        if (row > 0) {
            acc_sum += static_cast<double>(diag) / static_cast<double>(row);
            ++acc_defined;
        }
        const std::uint64_t uni = row + col - diag;
        if (uni > 0) {
            const double iou = static_cast<double>(diag) / static_cast<double>(uni);
            s.per_class_iou[static_cast<std::size_t>(c)] = iou;
            iou_sum += iou;
            ++iou_defined;
            fwiou += (static_cast<double>(row) / static_cast<double>(total)) * iou;
        }
    }

    s.pixel_accuracy = static_cast<double>(trace) / static_cast<double>(total);
    s.mean_pixel_accuracy = acc_defined > 0 ? acc_sum / acc_defined : 0.0;
    s.mean_iou = iou_defined > 0 ? iou_sum / iou_defined : 0.0;
    s.freq_weighted_iou = fwiou;
    return s;
}

double ce_class_weight(double frequency, double epsilon) {
    return 1.0 / std::log(frequency + 1.0 + epsilon);
}

double weighted_ce(const ProbabilityMap& probs, const SemanticMap& gt, const ClassStats& stats,
                   Reduction reduction, bool clamp_zeros) {
    if (probs.height() != gt.height() || probs.width() != gt.width()) {
        std::ostringstream os;
        os << "weighted_ce: dimension mismatch, probs " << probs.height() << "x" << probs.width()
           << " vs gt " << gt.height() << "x" << gt.width();
        throw Error(os.str());
    }
    if (probs.num_classes() != gt.num_classes()) {
        std::ostringstream os;
        os << "weighted_ce: class-count mismatch, probs K=" << probs.num_classes() << " vs gt K="
           << gt.num_classes();
        throw Error(os.str());
    }
    if (stats.num_classes() != probs.num_classes()) {
        std::ostringstream os;
        os << "weighted_ce: class-count mismatch, stats K=" << stats.num_classes() << " vs probs K="
           << probs.num_classes();
        throw Error(os.str());
    }

    const int w = gt.width();
    double sum = 0.0;
    const std::size_t pixels = gt.labels().size();
    for (std::size_t px = 0; px < pixels; ++px) {
        const int c = gt.labels()[px];
        double p = probs.probs()[px * probs.num_classes() + c];
        if (p <= 0.0) {
            if (!clamp_zeros) {
                std::ostringstream os;
                os << "weighted_ce: probability at [r=" << px / w << ",c=" << px % w << "] for class "
                   << c << " is 0, loss is non-finite (enable clamping to override)";
                throw Error(os.str());
            }
        }
        if (clamp_zeros && p < 1e-12) p = 1e-12;
        sum += -ce_class_weight(stats.frequency(c), stats.epsilon()) * std::log(p);
    }
    if (reduction == Reduction::Mean) {
        return sum / static_cast<double>(pixels);
    }
    return sum;
}

}  // namespace mmvpr
