#pragma once

#include <cstdint>
#include <vector>

namespace mmvpr {

/// Per-pixel class labels, row-major with origin at the top-left corner.
/// Immutable after construction; the constructor validates every invariant.
class SemanticMap {
public:
    SemanticMap(int height, int width, int num_classes, std::vector<std::uint16_t> labels);

    int height() const { return height_; }
    int width() const { return width_; }
    int num_classes() const { return num_classes_; }
    std::uint16_t at(int row, int col) const { return labels_[static_cast<std::size_t>(row) * width_ + col]; }
    const std::vector<std::uint16_t>& labels() const { return labels_; }

private:
    int height_;
    int width_;
    int num_classes_;
    std::vector<std::uint16_t> labels_;
};

/// Per-pixel distribution over K classes, row-major, class index fastest.
/// Each pixel's K entries must sum to 1 within 1e-4; out-of-tolerance maps
/// are rejected rather than renormalized.
class ProbabilityMap {
public:
    static constexpr double kSumTolerance = 1e-4;

    ProbabilityMap(int height, int width, int num_classes, std::vector<float> probs);

    int height() const { return height_; }
    int width() const { return width_; }
    int num_classes() const { return num_classes_; }
    float at(int row, int col, int cls) const {
        return probs_[(static_cast<std::size_t>(row) * width_ + col) * num_classes_ + cls];
    }
    const std::vector<float>& probs() const { return probs_; }

private:
    int height_;
    int width_;
    int num_classes_;
    std::vector<float> probs_;
};

/// 8-bit image, row-major, channel-interleaved. 1 channel (grayscale) or 3 (RGB).
class ImageBuffer {
public:
    ImageBuffer(int height, int width, int channels, std::vector<std::uint8_t> samples);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    std::uint8_t at(int row, int col, int channel = 0) const {
        return samples_[(static_cast<std::size_t>(row) * width_ + col) * channels_ + channel];
    }
    const std::vector<std::uint8_t>& samples() const { return samples_; }

private:
    int height_;
    int width_;
    int channels_;
    std::vector<std::uint8_t> samples_;
};

/// Per-class frequencies of a training corpus plus the smoothing epsilon used
/// by the weighted cross-entropy score.
class ClassStats {
public:
    explicit ClassStats(std::vector<double> frequencies, double epsilon = 0.02);

    int num_classes() const { return static_cast<int>(frequencies_.size()); }
    double frequency(int cls) const { return frequencies_[static_cast<std::size_t>(cls)]; }
    const std::vector<double>& frequencies() const { return frequencies_; }
    double epsilon() const { return epsilon_; }

private:
    std::vector<double> frequencies_;
    double epsilon_;
};

/// Dense real vector; houses both BoW and SPM codes. All values finite.
class FeatureVector {
public:
    FeatureVector() = default;
    explicit FeatureVector(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

/// Per-pixel argmax over classes; ties go to the lowest class index, so the
/// result is deterministic and order-independent.
SemanticMap argmax_map(const ProbabilityMap& probs);

/// One-hot re-encoding of a label map.
ProbabilityMap one_hot(const SemanticMap& labels);

}  // namespace mmvpr
