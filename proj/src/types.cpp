#include "mmvpr/types.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "mmvpr/error.hpp"

namespace mmvpr {

namespace {

void check_grid_dims(const char* type, int height, int width) {
    if (height < 1 || width < 1) {
        std::ostringstream os;
        os << type << ": height and width must be >= 1, got " << height << "x" << width;
        throw Error(os.str());
    }
}

}  // namespace

SemanticMap::SemanticMap(int height, int width, int num_classes, std::vector<std::uint16_t> labels)
    : height_(height), width_(width), num_classes_(num_classes), labels_(std::move(labels)) {
    check_grid_dims("SemanticMap", height_, width_);
    if (num_classes_ < 2) {
        throw Error("SemanticMap.num_classes: must be >= 2, got " + std::to_string(num_classes_));
    }
    const std::size_t expected = static_cast<std::size_t>(height_) * width_;
    if (labels_.size() != expected) {
        std::ostringstream os;
        os << "SemanticMap.labels: expected " << expected << " entries, got " << labels_.size();
        throw Error(os.str());
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] >= num_classes_) {
            std::ostringstream os;
            os << "SemanticMap.labels[r=" << i / width_ << ",c=" << i % width_ << "]: value "
               << labels_[i] << " out of range [0," << num_classes_ << ")";
            throw Error(os.str());
        }
    }
}

ProbabilityMap::ProbabilityMap(int height, int width, int num_classes, std::vector<float> probs)
    : height_(height), width_(width), num_classes_(num_classes), probs_(std::move(probs)) {
    check_grid_dims("ProbabilityMap", height_, width_);
    if (num_classes_ < 2) {
        throw Error("ProbabilityMap.num_classes: must be >= 2, got " + std::to_string(num_classes_));
    }
    const std::size_t pixels = static_cast<std::size_t>(height_) * width_;
    if (probs_.size() != pixels * num_classes_) {
        std::ostringstream os;
        os << "ProbabilityMap.probs: expected " << pixels * num_classes_ << " entries, got "
           << probs_.size();
        throw Error(os.str());
    }
    for (std::size_t p = 0; p < pixels; ++p) {
        double sum = 0.0;
        for (int k = 0; k < num_classes_; ++k) {
            const float v = probs_[p * num_classes_ + k];
            if (!(v >= 0.0f && v <= 1.0f)) {
                std::ostringstream os;
                os << "ProbabilityMap.probs[r=" << p / width_ << ",c=" << p % width_ << ",k=" << k
                   << "]: value " << v << " outside [0,1]";
                throw Error(os.str());
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) {
            std::ostringstream os;
            os << "ProbabilityMap.probs[r=" << p / width_ << ",c=" << p % width_
               << "]: per-pixel sum " << sum << " deviates from 1 by more than " << kSumTolerance;
            throw Error(os.str());
        }
    }
}

ImageBuffer::ImageBuffer(int height, int width, int channels, std::vector<std::uint8_t> samples)
    : height_(height), width_(width), channels_(channels), samples_(std::move(samples)) {
    check_grid_dims("ImageBuffer", height_, width_);
    if (channels_ != 1 && channels_ != 3) {
        throw Error("ImageBuffer.channels: must be 1 or 3, got " + std::to_string(channels_));
    }
    const std::size_t expected = static_cast<std::size_t>(height_) * width_ * channels_;
    if (samples_.size() != expected) {
        std::ostringstream os;
        os << "ImageBuffer.samples: expected " << expected << " samples, got " << samples_.size();
        throw Error(os.str());
    }
}

ClassStats::ClassStats(std::vector<double> frequencies, double epsilon)
    : frequencies_(std::move(frequencies)), epsilon_(epsilon) {
    if (frequencies_.empty()) {
        throw Error("ClassStats.frequencies: must not be empty");
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < frequencies_.size(); ++c) {
        const double r = frequencies_[c];
        if (!(r >= 0.0 && r <= 1.0)) {
            std::ostringstream os;
            os << "ClassStats.frequencies[c=" << c << "]: value " << r << " outside [0,1]";
            throw Error(os.str());
        }
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "ClassStats.frequencies: sum " << sum << " deviates from 1 by more than 1e-6";
        throw Error(os.str());
    }
    if (!(epsilon_ > 0.0)) {
        throw Error("ClassStats.epsilon: must be > 0, got " + std::to_string(epsilon_));
    }
}

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream os;
            os << "FeatureVector.values[" << i << "]: non-finite value";
            throw Error(os.str());
        }
    }
}

SemanticMap argmax_map(const ProbabilityMap& probs) {
    const int h = probs.height();
    const int w = probs.width();
    const int k = probs.num_classes();
    std::vector<std::uint16_t> labels(static_cast<std::size_t>(h) * w);
    const std::vector<float>& p = probs.probs();
    for (std::size_t px = 0; px < labels.size(); ++px) {
        const float* row = p.data() + px * k;
        int best = 0;
        for (int c = 1; c < k; ++c) {
            if (row[c] > row[best]) best = c;  // strict: ties keep the lowest index
        }
        labels[px] = static_cast<std::uint16_t>(best);
    }
    return SemanticMap(h, w, k, std::move(labels));
}

ProbabilityMap one_hot(const SemanticMap& labels) {
    const int h = labels.height();
    const int w = labels.width();
    const int k = labels.num_classes();
    std::vector<float> probs(static_cast<std::size_t>(h) * w * k, 0.0f);
    for (std::size_t px = 0; px < labels.labels().size(); ++px) {
        probs[px * k + labels.labels()[px]] = 1.0f;
    }
    return ProbabilityMap(h, w, k, std::move(probs));
}

}  // namespace mmvpr
