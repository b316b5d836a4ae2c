#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mmvpr/types.hpp"

namespace mmvpr {

/// The 8-class palette the generator paints with. Specs with K < 8 use the
/// first K classes; K > 8 is rejected.
extern const std::array<std::string, 8> kClassNames;

struct WorldSpec {
    std::uint64_t seed = 1;
    int height = 128;
    int width = 128;
    int num_classes = 8;
    int num_landmarks = 100;
    int min_dynamic_objects = 1;
    int max_dynamic_objects = 4;
    bool shadow = true;
};

/// One landmark: ground-truth static scene, its dynamic counterpart, and the
/// sprite mask. The dynamic image differs from the static one exactly on the
/// mask before shadows are painted (checked at generation time), and only
/// inside mask or shadow pixels after.
struct LandmarkSample {
    std::uint64_t id = 0;
    ImageBuffer static_image;
    ImageBuffer dynamic_image;
    SemanticMap static_semantics;
    ProbabilityMap static_probs;           // one-hot of static_semantics
    std::vector<std::uint8_t> dynamic_mask;  // H*W, 1 = dynamic-object pixel
};

/// Perception-error surrogate: label flips, one-hot softening, image noise,
/// and box blur inside former dynamic regions.
struct NoiseSpec {
    double label_flip_p = 0.0;
    double prob_temperature = 0.0;  // uniform mixture weight in [0,1]
    double image_noise_sigma = 0.0;
    bool artifact_blur = false;
};

void validate_world_spec(const WorldSpec& spec);
void validate_noise_spec(const NoiseSpec& noise);

/// Deterministic per (spec.seed, id); landmarks can be generated in any order.
LandmarkSample generate_landmark(const WorldSpec& spec, std::uint64_t id);
std::vector<LandmarkSample> generate_world(const WorldSpec& spec);

struct DegradedSample {
    ProbabilityMap probs;
    ImageBuffer image;
};

/// Flip labels i.i.d. to a uniformly random other class, then soften the
/// one-hot with a uniform mixture of weight prob_temperature.
ProbabilityMap degrade_labels(const SemanticMap& labels, const NoiseSpec& noise, std::uint64_t seed);

/// Gaussian intensity noise (clamped to [0,255]) followed, when artifact_blur
/// is set, by a 5x5 box blur written only inside the dynamic-object mask.
ImageBuffer degrade_image(const ImageBuffer& img, const std::vector<std::uint8_t>& dynamic_mask,
                          const NoiseSpec& noise, std::uint64_t seed);

DegradedSample degrade(const LandmarkSample& sample, const NoiseSpec& noise, std::uint64_t seed);

}  // namespace mmvpr
