#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mmvpr/types.hpp"

namespace mmvpr {

/// Descriptor sampling window is 31x31 plus one pixel of box-filter support,
/// so keypoints must stay this far from every image border.
inline constexpr int kPatchMargin = 16;
inline constexpr int kDescriptorBits = 256;

struct Keypoint {
    int x = 0;
    int y = 0;
    double score = 0.0;
};

/// Fixed 256-bit descriptor, bit i in bits[i / 64] at position i % 64.
struct BinaryDescriptor {
    std::array<std::uint64_t, 4> bits{};

    bool bit(int i) const { return (bits[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u; }
    void set_bit(int i) { bits[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
    bool operator==(const BinaryDescriptor& o) const { return bits == o.bits; }
};

int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b);

/// One comparison of the descriptor pattern: bit = 1 iff the smoothed
/// intensity at (px,py) is less than at (qx,qy), offsets relative to the
/// keypoint. The 256-entry table is a baked constant (format version 1);
/// changing it breaks every persisted vocabulary.
struct BriefPair {
    std::int8_t px, py, qx, qy;
};

const std::array<BriefPair, 256>& brief_pattern();

/// Visual words (pairwise distinct), optional per-word idf weights, and the
/// seed the vocabulary was clustered with.
struct Vocabulary {
    std::vector<BinaryDescriptor> words;
    std::vector<double> idf;  // empty, or one non-negative weight per word
    std::uint64_t seed = 0;

    std::size_t size() const { return words.size(); }
};

void validate_vocabulary(const Vocabulary& vocab);

/// L2-normalized visual-word histogram; all-zero when the image had no keypoints.
struct BowCode {
    FeatureVector vector;
};

/// Norm must be 1 within 1e-6, or exactly 0.
void validate_bow_code(const BowCode& code);

struct BowParams {
    int max_keypoints = 500;
    int threshold = 20;
    bool use_idf = false;
};

/// Grayscale passthrough, or BT.601 luma round(0.299R + 0.587G + 0.114B).
ImageBuffer to_gray(const ImageBuffer& img);

/// FAST-style segment-test corners: >= 12 contiguous circle pixels all
/// brighter than center+threshold or all darker than center-threshold.
/// Score is the sum of absolute center differences over the qualifying arc.
/// 3x3 non-maximum suppression, then the top max_keypoints by score with
/// ties broken by ascending (y, x). Images too small to host a keypoint at
/// the patch margin yield an empty list.
std::vector<Keypoint> detect_keypoints(const ImageBuffer& img, int max_keypoints, int threshold);

/// 256 pairwise intensity comparisons on the 3x3-box-smoothed image.
BinaryDescriptor describe(const ImageBuffer& img, const Keypoint& kp);

/// k-majority clustering under Hamming distance: seeded greedy farthest-point
/// initialization, nearest-centroid assignment (ties to the lowest word
/// index), per-bit majority-vote updates (ties to 0). Deterministic given
/// (descriptors, seed). Requires at least word_count distinct descriptors.
Vocabulary build_vocab(const std::vector<BinaryDescriptor>& descriptors, int word_count,
                       std::uint64_t seed, int max_iters = 50);

/// Index of the nearest word, ties to the lowest index.
std::size_t nearest_word(const Vocabulary& vocab, const BinaryDescriptor& d);

/// idf_w = max(0, ln(N_images / (1 + n_w))) with n_w the number of images
/// whose descriptor set touches word w.
std::vector<double> compute_idf(const Vocabulary& vocab,
                                const std::vector<std::vector<BinaryDescriptor>>& image_descriptors);

/// detect -> describe -> nearest-word histogram -> optional idf -> L2 normalize.
BowCode encode_bow(const ImageBuffer& img, const Vocabulary& vocab, const BowParams& params = {});

}  // namespace mmvpr
