#include "mmvpr/bow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "mmvpr/error.hpp"
#include "mmvpr/rng.hpp"

namespace mmvpr {

namespace {

// Bresenham circle of radius 3, clockwise from the top.
constexpr int kCircleX[16] = {0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3, -3, -3, -2, -1};
constexpr int kCircleY[16] = {-3, -3, -2, -1, 0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3};
constexpr int kMinArc = 12;

struct Arc {
    int start = 0;
    int length = 0;
};

// Longest circular run of `polarity` in the classification ring.
Arc longest_run(const int (&cls)[16], int polarity) {
    Arc best;
    int run = 0;
    int start = 0;
    for (int i = 0; i < 32; ++i) {
        if (cls[i & 15] == polarity) {
            if (run == 0) start = i;
            ++run;
            if (run > best.length) best = {start & 15, run};
        } else {
            run = 0;
        }
    }
    best.length = std::min(best.length, 16);
    return best;
}

int box_sum3(const ImageBuffer& gray, int x, int y) {
    int s = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            s += gray.at(y + dy, x + dx);
        }
    }
    return s;
}

}  // namespace

int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b) {
    int d = 0;
    for (int i = 0; i < 4; ++i) {
        d += std::popcount(a.bits[static_cast<std::size_t>(i)] ^ b.bits[static_cast<std::size_t>(i)]);
    }
    return d;
}

ImageBuffer to_gray(const ImageBuffer& img) {
    if (img.channels() == 1) return img;
    const std::size_t pixels = static_cast<std::size_t>(img.height()) * img.width();
    std::vector<std::uint8_t> out(pixels);
    const std::uint8_t* s = img.samples().data();
    for (std::size_t i = 0; i < pixels; ++i) {
        const double luma = 0.299 * s[3 * i] + 0.587 * s[3 * i + 1] + 0.114 * s[3 * i + 2];
        out[i] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(luma), 0, 255));
    }
    return ImageBuffer(img.height(), img.width(), 1, std::move(out));
}

std::vector<Keypoint> detect_keypoints(const ImageBuffer& img, int max_keypoints, int threshold) {
    if (max_keypoints < 1) {
        throw Error("detect_keypoints: max_keypoints must be >= 1, got " + std::to_string(max_keypoints));
    }
    if (threshold < 0) {
        throw Error("detect_keypoints: threshold must be >= 0, got " + std::to_string(threshold));
    }
    const ImageBuffer gray = img.channels() == 1 ? img : to_gray(img);
    const int h = gray.height();
    const int w = gray.width();
    if (h < 2 * kPatchMargin + 1 || w < 2 * kPatchMargin + 1) return {};

    const std::uint8_t* data = gray.samples().data();
    int offset[16];
    for (int i = 0; i < 16; ++i) offset[i] = kCircleY[i] * w + kCircleX[i];

    std::vector<double> score(static_cast<std::size_t>(h) * w, -1.0);
    for (int y = kPatchMargin; y < h - kPatchMargin; ++y) {
        for (int x = kPatchMargin; x < w - kPatchMargin; ++x) {
            const std::uint8_t* p = data + static_cast<std::size_t>(y) * w + x;
            const int center = *p;
            const int hi = center + threshold;
            const int lo = center - threshold;
            // Any qualifying 12-arc covers at least 3 of the 4 compass points,
            // so most pixels bail out after 4 reads.
            const int bright4 = (p[offset[0]] > hi) + (p[offset[4]] > hi) + (p[offset[8]] > hi) +
                                (p[offset[12]] > hi);
            if (bright4 < 3) {
                const int dark4 = (p[offset[0]] < lo) + (p[offset[4]] < lo) + (p[offset[8]] < lo) +
                                  (p[offset[12]] < lo);
                if (dark4 < 3) continue;
            }
            int cls[16];
            for (int i = 0; i < 16; ++i) {
                const int v = p[offset[i]];
                cls[i] = v > hi ? 1 : (v < lo ? -1 : 0);
            }
            Arc arc = longest_run(cls, 1);
            if (arc.length < kMinArc) arc = longest_run(cls, -1);
            if (arc.length < kMinArc) continue;
            double s = 0.0;
            for (int i = 0; i < arc.length; ++i) {
                s += std::abs(p[offset[(arc.start + i) & 15]] - center);
            }
            score[static_cast<std::size_t>(y) * w + x] = s;
        }
    }

    // 3x3 non-maximum suppression; equal scores keep the lowest (y, x).
    std::vector<Keypoint> kept;
    for (int y = kPatchMargin; y < h - kPatchMargin; ++y) {
        for (int x = kPatchMargin; x < w - kPatchMargin; ++x) {
            const double s = score[static_cast<std::size_t>(y) * w + x];
            if (s < 0.0) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1 && is_max; ++dx) {
                    if (dy == 0 && dx == 0) continue;
                    const int ny = y + dy;
                    const int nx = x + dx;
                    if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
                    const double ns = score[static_cast<std::size_t>(ny) * w + nx];
                    if (ns > s || (ns == s && std::pair(ny, nx) < std::pair(y, x))) is_max = false;
                }
            }
            if (is_max) kept.push_back(Keypoint{x, y, s});
        }
    }

    std::sort(kept.begin(), kept.end(), [](const Keypoint& a, const Keypoint& b) {
        if (a.score != b.score) return a.score > b.score;
        return std::pair(a.y, a.x) < std::pair(b.y, b.x);
    });
    if (kept.size() > static_cast<std::size_t>(max_keypoints)) {
        kept.resize(static_cast<std::size_t>(max_keypoints));
    }
    return kept;
}

BinaryDescriptor describe(const ImageBuffer& img, const Keypoint& kp) {
    const ImageBuffer gray = img.channels() == 1 ? img : to_gray(img);
    const int h = gray.height();
    const int w = gray.width();
    if (kp.x < kPatchMargin || kp.x >= w - kPatchMargin || kp.y < kPatchMargin ||
        kp.y >= h - kPatchMargin) {
        std::ostringstream os;
        os << "describe: keypoint (x=" << kp.x << ",y=" << kp.y << ") violates the " << kPatchMargin
           << "-pixel patch margin of a " << h << "x" << w << " image";
        throw Error(os.str());
    }
    BinaryDescriptor d;
    const auto& pattern = brief_pattern();
    for (int i = 0; i < kDescriptorBits; ++i) {
        const BriefPair& p = pattern[static_cast<std::size_t>(i)];
        // Comparing 3x3 box sums is the same as comparing box-filtered means.
        const int sp = box_sum3(gray, kp.x + p.px, kp.y + p.py);
        const int sq = box_sum3(gray, kp.x + p.qx, kp.y + p.qy);
        if (sp < sq) d.set_bit(i);
    }
    return d;
}

void validate_bow_code(const BowCode& code) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < code.vector.size(); ++i) norm_sq += code.vector[i] * code.vector[i];
    if (norm_sq == 0.0) return;
    const double norm = std::sqrt(norm_sq);
    if (std::abs(norm - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "BowCode.vector: norm " << norm << " is neither 0 nor within 1e-6 of 1";
        throw Error(os.str());
    }
}

void validate_vocabulary(const Vocabulary& vocab) {
    if (vocab.words.empty()) {
        throw Error("Vocabulary.words: must contain at least one word");
    }
    for (std::size_t i = 0; i < vocab.words.size(); ++i) {
        for (std::size_t j = i + 1; j < vocab.words.size(); ++j) {
            if (vocab.words[i] == vocab.words[j]) {
                std::ostringstream os;
                os << "Vocabulary.words: words " << i << " and " << j << " are identical";
                throw Error(os.str());
            }
        }
    }
    if (!vocab.idf.empty()) {
        if (vocab.idf.size() != vocab.words.size()) {
            std::ostringstream os;
            os << "Vocabulary.idf: expected " << vocab.words.size() << " entries, got "
               << vocab.idf.size();
            throw Error(os.str());
        }
        for (std::size_t i = 0; i < vocab.idf.size(); ++i) {
            if (!(vocab.idf[i] >= 0.0) || !std::isfinite(vocab.idf[i])) {
                std::ostringstream os;
                os << "Vocabulary.idf[" << i << "]: must be finite and >= 0";
                throw Error(os.str());
            }
        }
    }
}

std::size_t nearest_word(const Vocabulary& vocab, const BinaryDescriptor& d) {
    std::size_t best = 0;
    int best_d = hamming(vocab.words[0], d);
    for (std::size_t i = 1; i < vocab.words.size(); ++i) {
        const int dist = hamming(vocab.words[i], d);
        if (dist < best_d) {
            best_d = dist;
            best = i;
        }
    }
    return best;
}

Vocabulary build_vocab(const std::vector<BinaryDescriptor>& descriptors, int word_count,
                       std::uint64_t seed, int max_iters) {
    if (word_count < 1) {
        throw Error("build_vocab: word_count must be >= 1, got " + std::to_string(word_count));
    }
    const std::size_t n = descriptors.size();
    const std::size_t w = static_cast<std::size_t>(word_count);
    if (n < w) {
        std::ostringstream os;
        os << "build_vocab: " << n << " descriptors cannot seed " << word_count << " words";
        throw Error(os.str());
    }

    // Farthest-point init: the seed picks the first word, the rest maximize
    // distance to the words chosen so far (ties to the lowest index).
    Rng rng(seed);
    std::vector<BinaryDescriptor> words;
    words.reserve(w);
    words.push_back(descriptors[rng.uniform_below(n)]);
    std::vector<int> min_dist(n);
    for (std::size_t i = 0; i < n; ++i) min_dist[i] = hamming(descriptors[i], words[0]);
    while (words.size() < w) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (min_dist[i] > min_dist[best]) best = i;
        }
        if (min_dist[best] == 0) {
            std::ostringstream os;
            os << "build_vocab: fewer than " << word_count << " distinct descriptors";
            throw Error(os.str());
        }
        words.push_back(descriptors[best]);
        for (std::size_t i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], hamming(descriptors[i], words.back()));
        }
    }

    Vocabulary vocab{std::move(words), {}, seed};

    std::vector<std::size_t> assign(n);
    for (std::size_t i = 0; i < n; ++i) assign[i] = nearest_word(vocab, descriptors[i]);

    for (int iter = 0; iter < max_iters; ++iter) {
        // Per-bit majority vote (ties to 0). A refresh that would collide with
        // another current word, or an empty cluster, keeps the previous word so
        // the words stay pairwise distinct.
        for (std::size_t c = 0; c < w; ++c) {
            int members = 0;
            int ones[kDescriptorBits] = {};
            for (std::size_t i = 0; i < n; ++i) {
                if (assign[i] != c) continue;
                ++members;
                for (int b = 0; b < kDescriptorBits; ++b) {
                    if (descriptors[i].bit(b)) ++ones[b];
                }
            }
            if (members == 0) continue;
            BinaryDescriptor candidate;
            for (int b = 0; b < kDescriptorBits; ++b) {
                if (2 * ones[b] > members) candidate.set_bit(b);
            }
            bool collides = false;
            for (std::size_t o = 0; o < w && !collides; ++o) {
                if (o != c && vocab.words[o] == candidate) collides = true;
            }
            if (!collides) vocab.words[c] = candidate;
        }

        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t a = nearest_word(vocab, descriptors[i]);
            if (a != assign[i]) {
                assign[i] = a;
                changed = true;
            }
        }
        if (!changed) break;
    }

    validate_vocabulary(vocab);
    return vocab;
}

std::vector<double> compute_idf(const Vocabulary& vocab,
                                const std::vector<std::vector<BinaryDescriptor>>& image_descriptors) {
    validate_vocabulary(vocab);
    if (image_descriptors.empty()) {
        throw Error("compute_idf: corpus is empty");
    }
    const std::size_t w = vocab.size();
    std::vector<std::size_t> containing(w, 0);
    std::vector<char> seen(w);
    for (const auto& descs : image_descriptors) {
        std::fill(seen.begin(), seen.end(), 0);
        for (const BinaryDescriptor& d : descs) seen[nearest_word(vocab, d)] = 1;
        for (std::size_t i = 0; i < w; ++i) containing[i] += seen[i];
    }
    std::vector<double> idf(w);
    const double n_images = static_cast<double>(image_descriptors.size());
    for (std::size_t i = 0; i < w; ++i) {
        idf[i] = std::max(0.0, std::log(n_images / (1.0 + static_cast<double>(containing[i]))));
    }
    return idf;
}

BowCode encode_bow(const ImageBuffer& img, const Vocabulary& vocab, const BowParams& params) {
    validate_vocabulary(vocab);
    if (params.use_idf && vocab.idf.empty()) {
        throw Error("encode_bow: use_idf requested but the vocabulary carries no idf table");
    }
    const ImageBuffer gray = to_gray(img);
    const std::vector<Keypoint> kps = detect_keypoints(gray, params.max_keypoints, params.threshold);

    std::vector<double> hist(vocab.size(), 0.0);
    for (const Keypoint& kp : kps) {
        hist[nearest_word(vocab, describe(gray, kp))] += 1.0;
    }
    if (params.use_idf) {
        for (std::size_t i = 0; i < hist.size(); ++i) hist[i] *= vocab.idf[i];
    }
    double norm_sq = 0.0;
    for (double v : hist) norm_sq += v * v;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : hist) v *= inv;
    }
    return BowCode{FeatureVector(std::move(hist))};
}

}  // namespace mmvpr
