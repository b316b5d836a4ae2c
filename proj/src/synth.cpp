#include "mmvpr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmvpr/error.hpp"
#include "mmvpr/rng.hpp"

namespace mmvpr {

const std::array<std::string, 8> kClassNames = {
    "None", "Buildings", "Fences", "Others", "Roadlines", "Road", "Sidewalk", "Vegetation"};

namespace {

// Base intensity per class. Pairwise gaps exceed twice the +-8 render jitter.
constexpr int kClassBase[8] = {40, 120, 90, 150, 230, 70, 170, 100};

// Sprite intensities sit further than the jitter from every class base, so a
// sprite pixel always differs from the static pixel it covers.
constexpr int kSpriteIntensity[9] = {0, 10, 20, 55, 135, 190, 200, 210, 250};

constexpr double kShadowFactor = 0.6;

struct Grid {
    int h, w;
    std::vector<std::uint16_t> labels;

    void fill_rect(int y0, int x0, int y1, int x1, std::uint16_t cls) {
        y0 = std::max(y0, 0);
        x0 = std::max(x0, 0);
        y1 = std::min(y1, h);
        x1 = std::min(x1, w);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) labels[static_cast<std::size_t>(y) * w + x] = cls;
        }
    }
};

template <typename Fn>
void for_each_ellipse_pixel(int h, int w, int cy, int cx, int ry, int rx, Fn&& fn) {
    for (int y = std::max(0, cy - ry); y <= std::min(h - 1, cy + ry); ++y) {
        for (int x = std::max(0, cx - rx); x <= std::min(w - 1, cx + rx); ++x) {
            const double dy = static_cast<double>(y - cy) / ry;
            const double dx = static_cast<double>(x - cx) / rx;
            if (dy * dy + dx * dx <= 1.0) fn(y, x);
        }
    }
}

SemanticMap paint_layout(const WorldSpec& spec, Rng& rng) {
    const int h = spec.height;
    const int w = spec.width;
    const int k = spec.num_classes;
    Grid g{h, w, std::vector<std::uint16_t>(static_cast<std::size_t>(h) * w, 0)};

    // Buildings (class 1): blocks in the upper part of the frame.
    const int n_buildings = rng.uniform_int(2, 5);
    for (int i = 0; i < n_buildings; ++i) {
        const int bw = rng.uniform_int(w / 8, w / 3);
        const int bh = rng.uniform_int(h / 8, h / 2);
        const int x0 = rng.uniform_int(0, w - 1);
        g.fill_rect(0, x0, bh, x0 + bw, 1);
    }

    // Road band (class 5) with sidewalk strips (class 6) on both edges.
    const int road_h = rng.uniform_int(h / 6, h / 3);
    const int road_top = rng.uniform_int(h / 3, std::max(h / 3, h - road_h - h / 8));
    const int walk_h = rng.uniform_int(std::max(1, h / 24), std::max(2, h / 10));
    if (k > 6) {
        g.fill_rect(road_top - walk_h, 0, road_top, w, 6);
        g.fill_rect(road_top + road_h, 0, road_top + road_h + walk_h, w, 6);
    }
    if (k > 5) {
        g.fill_rect(road_top, 0, road_top + road_h, w, 5);
    }

    // Roadline stripes (class 4) inside the band.
    if (k > 4 && k > 5) {
        const int n_lines = rng.uniform_int(1, 3);
        const int line_h = std::max(1, h / 64);
        for (int i = 0; i < n_lines; ++i) {
            const int off = rng.uniform_int(0, std::max(0, road_h - line_h));
            g.fill_rect(road_top + off, 0, road_top + off + line_h, w, 4);
        }
    }

    // Vegetation patches (class 7): ellipses below the road.
    if (k > 7) {
        const int n_veg = rng.uniform_int(1, 4);
        for (int i = 0; i < n_veg; ++i) {
            const int ry = rng.uniform_int(std::max(2, h / 16), std::max(3, h / 6));
            const int rx = rng.uniform_int(std::max(2, w / 16), std::max(3, w / 6));
            const int cy = rng.uniform_int(std::min(h - 1, road_top + road_h + walk_h), h - 1);
            const int cx = rng.uniform_int(0, w - 1);
            for_each_ellipse_pixel(h, w, cy, cx, ry, rx, [&](int y, int x) {
                g.labels[static_cast<std::size_t>(y) * w + x] = 7;
            });
        }
    }

    // Fence segments (class 2): thin bars.
    if (k > 2) {
        const int n_fences = rng.uniform_int(1, 3);
        for (int i = 0; i < n_fences; ++i) {
            const int t = std::max(1, h / 32);
            if (rng.bernoulli(0.5)) {
                const int y0 = rng.uniform_int(0, h - 1);
                const int x0 = rng.uniform_int(0, w - 1);
                g.fill_rect(y0, x0, y0 + t, x0 + rng.uniform_int(w / 6, w / 2), 2);
            } else {
                const int y0 = rng.uniform_int(0, h - 1);
                const int x0 = rng.uniform_int(0, w - 1);
                g.fill_rect(y0, x0, y0 + rng.uniform_int(h / 6, h / 2), x0 + t, 2);
            }
        }
    }

    // Others (class 3): a couple of small boxes.
    if (k > 3) {
        const int n_other = rng.uniform_int(1, 2);
        for (int i = 0; i < n_other; ++i) {
            const int bw = rng.uniform_int(std::max(2, w / 16), std::max(3, w / 8));
            const int bh = rng.uniform_int(std::max(2, h / 16), std::max(3, h / 8));
            const int y0 = rng.uniform_int(0, h - 1);
            const int x0 = rng.uniform_int(0, w - 1);
            g.fill_rect(y0, x0, y0 + bh, x0 + bw, 3);
        }
    }

    // Clamp anything painted above K (possible only when K <= a painted class).
    for (auto& v : g.labels) {
        if (v >= k) v = 0;
    }
    return SemanticMap(h, w, k, std::move(g.labels));
}

ImageBuffer render_static(const SemanticMap& m, Rng& rng) {
    const int h = m.height();
    const int w = m.width();
    std::vector<std::uint8_t> px(static_cast<std::size_t>(h) * w);
    for (std::size_t i = 0; i < px.size(); ++i) {
        const int base = kClassBase[m.labels()[i]];
        px[i] = static_cast<std::uint8_t>(std::clamp(base + rng.uniform_int(-8, 8), 0, 255));
    }
    // Speckle texture: high-contrast dots give the corner detector something
    // to latch onto, and their per-landmark placement is what makes visual
    // codes discriminative.
    const int n_dots = (h * w) / 50;
    for (int d = 0; d < n_dots; ++d) {
        const int y = rng.uniform_int(0, h - 1);
        const int x = rng.uniform_int(0, w - 1);
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const int sign = rng.bernoulli(0.5) ? 1 : -1;
        px[i] = static_cast<std::uint8_t>(
            std::clamp(kClassBase[m.labels()[i]] + sign * 45, 16, 245));
    }
    return ImageBuffer(h, w, 1, std::move(px));
}

}  // namespace

void validate_world_spec(const WorldSpec& spec) {
    if (spec.num_landmarks < 1) {
        throw Error("WorldSpec.num_landmarks: must be >= 1, got " + std::to_string(spec.num_landmarks));
    }
    if (spec.num_classes < 2 || spec.num_classes > 8) {
        throw Error("WorldSpec.num_classes: the synthetic palette supports 2..8 classes, got " +
                    std::to_string(spec.num_classes));
    }
    if (spec.height < 32 || spec.width < 32) {
        throw Error("WorldSpec: the generator needs at least 32x32 pixels, got " +
                    std::to_string(spec.height) + "x" + std::to_string(spec.width));
    }
    if (spec.min_dynamic_objects < 0 || spec.max_dynamic_objects < spec.min_dynamic_objects) {
        throw Error("WorldSpec.dynamic_objects: range [" + std::to_string(spec.min_dynamic_objects) +
                    "," + std::to_string(spec.max_dynamic_objects) + "] is invalid");
    }
}

void validate_noise_spec(const NoiseSpec& noise) {
    if (!(noise.label_flip_p >= 0.0 && noise.label_flip_p <= 1.0)) {
        throw Error("NoiseSpec.label_flip_p: must be in [0,1], got " + std::to_string(noise.label_flip_p));
    }
    if (!(noise.prob_temperature >= 0.0 && noise.prob_temperature <= 1.0)) {
        throw Error("NoiseSpec.prob_temperature: must be in [0,1], got " +
                    std::to_string(noise.prob_temperature));
    }
    if (!(noise.image_noise_sigma >= 0.0)) {
        throw Error("NoiseSpec.image_noise_sigma: must be >= 0, got " +
                    std::to_string(noise.image_noise_sigma));
    }
}

LandmarkSample generate_landmark(const WorldSpec& spec, std::uint64_t id) {
    validate_world_spec(spec);
    Rng rng(mix_seed(spec.seed, id));
    const int h = spec.height;
    const int w = spec.width;

    SemanticMap semantics = paint_layout(spec, rng);
    ImageBuffer static_image = render_static(semantics, rng);

    // Dynamic sprites: opaque rectangles and ellipses at intensities distinct
    // from every class base.
    std::vector<std::uint8_t> dyn = static_image.samples();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(h) * w, 0);
    const int n_sprites = rng.uniform_int(spec.min_dynamic_objects, spec.max_dynamic_objects);
    struct Sprite {
        int cy, cx, ry, rx;
    };
    std::vector<Sprite> sprites;
    for (int s = 0; s < n_sprites; ++s) {
        const std::uint8_t intensity =
            static_cast<std::uint8_t>(kSpriteIntensity[rng.uniform_int(0, 8)]);
        const int ry = rng.uniform_int(std::max(2, h / 16), std::max(3, h / 6));
        const int rx = rng.uniform_int(std::max(2, w / 16), std::max(3, w / 6));
        const int cy = rng.uniform_int(0, h - 1);
        const int cx = rng.uniform_int(0, w - 1);
        sprites.push_back({cy, cx, ry, rx});
        // A sprite pixel must differ from the static pixel it covers (the
        // mask is defined as the set of changed pixels); where the fill value
        // happens to match a textured background pixel, nudge it by one.
        const auto put = [&](int y, int x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const std::uint8_t bg = static_image.samples()[i];
            dyn[i] = intensity != bg ? intensity
                                     : static_cast<std::uint8_t>(intensity < 255 ? intensity + 1
                                                                                 : intensity - 1);
            mask[i] = 1;
        };
        if (rng.bernoulli(0.5)) {
            for (int y = std::max(0, cy - ry); y <= std::min(h - 1, cy + ry); ++y) {
                for (int x = std::max(0, cx - rx); x <= std::min(w - 1, cx + rx); ++x) put(y, x);
            }
        } else {
            for_each_ellipse_pixel(h, w, cy, cx, ry, rx, put);
        }
    }

    // Before shadows, the dynamic image must differ from the static one on
    // exactly the masked pixels.
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const bool differs = dyn[i] != static_image.samples()[i];
        if (differs != (mask[i] != 0)) {
            std::ostringstream os;
            os << "generate_landmark: dynamic mask mismatch at [r=" << i / w << ",c=" << i % w
               << "] (landmark " << id << ")";
            throw Error(os.str());
        }
    }

    if (spec.shadow) {
        for (const Sprite& sp : sprites) {
            const int scy = sp.cy + sp.ry / 2 + 1;
            const int scx = sp.cx + sp.rx / 2 + 1;
            for_each_ellipse_pixel(h, w, scy, scx, sp.ry, sp.rx, [&](int y, int x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (mask[i]) return;  // shadows fall on the background only
                dyn[i] = static_cast<std::uint8_t>(std::lround(kShadowFactor * dyn[i]));
            });
        }
    }

    return LandmarkSample{id,
                          std::move(static_image),
                          ImageBuffer(h, w, 1, std::move(dyn)),
                          semantics,
                          one_hot(semantics),
                          std::move(mask)};
}

std::vector<LandmarkSample> generate_world(const WorldSpec& spec) {
    validate_world_spec(spec);
    std::vector<LandmarkSample> out;
    out.reserve(static_cast<std::size_t>(spec.num_landmarks));
    for (int i = 0; i < spec.num_landmarks; ++i) {
        out.push_back(generate_landmark(spec, static_cast<std::uint64_t>(i)));
    }
    return out;
}

ProbabilityMap degrade_labels(const SemanticMap& labels, const NoiseSpec& noise, std::uint64_t seed) {
    validate_noise_spec(noise);
    Rng rng(seed);
    const int k = labels.num_classes();
    const double t = noise.prob_temperature;
    const float off_value = static_cast<float>(t / k);
    const float on_value = static_cast<float>(1.0 - t + t / k);

    std::vector<float> probs(labels.labels().size() * static_cast<std::size_t>(k), off_value);
    for (std::size_t i = 0; i < labels.labels().size(); ++i) {
        int cls = labels.labels()[i];
        if (noise.label_flip_p > 0.0 && rng.bernoulli(noise.label_flip_p)) {
            cls = (cls + rng.uniform_int(1, k - 1)) % k;
        }
        probs[i * k + cls] = on_value;
    }
    return ProbabilityMap(labels.height(), labels.width(), k, std::move(probs));
}

ImageBuffer degrade_image(const ImageBuffer& img, const std::vector<std::uint8_t>& dynamic_mask,
                          const NoiseSpec& noise, std::uint64_t seed) {
    validate_noise_spec(noise);
    const std::size_t pixels = static_cast<std::size_t>(img.height()) * img.width();
    if (noise.artifact_blur && dynamic_mask.size() != pixels) {
        std::ostringstream os;
        os << "degrade_image: dynamic_mask has " << dynamic_mask.size() << " entries, expected "
           << pixels;
        throw Error(os.str());
    }
    Rng rng(seed);
    std::vector<std::uint8_t> out = img.samples();
    if (noise.image_noise_sigma > 0.0) {
        for (auto& v : out) {
            const double noisy = v + noise.image_noise_sigma * rng.gaussian();
            v = static_cast<std::uint8_t>(std::clamp<long>(std::lround(noisy), 0, 255));
        }
    }
    if (noise.artifact_blur) {
        const int h = img.height();
        const int w = img.width();
        const int ch = img.channels();
        std::vector<std::uint8_t> blurred = out;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!dynamic_mask[static_cast<std::size_t>(y) * w + x]) continue;
                for (int c = 0; c < ch; ++c) {
                    int sum = 0;
                    int taps = 0;
                    for (int dy = -2; dy <= 2; ++dy) {
                        for (int dx = -2; dx <= 2; ++dx) {
                            const int ny = y + dy;
                            const int nx = x + dx;
                            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
                            sum += out[(static_cast<std::size_t>(ny) * w + nx) * ch + c];
                            ++taps;
                        }
                    }
                    blurred[(static_cast<std::size_t>(y) * w + x) * ch + c] =
                        static_cast<std::uint8_t>((sum + taps / 2) / taps);
                }
            }
        }
        out = std::move(blurred);
    }
    return ImageBuffer(img.height(), img.width(), img.channels(), std::move(out));
}

DegradedSample degrade(const LandmarkSample& sample, const NoiseSpec& noise, std::uint64_t seed) {
    return DegradedSample{
        degrade_labels(sample.static_semantics, noise, mix_seed(seed, 1)),
        degrade_image(sample.static_image, sample.dynamic_mask, noise, mix_seed(seed, 2))};
}

}  // namespace mmvpr
