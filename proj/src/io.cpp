#include "mmvpr/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mmvpr/error.hpp"

namespace mmvpr {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string ctx(const fs::path& path, const std::string& msg) {
    return path.string() + ": " + msg;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ctx(path, "cannot open for writing"));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ctx(path, "write failed"));
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ctx(path, "cannot open file"));
    std::ostringstream os;
    os << in.rdbuf();
    return std::move(os).str();
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

// Bounds-checked little-endian cursor.
struct Reader {
    const fs::path& path;
    const std::string& data;
    std::size_t pos = 0;

    void need(std::size_t n, const char* what) {
        if (pos + n > data.size()) {
            std::ostringstream os;
            os << "truncated file: need " << n << " byte(s) for " << what << " at offset " << pos
               << ", have " << data.size() - pos;
            throw Error(ctx(path, os.str()));
        }
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
        pos += 8;
        return v;
    }
    float f32(const char* what) {
        const std::uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    void magic(const char* expected) {
        need(4, "magic");
        if (data.compare(pos, 4, expected) != 0) {
            throw Error(ctx(path, std::string("bad magic, expected \"") + expected + "\", got \"" +
                                      data.substr(pos, 4) + "\""));
        }
        pos += 4;
    }
    void version(std::uint32_t expected) {
        const std::uint32_t v = u32("version");
        if (v != expected) {
            std::ostringstream os;
            os << "unsupported format version " << v << ", expected " << expected;
            throw Error(ctx(path, os.str()));
        }
    }
    void done() {
        if (pos != data.size()) {
            std::ostringstream os;
            os << "trailing bytes: " << data.size() - pos << " after offset " << pos;
            throw Error(ctx(path, os.str()));
        }
    }
};

// --- PGM/PPM -----------------------------------------------------------

struct PnmHeader {
    int channels = 1;
    int width = 0;
    int height = 0;
    std::size_t payload = 0;
};

int pnm_int(Reader& r) {
    // Skips whitespace and '#' comments, then reads a decimal token.
    while (r.pos < r.data.size()) {
        const char c = r.data[r.pos];
        if (c == '#') {
            while (r.pos < r.data.size() && r.data[r.pos] != '\n') ++r.pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++r.pos;
        } else {
            break;
        }
    }
    if (r.pos >= r.data.size() || r.data[r.pos] < '0' || r.data[r.pos] > '9') {
        throw Error(ctx(r.path, "malformed header: expected a decimal value"));
    }
    long v = 0;
    while (r.pos < r.data.size() && r.data[r.pos] >= '0' && r.data[r.pos] <= '9') {
        v = v * 10 + (r.data[r.pos] - '0');
        if (v > 1 << 24) throw Error(ctx(r.path, "malformed header: value out of range"));
        ++r.pos;
    }
    return static_cast<int>(v);
}

PnmHeader parse_pnm(Reader& r) {
    r.need(2, "magic");
    PnmHeader h;
    if (r.data[r.pos] != 'P' || (r.data[r.pos + 1] != '5' && r.data[r.pos + 1] != '6')) {
        throw Error(ctx(r.path, "bad magic, expected \"P5\" or \"P6\", got \"" + r.data.substr(r.pos, 2) + "\""));
    }
    h.channels = r.data[r.pos + 1] == '5' ? 1 : 3;
    r.pos += 2;
    h.width = pnm_int(r);
    h.height = pnm_int(r);
    const int maxval = pnm_int(r);
    if (maxval != 255) {
        throw Error(ctx(r.path, "maxval must be 255, got " + std::to_string(maxval)));
    }
    if (h.width < 1 || h.height < 1) {
        throw Error(ctx(r.path, "image dimensions must be >= 1"));
    }
    r.need(1, "header terminator");
    ++r.pos;  // single whitespace byte before the payload
    h.payload = static_cast<std::size_t>(h.width) * h.height * h.channels;
    r.need(h.payload, "pixel payload");
    return h;
}

std::string pnm_bytes(int channels, int height, int width, const std::uint8_t* samples) {
    std::string out = channels == 1 ? "P5" : "P6";
    out += "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(samples),
               static_cast<std::size_t>(height) * width * channels);
    return out;
}

}  // namespace

void write_label_map(const fs::path& path, const SemanticMap& m) {
    if (m.num_classes() > 256) {
        throw Error(ctx(path, "label-map format holds class indices in one byte; K=" +
                                  std::to_string(m.num_classes()) + " exceeds 256"));
    }
    std::vector<std::uint8_t> bytes(m.labels().size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(m.labels()[i]);
    write_file(path, pnm_bytes(1, m.height(), m.width(), bytes.data()));
}

SemanticMap read_label_map(const fs::path& path, int num_classes) {
    const std::string data = read_file(path);
    Reader r{path, data};
    const PnmHeader h = parse_pnm(r);
    if (h.channels != 1) throw Error(ctx(path, "label map must be a P5 (grayscale) file"));
    std::vector<std::uint16_t> labels(h.payload);
    for (std::size_t i = 0; i < h.payload; ++i) {
        const std::uint8_t v = static_cast<std::uint8_t>(data[r.pos + i]);
        if (v >= num_classes) {
            std::ostringstream os;
            os << "label " << static_cast<int>(v) << " at [r=" << i / h.width << ",c=" << i % h.width
               << "] out of range [0," << num_classes << ")";
            throw Error(ctx(path, os.str()));
        }
        labels[i] = v;
    }
    r.pos += h.payload;
    r.done();
    return SemanticMap(h.height, h.width, num_classes, std::move(labels));
}

void write_image(const fs::path& path, const ImageBuffer& img) {
    write_file(path, pnm_bytes(img.channels(), img.height(), img.width(), img.samples().data()));
}

ImageBuffer read_image(const fs::path& path) {
    const std::string data = read_file(path);
    Reader r{path, data};
    const PnmHeader h = parse_pnm(r);
    std::vector<std::uint8_t> samples(h.payload);
    std::memcpy(samples.data(), data.data() + r.pos, h.payload);
    r.pos += h.payload;
    r.done();
    return ImageBuffer(h.height, h.width, h.channels, std::move(samples));
}

void write_prob_map(const fs::path& path, const ProbabilityMap& m) {
    std::string out = "MMPM";
    put_u32(out, 1);
    put_u32(out, static_cast<std::uint32_t>(m.height()));
    put_u32(out, static_cast<std::uint32_t>(m.width()));
    put_u32(out, static_cast<std::uint32_t>(m.num_classes()));
    for (float v : m.probs()) put_f32(out, v);
    write_file(path, out);
}

ProbabilityMap read_prob_map(const fs::path& path) {
    const std::string data = read_file(path);
    Reader r{path, data};
    r.magic("MMPM");
    r.version(1);
    const std::uint32_t h = r.u32("height");
    const std::uint32_t w = r.u32("width");
    const std::uint32_t k = r.u32("num_classes");
    if (h < 1 || w < 1 || k < 2 || h > (1u << 20) || w > (1u << 20) || k > (1u << 16)) {
        throw Error(ctx(path, "implausible dimensions in header"));
    }
    const std::size_t n = static_cast<std::size_t>(h) * w * k;
    r.need(n * 4, "probability payload");
    std::vector<float> probs(n);
    for (std::size_t i = 0; i < n; ++i) probs[i] = r.f32("probability");
    r.done();
    try {
        return ProbabilityMap(static_cast<int>(h), static_cast<int>(w), static_cast<int>(k),
                              std::move(probs));
    } catch (const Error& e) {
        throw Error(ctx(path, e.what()));
    }
}

void write_vocab(const fs::path& path, const Vocabulary& vocab) {
    validate_vocabulary(vocab);
    std::string out = "MMVC";
    put_u32(out, 1);
    put_u32(out, static_cast<std::uint32_t>(vocab.words.size()));
    put_u64(out, vocab.seed);
    put_u32(out, vocab.idf.empty() ? 0 : 1);
    for (const BinaryDescriptor& wde : vocab.words) {
        for (int i = 0; i < 4; ++i) put_u64(out, wde.bits[static_cast<std::size_t>(i)]);
    }
    for (double v : vocab.idf) put_f32(out, static_cast<float>(v));
    write_file(path, out);
}

Vocabulary read_vocab(const fs::path& path) {
    const std::string data = read_file(path);
    Reader r{path, data};
    r.magic("MMVC");
    r.version(1);
    const std::uint32_t w = r.u32("word count");
    if (w < 1 || w > (1u << 24)) throw Error(ctx(path, "implausible word count"));
    Vocabulary vocab;
    vocab.seed = r.u64("seed");
    const std::uint32_t has_idf = r.u32("idf flag");
    if (has_idf > 1) throw Error(ctx(path, "idf flag must be 0 or 1"));
    vocab.words.resize(w);
    for (std::uint32_t i = 0; i < w; ++i) {
        for (int j = 0; j < 4; ++j) vocab.words[i].bits[static_cast<std::size_t>(j)] = r.u64("word bits");
    }
    if (has_idf) {
        vocab.idf.resize(w);
        for (std::uint32_t i = 0; i < w; ++i) vocab.idf[i] = r.f32("idf");
    }
    r.done();
    try {
        validate_vocabulary(vocab);
    } catch (const Error& e) {
        throw Error(ctx(path, e.what()));
    }
    return vocab;
}

namespace {

// Per-record code invariants shared by the index writer and reader: BowCode
// norms and non-negative SPM counts.
void check_index_codes(const fs::path& path, const std::vector<LandmarkEntry>& entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        try {
            validate_bow_code(entries[i].g);
        } catch (const Error& e) {
            throw Error(ctx(path, "record " + std::to_string(i) + ": " + e.what()));
        }
        for (std::size_t j = 0; j < entries[i].h.vector.size(); ++j) {
            if (!(entries[i].h.vector[j] >= 0.0)) {
                std::ostringstream os;
                os << "record " << i << ": SpmCode.vector[" << j << "] = " << entries[i].h.vector[j]
                   << " is negative";
                throw Error(ctx(path, os.str()));
            }
        }
    }
}

}  // namespace

void write_index(const fs::path& path, const SpmConfig& cfg, const std::vector<LandmarkEntry>& entries) {
    validate_index(entries);
    check_index_codes(path, entries);
    const std::size_t g_dim = entries.empty() ? 0 : entries[0].g.vector.size();
    const std::size_t h_dim = spm_code_length(cfg.levels, cfg.num_classes);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].h.vector.size() != h_dim || entries[i].h.config.levels != cfg.levels ||
            entries[i].h.config.num_classes != cfg.num_classes) {
            std::ostringstream os;
            os << "record " << i << " SPM code does not match the index config (L=" << cfg.levels
               << ", K=" << cfg.num_classes << ")";
            throw Error(ctx(path, os.str()));
        }
    }
    std::string out = "MMVI";
    put_u32(out, 1);
    put_u64(out, entries.size());
    put_u32(out, static_cast<std::uint32_t>(g_dim));
    put_u32(out, static_cast<std::uint32_t>(h_dim));
    put_u32(out, static_cast<std::uint32_t>(cfg.levels));
    put_u32(out, static_cast<std::uint32_t>(cfg.num_classes));
    for (const LandmarkEntry& e : entries) {
        put_u64(out, e.id);
        for (std::size_t i = 0; i < g_dim; ++i) put_f32(out, static_cast<float>(e.g.vector[i]));
        for (std::size_t i = 0; i < h_dim; ++i) put_f32(out, static_cast<float>(e.h.vector[i]));
    }
    write_file(path, out);
}

IndexFile read_index(const fs::path& path) {
    const std::string data = read_file(path);
    Reader r{path, data};
    r.magic("MMVI");
    r.version(1);
    const std::uint64_t n = r.u64("record count");
    const std::uint32_t g_dim = r.u32("g dimension");
    const std::uint32_t h_dim = r.u32("h dimension");
    const std::uint32_t levels = r.u32("SPM levels");
    const std::uint32_t k = r.u32("SPM classes");
    SpmConfig cfg(static_cast<int>(levels), static_cast<int>(k));
    if (h_dim != spm_code_length(cfg.levels, cfg.num_classes)) {
        std::ostringstream os;
        os << "h dimension " << h_dim << " inconsistent with L=" << levels << ", K=" << k
           << " (expected " << spm_code_length(cfg.levels, cfg.num_classes) << ")";
        throw Error(ctx(path, os.str()));
    }
    if (n > (1u << 24)) throw Error(ctx(path, "implausible record count"));
    IndexFile file{cfg, {}};
    file.entries.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t id = r.u64("record id");
        std::vector<double> g(g_dim);
        for (std::uint32_t j = 0; j < g_dim; ++j) g[j] = r.f32("g value");
        std::vector<double> h(h_dim);
        for (std::uint32_t j = 0; j < h_dim; ++j) h[j] = r.f32("h value");
        try {
            file.entries.push_back(LandmarkEntry{
                id, BowCode{FeatureVector(std::move(g))}, SpmCode{FeatureVector(std::move(h)), cfg}});
        } catch (const Error& e) {
            throw Error(ctx(path, "record " + std::to_string(i) + ": " + e.what()));
        }
    }
    r.done();
    try {
        validate_index(file.entries);
    } catch (const Error& e) {
        throw Error(ctx(path, e.what()));
    }
    check_index_codes(path, file.entries);
    return file;
}

void write_code(const fs::path& path, const FeatureVector& v) {
    std::string out = "MMFV";
    put_u32(out, 1);
    put_u64(out, v.size());
    for (std::size_t i = 0; i < v.size(); ++i) put_f32(out, static_cast<float>(v[i]));
    write_file(path, out);
}

FeatureVector read_code(const fs::path& path) {
    const std::string data = read_file(path);
    Reader r{path, data};
    r.magic("MMFV");
    r.version(1);
    const std::uint64_t n = r.u64("length");
    if (n > (1u << 28)) throw Error(ctx(path, "implausible vector length"));
    std::vector<double> values(n);
    for (std::uint64_t i = 0; i < n; ++i) values[i] = r.f32("value");
    r.done();
    try {
        return FeatureVector(std::move(values));
    } catch (const Error& e) {
        throw Error(ctx(path, e.what()));
    }
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
    json j;
    j["version"] = manifest.version;
    j["num_classes"] = manifest.num_classes;
    j["class_names"] = manifest.class_names;
    json lms = json::array();
    for (const ManifestRecord& r : manifest.landmarks) {
        lms.push_back({{"id", r.id},
                       {"static_image", r.static_image},
                       {"dynamic_image", r.dynamic_image},
                       {"label_map", r.label_map},
                       {"prob_map", r.prob_map},
                       {"dynamic_mask", r.dynamic_mask}});
    }
    j["landmarks"] = std::move(lms);
    write_file(path, j.dump(2) + "\n");
}

DatasetManifest read_manifest(const fs::path& path) {
    const std::string data = read_file(path);
    json j;
    try {
        j = json::parse(data);
    } catch (const json::exception& e) {
        throw Error(ctx(path, std::string("invalid JSON: ") + e.what()));
    }
    DatasetManifest m;
    try {
        m.version = j.at("version").get<int>();
        if (m.version != 1) {
            throw Error("unsupported manifest version " + std::to_string(m.version));
        }
        m.num_classes = j.at("num_classes").get<int>();
        m.class_names = j.at("class_names").get<std::vector<std::string>>();
        for (const json& lm : j.at("landmarks")) {
            ManifestRecord r;
            r.id = lm.at("id").get<std::uint64_t>();
            r.static_image = lm.at("static_image").get<std::string>();
            r.dynamic_image = lm.at("dynamic_image").get<std::string>();
            r.label_map = lm.at("label_map").get<std::string>();
            r.prob_map = lm.at("prob_map").get<std::string>();
            r.dynamic_mask = lm.at("dynamic_mask").get<std::string>();
            m.landmarks.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw Error(ctx(path, std::string("invalid manifest: ") + e.what()));
    } catch (const Error& e) {
        throw Error(ctx(path, e.what()));
    }
    if (m.num_classes < 2) {
        throw Error(ctx(path, "num_classes must be >= 2"));
    }
    if (m.class_names.size() != static_cast<std::size_t>(m.num_classes)) {
        throw Error(ctx(path, "class_names must list exactly num_classes entries"));
    }
    std::unordered_set<std::uint64_t> ids;
    const fs::path root = path.parent_path();
    for (const ManifestRecord& r : m.landmarks) {
        if (!ids.insert(r.id).second) {
            throw Error(ctx(path, "duplicate landmark id " + std::to_string(r.id)));
        }
        for (const std::string& rel :
             {r.static_image, r.dynamic_image, r.label_map, r.prob_map, r.dynamic_mask}) {
            if (!fs::exists(root / rel)) {
                throw Error(ctx(path, "referenced file does not exist: " + rel));
            }
        }
    }
    return m;
}

void write_dataset(const fs::path& dir, const std::vector<LandmarkSample>& samples,
                   const std::vector<std::string>& class_names) {
    if (samples.empty()) throw Error(ctx(dir, "cannot write an empty dataset"));
    const int k = samples[0].static_semantics.num_classes();
    if (class_names.size() != static_cast<std::size_t>(k)) {
        throw Error(ctx(dir, "class_names must list exactly K entries"));
    }
    fs::create_directories(dir);
    DatasetManifest manifest;
    manifest.num_classes = k;
    manifest.class_names = class_names;
    for (const LandmarkSample& s : samples) {
        char sub[32];
        std::snprintf(sub, sizeof sub, "lm%05llu", static_cast<unsigned long long>(s.id));
        fs::create_directories(dir / sub);
        ManifestRecord r;
        r.id = s.id;
        r.static_image = std::string(sub) + "/static.pgm";
        r.dynamic_image = std::string(sub) + "/dynamic.pgm";
        r.label_map = std::string(sub) + "/labels.pgm";
        r.prob_map = std::string(sub) + "/probs.mmpm";
        r.dynamic_mask = std::string(sub) + "/mask.pgm";
        write_image(dir / r.static_image, s.static_image);
        write_image(dir / r.dynamic_image, s.dynamic_image);
        write_label_map(dir / r.label_map, s.static_semantics);
        write_prob_map(dir / r.prob_map, s.static_probs);
        std::vector<std::uint8_t> mask_px(s.dynamic_mask.size());
        for (std::size_t i = 0; i < mask_px.size(); ++i) mask_px[i] = s.dynamic_mask[i] ? 255 : 0;
        write_image(dir / r.dynamic_mask,
                    ImageBuffer(s.static_image.height(), s.static_image.width(), 1, std::move(mask_px)));
        manifest.landmarks.push_back(std::move(r));
    }
    write_manifest(dir / "manifest.json", manifest);
}

DatasetManifest load_manifest_of(const fs::path& dir) { return read_manifest(dir / "manifest.json"); }

std::vector<LandmarkSample> load_dataset(const fs::path& dir) {
    const DatasetManifest manifest = load_manifest_of(dir);
    std::vector<LandmarkSample> samples;
    samples.reserve(manifest.landmarks.size());
    for (const ManifestRecord& r : manifest.landmarks) {
        ImageBuffer static_image = read_image(dir / r.static_image);
        ImageBuffer dynamic_image = read_image(dir / r.dynamic_image);
        SemanticMap labels = read_label_map(dir / r.label_map, manifest.num_classes);
        ProbabilityMap probs = read_prob_map(dir / r.prob_map);
        ImageBuffer mask_img = read_image(dir / r.dynamic_mask);
        const auto same_dims = [&](int h, int w) {
            return h == static_image.height() && w == static_image.width();
        };
        if (!same_dims(dynamic_image.height(), dynamic_image.width()) ||
            !same_dims(labels.height(), labels.width()) || !same_dims(probs.height(), probs.width()) ||
            !same_dims(mask_img.height(), mask_img.width())) {
            throw Error(ctx(dir / "manifest.json",
                            "landmark " + std::to_string(r.id) + ": grids disagree on dimensions"));
        }
        if (probs.num_classes() != manifest.num_classes) {
            throw Error(ctx(dir / r.prob_map, "K differs from the manifest"));
        }
        std::vector<std::uint8_t> mask(mask_img.samples().size());
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mask_img.samples()[i] ? 1 : 0;
        samples.push_back(LandmarkSample{r.id, std::move(static_image), std::move(dynamic_image),
                                         std::move(labels), std::move(probs), std::move(mask)});
    }
    return samples;
}

}  // namespace mmvpr
