#include "mmvpr/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mmvpr/error.hpp"
#include "mmvpr/io.hpp"
#include "mmvpr/rng.hpp"
#include "mmvpr/seg_metrics.hpp"
#include "mmvpr/img_metrics.hpp"

namespace mmvpr {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

// The CSV side of every table: to a file when --csv was given, otherwise to
// stdout right after the human-readable table.
void emit_csv(const std::string& csv_path, const std::string& content, std::ostream& out) {
    if (csv_path.empty()) {
        out << "\n" << content;
        return;
    }
    std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(csv_path + ": cannot open for writing");
    f << content;
}

struct KV {
    std::ostream& out;
    explicit KV(std::ostream& o) : out(o) { out << "config:\n"; }
    void operator()(const std::string& key, const std::string& value) {
        out << "  " << key << " = " << value << "\n";
    }
    void operator()(const std::string& key, double value) { (*this)(key, fmt(value)); }
    void operator()(const std::string& key, std::uint64_t value) { (*this)(key, std::to_string(value)); }
    void operator()(const std::string& key, int value) { (*this)(key, std::to_string(value)); }
    void operator()(const std::string& key, bool value) { (*this)(key, value ? std::string("true") : std::string("false")); }
};

struct NoiseOptions {
    NoiseSpec spec;
    std::string image_role = "static";
};

void add_noise_options(CLI::App* cmd, NoiseOptions& n, bool with_role) {
    cmd->add_option("--label-flip-p", n.spec.label_flip_p, "Per-pixel label flip probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--prob-temperature", n.spec.prob_temperature,
                    "Uniform mixture weight softening the one-hot probabilities")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--image-noise-sigma", n.spec.image_noise_sigma,
                    "Gaussian intensity noise sigma (dynamic/degraded roles)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--artifact-blur", n.spec.artifact_blur,
                  "5x5 box blur inside former dynamic regions (dynamic/degraded roles)");
    if (with_role) {
        cmd->add_option("--image-role", n.image_role,
                        "Visual input: static (clean), dynamic, or degraded (static + noise)")
            ->check(CLI::IsMember({"static", "dynamic", "degraded"}));
    }
}

void echo_noise(KV& kv, const NoiseOptions& n, bool with_role) {
    kv("label_flip_p", n.spec.label_flip_p);
    kv("prob_temperature", n.spec.prob_temperature);
    kv("image_noise_sigma", n.spec.image_noise_sigma);
    kv("artifact_blur", n.spec.artifact_blur);
    if (with_role) kv("image_role", n.image_role);
}

/// Visual input of one sample under a role. The noise spec applies to the
/// dynamic and degraded roles; the static role stays clean.
ImageBuffer visual_input(const LandmarkSample& s, const NoiseOptions& n, std::uint64_t seed) {
    if (n.image_role == "static") return s.static_image;
    if (n.image_role == "dynamic") return degrade_image(s.dynamic_image, s.dynamic_mask, n.spec, seed);
    return degrade_image(s.static_image, s.dynamic_mask, n.spec, seed);
}

std::vector<std::string> default_class_names(int k) {
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back(kClassNames[static_cast<std::size_t>(i)]);
    return names;
}

struct RecallRow {
    std::string label;
    std::size_t cutoff;
    double recall;
};

/// Rows for the requested cutoffs (default 1, 5, 10) plus the top-1% cutoff,
/// which is always reported last. Arbitrary cutoffs read off the full curve.
std::vector<RecallRow> recall_rows(const RecallReport& r, const std::vector<std::size_t>& cutoffs) {
    std::vector<RecallRow> rows;
    for (const std::size_t k : cutoffs) {
        const std::size_t idx = std::min(k, r.curve.size()) - 1;
        rows.push_back({"R@" + std::to_string(k), k, r.curve[idx]});
    }
    rows.push_back({"R@1%", r.top1pct_cutoff, r.recall_at.at(r.top1pct_cutoff)});
    return rows;
}

void print_recall_table(std::ostream& out, const RecallReport& r,
                        const std::vector<std::size_t>& cutoffs) {
    out << "cutoff      k  recall\n";
    for (const RecallRow& row : recall_rows(r, cutoffs)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-8s %4zu  %s\n", row.label.c_str(), row.cutoff,
                      fmt(row.recall).c_str());
        out << buf;
    }
}

std::string recall_csv(const RecallReport& r, const std::vector<std::size_t>& cutoffs) {
    std::ostringstream os;
    os << "cutoff_label,cutoff,recall\n";
    for (const RecallRow& row : recall_rows(r, cutoffs)) {
        os << row.label << "," << row.cutoff << "," << fmt(row.recall) << "\n";
    }
    return os.str();
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
    std::string out_dir;
    WorldSpec spec;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("synth"));
    kv("out", a.out_dir);
    kv("seed", a.spec.seed);
    kv("height", a.spec.height);
    kv("width", a.spec.width);
    kv("classes", a.spec.num_classes);
    kv("landmarks", a.spec.num_landmarks);
    kv("dyn_min", a.spec.min_dynamic_objects);
    kv("dyn_max", a.spec.max_dynamic_objects);
    kv("shadow", a.spec.shadow);

    const std::vector<LandmarkSample> samples = generate_world(a.spec);
    write_dataset(a.out_dir, samples, default_class_names(a.spec.num_classes));
    out << "wrote " << samples.size() << " landmarks to " << a.out_dir << "\n";
    return 0;
}

// --- build-vocab -----------------------------------------------------------

struct BuildVocabArgs {
    std::string dataset;
    std::string out_file;
    int words = 1000;
    std::uint64_t seed = 1;
    int max_iters = 50;
    int max_kp = 500;
    int threshold = 20;
    bool idf = false;
    NoiseOptions noise;
};

int cmd_build_vocab(const BuildVocabArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("build-vocab"));
    kv("dataset", a.dataset);
    kv("out", a.out_file);
    kv("words", a.words);
    kv("seed", a.seed);
    kv("max_iters", a.max_iters);
    kv("max_kp", a.max_kp);
    kv("threshold", a.threshold);
    kv("idf", a.idf);
    echo_noise(kv, a.noise, true);

    const std::vector<LandmarkSample> samples = load_dataset(a.dataset);
    std::vector<std::vector<BinaryDescriptor>> per_image;
    std::vector<BinaryDescriptor> pool;
    for (const LandmarkSample& s : samples) {
        const ImageBuffer img = visual_input(s, a.noise, mix_seed(a.seed, s.id));
        const ImageBuffer gray = to_gray(img);
        std::vector<BinaryDescriptor> descs;
        for (const Keypoint& kp : detect_keypoints(gray, a.max_kp, a.threshold)) {
            descs.push_back(describe(gray, kp));
        }
        pool.insert(pool.end(), descs.begin(), descs.end());
        per_image.push_back(std::move(descs));
    }
    Vocabulary vocab = build_vocab(pool, a.words, a.seed, a.max_iters);
    if (a.idf) vocab.idf = compute_idf(vocab, per_image);
    write_vocab(a.out_file, vocab);
    out << "clustered " << pool.size() << " descriptors from " << samples.size() << " images into "
        << vocab.size() << " words -> " << a.out_file << "\n";
    return 0;
}

// --- index -----------------------------------------------------------------

struct IndexArgs {
    std::string dataset;
    std::string vocab_file;
    std::string out_file;
    int levels = 2;
    std::string source = "ground-truth";
    std::uint64_t seed = 1;
    int max_kp = 500;
    int threshold = 20;
    bool use_idf = false;
    NoiseOptions noise;
};

int cmd_index(const IndexArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("index"));
    kv("dataset", a.dataset);
    kv("vocab", a.vocab_file);
    kv("out", a.out_file);
    kv("levels", a.levels);
    kv("source", a.source);
    kv("seed", a.seed);
    kv("max_kp", a.max_kp);
    kv("threshold", a.threshold);
    kv("use_idf", a.use_idf);
    echo_noise(kv, a.noise, false);

    const std::vector<LandmarkSample> samples = load_dataset(a.dataset);
    const Vocabulary vocab = read_vocab(a.vocab_file);
    const DatasetManifest manifest = load_manifest_of(a.dataset);
    const SpmConfig cfg(a.levels, manifest.num_classes);
    const BowParams bp{a.max_kp, a.threshold, a.use_idf};

    std::vector<LandmarkEntry> entries;
    for (const LandmarkSample& s : samples) {
        if (a.source == "ground-truth") {
            entries.push_back(LandmarkEntry{s.id, encode_bow(s.static_image, vocab, bp),
                                            encode_spm(s.static_semantics, cfg)});
        } else {
            const DegradedSample d = degrade(s, a.noise.spec, mix_seed(a.seed, s.id));
            entries.push_back(LandmarkEntry{s.id, encode_bow(d.image, vocab, bp),
                                            encode_spm(argmax_map(d.probs), cfg)});
        }
    }
    write_index(a.out_file, cfg, entries);
    out << "indexed " << entries.size() << " landmarks -> " << a.out_file << "\n";
    return 0;
}

// --- query -------------------------------------------------------------------

struct QueryArgs {
    std::string index_file;
    std::string vocab_file;
    std::string image_path;
    std::string labels_path;
    std::string probs_path;
    double alpha = 0.5;
    std::size_t k = 10;
    int max_kp = 500;
    int threshold = 20;
    bool use_idf = false;
    std::string csv;
};

int cmd_query(const QueryArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("query"));
    kv("index", a.index_file);
    kv("vocab", a.vocab_file);
    kv("image", a.image_path);
    kv("labels", a.labels_path.empty() ? std::string("-") : a.labels_path);
    kv("probs", a.probs_path.empty() ? std::string("-") : a.probs_path);
    kv("alpha", a.alpha);
    kv("k", static_cast<std::uint64_t>(a.k));
    kv("max_kp", a.max_kp);
    kv("threshold", a.threshold);
    kv("use_idf", a.use_idf);

    if (a.labels_path.empty() == a.probs_path.empty()) {
        throw Error("query: exactly one of --labels and --probs is required");
    }
    const IndexFile index = read_index(a.index_file);
    if (index.entries.empty()) throw Error(a.index_file + ": index is empty");
    const Vocabulary vocab = read_vocab(a.vocab_file);
    const ImageBuffer image = read_image(a.image_path);
    const SemanticMap labels =
        a.labels_path.empty() ? argmax_map(read_prob_map(a.probs_path))
                              : read_label_map(a.labels_path, index.spm_config.num_classes);

    const BowParams bp{a.max_kp, a.threshold, a.use_idf};
    const QueryCodes codes{encode_bow(image, vocab, bp), encode_spm(labels, index.spm_config)};
    const auto ranking = query(index.entries, codes, a.k, FusionConfig(a.alpha));

    out << "rank          id  score\n";
    std::ostringstream csv;
    csv << "rank,id,score\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%4zu  %10llu  %s\n", i + 1,
                      static_cast<unsigned long long>(ranking[i].first), fmt(ranking[i].second).c_str());
        out << buf;
        csv << i + 1 << "," << ranking[i].first << "," << fmt(ranking[i].second) << "\n";
    }
    emit_csv(a.csv, csv.str(), out);
    return 0;
}

// --- eval-recall ---------------------------------------------------------------

struct EvalRecallArgs {
    std::string index_file;
    std::string vocab_file;
    std::string dataset;
    double alpha = 0.5;
    std::vector<std::size_t> cutoffs = {1, 5, 10};
    std::uint64_t seed = 1;
    int max_kp = 500;
    int threshold = 20;
    bool use_idf = false;
    NoiseOptions noise;
    std::string csv;
    std::string curve_csv;
};

std::vector<QuerySample> build_queries(const std::vector<LandmarkSample>& samples,
                                       const Vocabulary& vocab, const SpmConfig& cfg,
                                       const BowParams& bp, const NoiseOptions& noise,
                                       std::uint64_t seed) {
    std::vector<QuerySample> queries;
    queries.reserve(samples.size());
    for (const LandmarkSample& s : samples) {
        const ProbabilityMap probs =
            degrade_labels(s.static_semantics, noise.spec, mix_seed(seed, 2 * s.id));
        const ImageBuffer image = visual_input(s, noise, mix_seed(seed, 2 * s.id + 1));
        queries.push_back(QuerySample{
            QueryCodes{encode_bow(image, vocab, bp), encode_spm(argmax_map(probs), cfg)}, s.id});
    }
    return queries;
}

int cmd_eval_recall(const EvalRecallArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("eval-recall"));
    kv("index", a.index_file);
    kv("vocab", a.vocab_file);
    kv("dataset", a.dataset);
    kv("alpha", a.alpha);
    {
        std::ostringstream cs;
        for (std::size_t i = 0; i < a.cutoffs.size(); ++i) cs << (i ? "," : "") << a.cutoffs[i];
        kv("cutoffs", cs.str());
    }
    kv("seed", a.seed);
    kv("max_kp", a.max_kp);
    kv("threshold", a.threshold);
    kv("use_idf", a.use_idf);
    echo_noise(kv, a.noise, true);

    for (const std::size_t k : a.cutoffs) {
        if (k < 1) throw Error("eval-recall: cutoffs must be >= 1");
    }
    const IndexFile index = read_index(a.index_file);
    if (index.entries.empty()) throw Error(a.index_file + ": index is empty");
    const Vocabulary vocab = read_vocab(a.vocab_file);
    const std::vector<LandmarkSample> samples = load_dataset(a.dataset);
    const BowParams bp{a.max_kp, a.threshold, a.use_idf};

    const std::vector<QuerySample> queries =
        build_queries(samples, vocab, index.spm_config, bp, a.noise, a.seed);
    const RecallReport report = eval_recall(index.entries, queries, FusionConfig(a.alpha));

    print_recall_table(out, report, a.cutoffs);
    emit_csv(a.csv, recall_csv(report, a.cutoffs), out);
    if (!a.curve_csv.empty()) {
        std::ostringstream curve;
        curve << "k,recall\n";
        for (std::size_t i = 0; i < report.curve.size(); ++i) {
            curve << i + 1 << "," << fmt(report.curve[i]) << "\n";
        }
        std::ofstream f(a.curve_csv, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(a.curve_csv + ": cannot open for writing");
        f << curve.str();
    }
    return 0;
}

// --- eval-seg ------------------------------------------------------------------

struct EvalSegArgs {
    int num_classes = 8;
    std::vector<std::string> gt;
    std::vector<std::string> pred;
    std::string csv;
};

int cmd_eval_seg(const EvalSegArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("eval-seg"));
    kv("classes", a.num_classes);
    kv("pairs", static_cast<std::uint64_t>(a.gt.size()));

    if (a.gt.size() != a.pred.size() || a.gt.empty()) {
        throw Error("eval-seg: --gt and --pred need the same nonzero number of files");
    }
    ConfusionMatrix cm(a.num_classes);
    for (std::size_t i = 0; i < a.gt.size(); ++i) {
        const SemanticMap gt = read_label_map(a.gt[i], a.num_classes);
        const SemanticMap pred = read_label_map(a.pred[i], a.num_classes);
        const ConfusionMatrix pair_cm = confusion(gt, pred);
        for (int r = 0; r < a.num_classes; ++r) {
            for (int c = 0; c < a.num_classes; ++c) cm.add(r, c, pair_cm.at(r, c));
        }
    }
    const SegScores s = seg_scores(cm);

    out << "metric  value\n";
    out << "PA      " << fmt(s.pixel_accuracy) << "\n";
    out << "MPA     " << fmt(s.mean_pixel_accuracy) << "\n";
    out << "MIoU    " << fmt(s.mean_iou) << "\n";
    out << "FWIoU   " << fmt(s.freq_weighted_iou) << "\n";
    for (int c = 0; c < a.num_classes; ++c) {
        out << "IoU[" << c << "]  ";
        if (s.per_class_iou[static_cast<std::size_t>(c)]) {
            out << fmt(*s.per_class_iou[static_cast<std::size_t>(c)]);
        } else {
            out << "undefined";
        }
        out << "\n";
    }

    std::ostringstream csv;
    csv << "metric,value\n";
    csv << "pa," << fmt(s.pixel_accuracy) << "\n";
    csv << "mpa," << fmt(s.mean_pixel_accuracy) << "\n";
    csv << "miou," << fmt(s.mean_iou) << "\n";
    csv << "fwiou," << fmt(s.freq_weighted_iou) << "\n";
    for (int c = 0; c < a.num_classes; ++c) {
        csv << "iou_" << c << ",";
        if (s.per_class_iou[static_cast<std::size_t>(c)]) csv << fmt(*s.per_class_iou[static_cast<std::size_t>(c)]);
        csv << "\n";
    }
    emit_csv(a.csv, csv.str(), out);
    return 0;
}

// --- eval-img -------------------------------------------------------------------

struct EvalImgArgs {
    std::vector<std::string> ref;
    std::vector<std::string> cand;
    std::string csv;
};

int cmd_eval_img(const EvalImgArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("eval-img"));
    kv("pairs", static_cast<std::uint64_t>(a.ref.size()));

    if (a.ref.size() != a.cand.size() || a.ref.empty()) {
        throw Error("eval-img: --ref and --cand need the same nonzero number of files");
    }
    out << "pair  l1_pct    l2_pct    psnr       ssim\n";
    std::ostringstream csv;
    csv << "pair,ref,cand,l1_pct,l2_pct,psnr,ssim\n";
    double sum_l1 = 0.0, sum_l2 = 0.0, sum_psnr = 0.0, sum_ssim = 0.0;
    for (std::size_t i = 0; i < a.ref.size(); ++i) {
        const ImgScores s = img_scores(read_image(a.ref[i]), read_image(a.cand[i]));
        char buf[128];
        std::snprintf(buf, sizeof buf, "%4zu  %-8s  %-8s  %-9s  %s\n", i + 1, fmt(s.l1_pct, 4).c_str(),
                      fmt(s.l2_pct, 4).c_str(), fmt(s.psnr, 4).c_str(), fmt(s.ssim).c_str());
        out << buf;
        csv << i + 1 << "," << a.ref[i] << "," << a.cand[i] << "," << fmt(s.l1_pct, 4) << ","
            << fmt(s.l2_pct, 4) << "," << fmt(s.psnr, 4) << "," << fmt(s.ssim) << "\n";
        sum_l1 += s.l1_pct;
        sum_l2 += s.l2_pct;
        sum_psnr += s.psnr;
        sum_ssim += s.ssim;
    }
    const double n = static_cast<double>(a.ref.size());
    char buf[128];
    std::snprintf(buf, sizeof buf, "mean  %-8s  %-8s  %-9s  %s\n", fmt(sum_l1 / n, 4).c_str(),
                  fmt(sum_l2 / n, 4).c_str(), fmt(sum_psnr / n, 4).c_str(), fmt(sum_ssim / n).c_str());
    out << buf;
    csv << "mean,,," << fmt(sum_l1 / n, 4) << "," << fmt(sum_l2 / n, 4) << "," << fmt(sum_psnr / n, 4)
        << "," << fmt(sum_ssim / n) << "\n";
    emit_csv(a.csv, csv.str(), out);
    return 0;
}

// --- bench-coding ----------------------------------------------------------------

struct BenchArgs {
    std::string dataset;
    std::string vocab_file;
    std::vector<int> levels = {0, 2, 4, 6};
    int reps = 3;
    std::size_t max_queries = 0;  // 0 = all
    double alpha = 0.5;
    std::uint64_t seed = 1;
    int max_kp = 500;
    int threshold = 20;
    bool use_idf = false;
    NoiseOptions noise;
    std::string csv;
};

int cmd_bench_coding(const BenchArgs& a, std::ostream& out) {
    KV kv(out);
    kv("command", std::string("bench-coding"));
    kv("dataset", a.dataset);
    kv("vocab", a.vocab_file);
    {
        std::ostringstream ls;
        for (std::size_t i = 0; i < a.levels.size(); ++i) ls << (i ? "," : "") << a.levels[i];
        kv("levels", ls.str());
    }
    kv("reps", a.reps);
    kv("queries", static_cast<std::uint64_t>(a.max_queries));
    kv("alpha", a.alpha);
    kv("seed", a.seed);
    kv("max_kp", a.max_kp);
    kv("threshold", a.threshold);
    kv("use_idf", a.use_idf);
    echo_noise(kv, a.noise, true);

    if (a.reps < 1) throw Error("bench-coding: --reps must be >= 1");
    if (a.levels.empty()) throw Error("bench-coding: at least one L value is required");
    const std::vector<LandmarkSample> all_samples = load_dataset(a.dataset);
    const Vocabulary vocab = read_vocab(a.vocab_file);
    const DatasetManifest manifest = load_manifest_of(a.dataset);
    const BowParams bp{a.max_kp, a.threshold, a.use_idf};

    const std::size_t n_queries = a.max_queries == 0
                                      ? all_samples.size()
                                      : std::min(a.max_queries, all_samples.size());

    // Degraded query inputs, shared across all L so recall is comparable.
    struct QueryInput {
        std::uint64_t id;
        ImageBuffer image;
        SemanticMap labels;
    };
    std::vector<QueryInput> inputs;
    for (std::size_t i = 0; i < n_queries; ++i) {
        const LandmarkSample& s = all_samples[i];
        const ProbabilityMap probs =
            degrade_labels(s.static_semantics, a.noise.spec, mix_seed(a.seed, 2 * s.id));
        inputs.push_back(QueryInput{s.id, visual_input(s, a.noise, mix_seed(a.seed, 2 * s.id + 1)),
                                    argmax_map(probs)});
    }

    out << "levels  mean_coding_ms  R@1       R@5       R@10      R@1%\n";
    std::ostringstream csv;
    csv << "levels,mean_coding_ms,r_at_1,r_at_5,r_at_10,r_at_1pct\n";
    using clock = std::chrono::steady_clock;
    for (const int level : a.levels) {
        const SpmConfig cfg(level, manifest.num_classes);

        std::vector<LandmarkEntry> entries;
        for (const LandmarkSample& s : all_samples) {
            entries.push_back(LandmarkEntry{s.id, encode_bow(s.static_image, vocab, bp),
                                            encode_spm(s.static_semantics, cfg)});
        }

        std::vector<QuerySample> queries;
        double total_ms = 0.0;
        for (const QueryInput& in : inputs) {
            // Warm-up pass; its codes are also the ones scored for recall.
            BowCode g = encode_bow(in.image, vocab, bp);
            SpmCode h = encode_spm(in.labels, cfg);
            std::vector<double> times;
            times.reserve(static_cast<std::size_t>(a.reps));
            for (int rep = 0; rep < a.reps; ++rep) {
                const auto t0 = clock::now();
                const BowCode g2 = encode_bow(in.image, vocab, bp);
                const SpmCode h2 = encode_spm(in.labels, cfg);
                const auto t1 = clock::now();
                (void)g2;
                (void)h2;
                times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            }
            std::sort(times.begin(), times.end());
            total_ms += times[times.size() / 2];
            queries.push_back(QuerySample{QueryCodes{std::move(g), std::move(h)}, in.id});
        }
        const double mean_ms = total_ms / static_cast<double>(inputs.size());
        const RecallReport report = eval_recall(entries, queries, FusionConfig(a.alpha));

        char buf[160];
        std::snprintf(buf, sizeof buf, "%6d  %14s  %-8s  %-8s  %-8s  %s\n", level,
                      fmt(mean_ms, 4).c_str(), fmt(report.recall_at.at(1)).c_str(),
                      fmt(report.recall_at.at(5)).c_str(), fmt(report.recall_at.at(10)).c_str(),
                      fmt(report.recall_at.at(report.top1pct_cutoff)).c_str());
        out << buf;
        csv << level << "," << fmt(mean_ms, 4) << "," << fmt(report.recall_at.at(1)) << ","
            << fmt(report.recall_at.at(5)) << "," << fmt(report.recall_at.at(10)) << ","
            << fmt(report.recall_at.at(report.top1pct_cutoff)) << "\n";
    }
    emit_csv(a.csv, csv.str(), out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-modal visual place recognition: SPM semantic codes + BoW visual codes "
                 "with decision-level fusion"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic landmark dataset");
    synth->add_option("--out", synth_args.out_dir, "Output dataset directory")->required();
    synth->add_option("--seed", synth_args.spec.seed, "World seed");
    synth->add_option("--height", synth_args.spec.height)->check(CLI::Range(32, 4096));
    synth->add_option("--width", synth_args.spec.width)->check(CLI::Range(32, 4096));
    synth->add_option("--classes", synth_args.spec.num_classes)->check(CLI::Range(2, 8));
    synth->add_option("--landmarks", synth_args.spec.num_landmarks)->check(CLI::PositiveNumber);
    synth->add_option("--dyn-min", synth_args.spec.min_dynamic_objects)->check(CLI::NonNegativeNumber);
    synth->add_option("--dyn-max", synth_args.spec.max_dynamic_objects)->check(CLI::NonNegativeNumber);
    synth->add_flag("--shadow,!--no-shadow", synth_args.spec.shadow, "Paint sprite shadows");

    BuildVocabArgs bv_args;
    CLI::App* bv = app.add_subcommand("build-vocab", "Cluster descriptors into a visual vocabulary");
    bv->add_option("--dataset", bv_args.dataset)->required();
    bv->add_option("--out", bv_args.out_file)->required();
    bv->add_option("--words", bv_args.words)->check(CLI::PositiveNumber);
    bv->add_option("--seed", bv_args.seed);
    bv->add_option("--max-iters", bv_args.max_iters)->check(CLI::PositiveNumber);
    bv->add_option("--max-kp", bv_args.max_kp)->check(CLI::PositiveNumber);
    bv->add_option("--threshold", bv_args.threshold)->check(CLI::NonNegativeNumber);
    bv->add_flag("--idf", bv_args.idf, "Store idf weights computed over the corpus");
    add_noise_options(bv, bv_args.noise, true);

    IndexArgs ix_args;
    CLI::App* ix = app.add_subcommand("index", "Encode a dataset into a landmark index");
    ix->add_option("--dataset", ix_args.dataset)->required();
    ix->add_option("--vocab", ix_args.vocab_file)->required();
    ix->add_option("--out", ix_args.out_file)->required();
    ix->add_option("--levels", ix_args.levels)->check(CLI::Range(0, 10));
    ix->add_option("--source", ix_args.source)->check(CLI::IsMember({"ground-truth", "degraded"}));
    ix->add_option("--seed", ix_args.seed);
    ix->add_option("--max-kp", ix_args.max_kp)->check(CLI::PositiveNumber);
    ix->add_option("--threshold", ix_args.threshold)->check(CLI::NonNegativeNumber);
    ix->add_flag("--use-idf", ix_args.use_idf);
    add_noise_options(ix, ix_args.noise, false);

    QueryArgs q_args;
    CLI::App* q = app.add_subcommand("query", "Rank landmarks against one query");
    q->add_option("--index", q_args.index_file)->required();
    q->add_option("--vocab", q_args.vocab_file)->required();
    q->add_option("--image", q_args.image_path)->required();
    q->add_option("--labels", q_args.labels_path);
    q->add_option("--probs", q_args.probs_path);
    q->add_option("--alpha", q_args.alpha)->check(CLI::Range(0.0, 1.0));
    q->add_option("--k", q_args.k)->check(CLI::PositiveNumber);
    q->add_option("--max-kp", q_args.max_kp)->check(CLI::PositiveNumber);
    q->add_option("--threshold", q_args.threshold)->check(CLI::NonNegativeNumber);
    q->add_flag("--use-idf", q_args.use_idf);
    q->add_option("--csv", q_args.csv, "Write the ranking CSV here instead of stdout");

    EvalRecallArgs er_args;
    CLI::App* er = app.add_subcommand("eval-recall", "Recall@K of a query set against an index");
    er->add_option("--index", er_args.index_file)->required();
    er->add_option("--vocab", er_args.vocab_file)->required();
    er->add_option("--dataset", er_args.dataset)->required();
    er->add_option("--alpha", er_args.alpha)->check(CLI::Range(0.0, 1.0));
    er->add_option("--seed", er_args.seed);
    er->add_option("--max-kp", er_args.max_kp)->check(CLI::PositiveNumber);
    er->add_option("--threshold", er_args.threshold)->check(CLI::NonNegativeNumber);
    er->add_flag("--use-idf", er_args.use_idf);
    er->add_option("--cutoffs", er_args.cutoffs, "Recall cutoffs to report (top-1% is always added)")
        ->expected(-1);
    add_noise_options(er, er_args.noise, true);
    er->add_option("--csv", er_args.csv);
    er->add_option("--curve-csv", er_args.curve_csv, "Full R@K curve, K = 1..N");

    EvalSegArgs es_args;
    CLI::App* es = app.add_subcommand("eval-seg", "Segmentation metrics over label-map pairs");
    es->add_option("--classes", es_args.num_classes)->check(CLI::Range(2, 256));
    es->add_option("--gt", es_args.gt, "Ground-truth label maps")->required()->expected(-1);
    es->add_option("--pred", es_args.pred, "Predicted label maps")->required()->expected(-1);
    es->add_option("--csv", es_args.csv);

    EvalImgArgs ei_args;
    CLI::App* ei = app.add_subcommand("eval-img", "Image quality metrics over image pairs");
    ei->add_option("--ref", ei_args.ref, "Reference images")->required()->expected(-1);
    ei->add_option("--cand", ei_args.cand, "Candidate images")->required()->expected(-1);
    ei->add_option("--csv", ei_args.csv);

    BenchArgs b_args;
    CLI::App* b = app.add_subcommand("bench-coding", "Coding time and recall across pyramid levels");
    b->add_option("--dataset", b_args.dataset)->required();
    b->add_option("--vocab", b_args.vocab_file)->required();
    b->add_option("--levels", b_args.levels, "L values to sweep")->expected(-1)->check(CLI::Range(0, 10));
    b->add_option("--reps", b_args.reps)->check(CLI::PositiveNumber);
    b->add_option("--queries", b_args.max_queries, "Limit the query count (0 = all)");
    b->add_option("--alpha", b_args.alpha)->check(CLI::Range(0.0, 1.0));
    b->add_option("--seed", b_args.seed);
    b->add_option("--max-kp", b_args.max_kp)->check(CLI::PositiveNumber);
    b->add_option("--threshold", b_args.threshold)->check(CLI::NonNegativeNumber);
    b->add_flag("--use-idf", b_args.use_idf);
    add_noise_options(b, b_args.noise, true);
    b->add_option("--csv", b_args.csv);

    std::vector<const char*> argv;
    argv.push_back("mmvpr");
    for (const std::string& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_args, out);
        if (bv->parsed()) return cmd_build_vocab(bv_args, out);
        if (ix->parsed()) return cmd_index(ix_args, out);
        if (q->parsed()) return cmd_query(q_args, out);
        if (er->parsed()) return cmd_eval_recall(er_args, out);
        if (es->parsed()) return cmd_eval_seg(es_args, out);
        if (ei->parsed()) return cmd_eval_img(ei_args, out);
        if (b->parsed()) return cmd_bench_coding(b_args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no command selected\n";
    return 1;
}

}  // namespace mmvpr
