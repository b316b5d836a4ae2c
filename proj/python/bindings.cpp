#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "mmvpr/cli.hpp"
#include "mmvpr/error.hpp"
#include "mmvpr/io.hpp"
#include "mmvpr/retrieval.hpp"
#include "mmvpr/seg_metrics.hpp"
#include "mmvpr/img_metrics.hpp"

namespace py = pybind11;
using namespace mmvpr;

namespace {

SemanticMap as_semantic_map(const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& arr,
                            int num_classes) {
    if (arr.ndim() != 2) throw Error("labels: expected a 2-D array");
    const auto h = static_cast<int>(arr.shape(0));
    const auto w = static_cast<int>(arr.shape(1));
    std::vector<std::uint16_t> labels(arr.data(), arr.data() + arr.size());
    return SemanticMap(h, w, num_classes, std::move(labels));
}

py::array_t<std::uint16_t> as_array(const SemanticMap& m) {
    py::array_t<std::uint16_t> out({m.height(), m.width()});
    std::memcpy(out.mutable_data(), m.labels().data(), m.labels().size() * sizeof(std::uint16_t));
    return out;
}

ProbabilityMap as_prob_map(const py::array_t<float, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3) throw Error("probs: expected an (H, W, K) array");
    std::vector<float> probs(arr.data(), arr.data() + arr.size());
    return ProbabilityMap(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                          static_cast<int>(arr.shape(2)), std::move(probs));
}

py::array_t<float> as_array(const ProbabilityMap& m) {
    py::array_t<float> out({m.height(), m.width(), m.num_classes()});
    std::memcpy(out.mutable_data(), m.probs().data(), m.probs().size() * sizeof(float));
    return out;
}

ImageBuffer as_image(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() == 2) {
        std::vector<std::uint8_t> px(arr.data(), arr.data() + arr.size());
        return ImageBuffer(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)), 1,
                           std::move(px));
    }
    if (arr.ndim() == 3) {
        std::vector<std::uint8_t> px(arr.data(), arr.data() + arr.size());
        return ImageBuffer(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                           static_cast<int>(arr.shape(2)), std::move(px));
    }
    throw Error("image: expected an (H, W) or (H, W, C) array");
}

py::array_t<std::uint8_t> as_array(const ImageBuffer& img) {
    py::array_t<std::uint8_t> out =
        img.channels() == 1 ? py::array_t<std::uint8_t>({img.height(), img.width()})
                            : py::array_t<std::uint8_t>({img.height(), img.width(), img.channels()});
    std::memcpy(out.mutable_data(), img.samples().data(), img.samples().size());
    return out;
}

py::bytes descriptor_bytes(const BinaryDescriptor& d) {
    std::string s(32, '\0');
    for (int wi = 0; wi < 4; ++wi) {
        for (int b = 0; b < 8; ++b) {
            s[static_cast<std::size_t>(wi * 8 + b)] =
                static_cast<char>((d.bits[static_cast<std::size_t>(wi)] >> (8 * b)) & 0xff);
        }
    }
    return py::bytes(s);
}

BinaryDescriptor descriptor_from_bytes(const py::bytes& raw) {
    const std::string s = raw;
    if (s.size() != 32) throw Error("descriptor: expected exactly 32 bytes");
    BinaryDescriptor d;
    for (int wi = 0; wi < 4; ++wi) {
        for (int b = 0; b < 8; ++b) {
            d.bits[static_cast<std::size_t>(wi)] |=
                static_cast<std::uint64_t>(static_cast<unsigned char>(s[static_cast<std::size_t>(wi * 8 + b)]))
                << (8 * b);
        }
    }
    return d;
}

FeatureVector as_feature_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 1) throw Error("code vector: expected a 1-D array");
    return FeatureVector(std::vector<double>(arr.data(), arr.data() + arr.size()));
}

py::array_t<double> as_array(const FeatureVector& v) {
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::memcpy(out.mutable_data(), v.values().data(), v.size() * sizeof(double));
    return out;
}

py::dict seg_scores_dict(const SegScores& s) {
    py::dict d;
    d["pa"] = s.pixel_accuracy;
    d["mpa"] = s.mean_pixel_accuracy;
    d["miou"] = s.mean_iou;
    d["fwiou"] = s.freq_weighted_iou;
    py::list ious;
    for (const auto& iou : s.per_class_iou) {
        if (iou) {
            ious.append(*iou);
        } else {
            ious.append(py::none());
        }
    }
    d["per_class_iou"] = std::move(ious);
    return d;
}

// Owns an in-memory landmark index with a fixed SPM configuration.
struct IndexHandle {
    SpmConfig config;
    std::vector<LandmarkEntry> entries;

    IndexHandle(int levels, int num_classes) : config(levels, num_classes) {}

    void add(std::uint64_t id, const py::array_t<double, py::array::c_style | py::array::forcecast>& g,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& h) {
        entries.push_back(LandmarkEntry{id, BowCode{as_feature_vector(g)},
                                        SpmCode{as_feature_vector(h), config}});
        validate_index(entries);
    }

    std::vector<std::pair<std::uint64_t, double>> run_query(
        const py::array_t<double, py::array::c_style | py::array::forcecast>& g,
        const py::array_t<double, py::array::c_style | py::array::forcecast>& h, std::size_t k,
        double alpha) const {
        const QueryCodes q{BowCode{as_feature_vector(g)}, SpmCode{as_feature_vector(h), config}};
        return query(entries, q, k, FusionConfig(alpha));
    }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-modal visual place recognition: SPM semantic coding, BoW visual coding, "
              "decision-level fusion, and the surrounding file formats";

    py::register_exception<Error>(m, "MmvprError");

    // core
    m.def(
        "argmax_map",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& probs) {
            return as_array(argmax_map(as_prob_map(probs)));
        },
        py::arg("probs"), "Per-pixel argmax of an (H, W, K) probability map; ties take the lowest class.");
    m.def(
        "one_hot",
        [](const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& labels,
           int num_classes) { return as_array(one_hot(as_semantic_map(labels, num_classes))); },
        py::arg("labels"), py::arg("num_classes"));

    // segmentation metrics
    m.def(
        "confusion",
        [](const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& gt,
           const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& pred,
           int num_classes) {
            const ConfusionMatrix cm =
                confusion(as_semantic_map(gt, num_classes), as_semantic_map(pred, num_classes));
            py::array_t<std::uint64_t> out({num_classes, num_classes});
            std::memcpy(out.mutable_data(), cm.counts().data(),
                        cm.counts().size() * sizeof(std::uint64_t));
            return out;
        },
        py::arg("gt"), py::arg("pred"), py::arg("num_classes"));
    m.def(
        "seg_scores",
        [](const py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast>& counts) {
            if (counts.ndim() != 2 || counts.shape(0) != counts.shape(1)) {
                throw Error("confusion matrix: expected a square 2-D array");
            }
            const ConfusionMatrix cm(static_cast<int>(counts.shape(0)),
                                     std::vector<std::uint64_t>(counts.data(), counts.data() + counts.size()));
            return seg_scores_dict(seg_scores(cm));
        },
        py::arg("confusion_matrix"));
    m.def(
        "weighted_ce",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& probs,
           const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& gt,
           const std::vector<double>& frequencies, double epsilon, const std::string& reduction,
           bool clamp_zeros) {
            const ProbabilityMap p = as_prob_map(probs);
            if (reduction != "sum" && reduction != "mean") {
                throw Error("reduction: expected 'sum' or 'mean'");
            }
            return weighted_ce(p, as_semantic_map(gt, p.num_classes()),
                               ClassStats(frequencies, epsilon),
                               reduction == "sum" ? Reduction::Sum : Reduction::Mean, clamp_zeros);
        },
        py::arg("probs"), py::arg("gt"), py::arg("frequencies"), py::arg("epsilon") = 0.02,
        py::arg("reduction") = "sum", py::arg("clamp_zeros") = false);

    // image metrics
    m.def(
        "img_scores",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& b) {
            const ImgScores s = img_scores(as_image(a), as_image(b));
            py::dict d;
            d["l1_pct"] = s.l1_pct;
            d["l2_pct"] = s.l2_pct;
            d["psnr"] = s.psnr;
            d["ssim"] = s.ssim;
            return d;
        },
        py::arg("a"), py::arg("b"));

    // SPM coding
    m.def("spm_weight", &spm_weight, py::arg("level"), py::arg("levels"));
    m.def("spm_code_length", &spm_code_length, py::arg("levels"), py::arg("num_classes"));
    m.def(
        "encode_spm",
        [](const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& labels,
           int num_classes, int levels) {
            return as_array(
                encode_spm(as_semantic_map(labels, num_classes), SpmConfig(levels, num_classes)).vector);
        },
        py::arg("labels"), py::arg("num_classes"), py::arg("levels"));

    // BoW coding
    py::class_<Vocabulary>(m, "Vocabulary")
        .def_property_readonly("size", [](const Vocabulary& v) { return v.size(); })
        .def_readonly("seed", &Vocabulary::seed)
        .def_readonly("idf", &Vocabulary::idf)
        .def("word", [](const Vocabulary& v, std::size_t i) { return descriptor_bytes(v.words.at(i)); })
        .def("save", [](const Vocabulary& v, const std::string& path) { write_vocab(path, v); })
        .def_static("load", [](const std::string& path) { return read_vocab(path); });

    m.def(
        "to_gray",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img) {
            return as_array(to_gray(as_image(img)));
        },
        py::arg("image"));
    m.def(
        "detect_keypoints",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
           int max_keypoints, int threshold) {
            std::vector<std::tuple<int, int, double>> out;
            for (const Keypoint& kp : detect_keypoints(as_image(img), max_keypoints, threshold)) {
                out.emplace_back(kp.x, kp.y, kp.score);
            }
            return out;
        },
        py::arg("image"), py::arg("max_keypoints") = 500, py::arg("threshold") = 20,
        "FAST-style corners as (x, y, score) tuples, strongest first.");
    m.def(
        "describe",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, int x,
           int y) { return descriptor_bytes(describe(as_image(img), Keypoint{x, y, 0.0})); },
        py::arg("image"), py::arg("x"), py::arg("y"));
    m.def(
        "build_vocab",
        [](const std::vector<py::bytes>& descriptors, int word_count, std::uint64_t seed,
           int max_iters) {
            std::vector<BinaryDescriptor> descs;
            descs.reserve(descriptors.size());
            for (const py::bytes& b : descriptors) descs.push_back(descriptor_from_bytes(b));
            return build_vocab(descs, word_count, seed, max_iters);
        },
        py::arg("descriptors"), py::arg("word_count"), py::arg("seed"), py::arg("max_iters") = 50);
    m.def(
        "encode_bow",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
           const Vocabulary& vocab, int max_keypoints, int threshold, bool use_idf) {
            return as_array(encode_bow(as_image(img), vocab, BowParams{max_keypoints, threshold, use_idf}).vector);
        },
        py::arg("image"), py::arg("vocab"), py::arg("max_keypoints") = 500, py::arg("threshold") = 20,
        py::arg("use_idf") = false);

    // retrieval
    m.def(
        "cosine",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
            return cosine(as_feature_vector(a), as_feature_vector(b));
        },
        py::arg("a"), py::arg("b"), "Cosine with the zero-vector rules (both zero -> 1, one zero -> 0).");
    m.def("top_percent_cutoff", &top_percent_cutoff, py::arg("index_size"));

    py::class_<IndexHandle>(m, "Index")
        .def(py::init<int, int>(), py::arg("levels"), py::arg("num_classes"))
        .def_property_readonly("levels", [](const IndexHandle& ih) { return ih.config.levels; })
        .def_property_readonly("num_classes",
                               [](const IndexHandle& ih) { return ih.config.num_classes; })
        .def_property_readonly("ids",
                               [](const IndexHandle& ih) {
                                   std::vector<std::uint64_t> ids;
                                   for (const auto& e : ih.entries) ids.push_back(e.id);
                                   return ids;
                               })
        .def("add", &IndexHandle::add, py::arg("id"), py::arg("g"), py::arg("h"))
        .def("query", &IndexHandle::run_query, py::arg("g"), py::arg("h"), py::arg("k") = 10,
             py::arg("alpha") = 0.5)
        .def("save",
             [](const IndexHandle& ih, const std::string& path) {
                 write_index(path, ih.config, ih.entries);
             })
        .def_static("load", [](const std::string& path) {
            const IndexFile file = read_index(path);
            IndexHandle ih(file.spm_config.levels, file.spm_config.num_classes);
            ih.entries = file.entries;
            return ih;
        });

    // io
    m.def("read_image", [](const std::string& p) { return as_array(read_image(p)); }, py::arg("path"));
    m.def(
        "write_image",
        [](const std::string& p,
           const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img) {
            write_image(p, as_image(img));
        },
        py::arg("path"), py::arg("image"));
    m.def(
        "read_label_map",
        [](const std::string& p, int num_classes) { return as_array(read_label_map(p, num_classes)); },
        py::arg("path"), py::arg("num_classes"));
    m.def(
        "write_label_map",
        [](const std::string& p,
           const py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>& labels,
           int num_classes) { write_label_map(p, as_semantic_map(labels, num_classes)); },
        py::arg("path"), py::arg("labels"), py::arg("num_classes"));
    m.def("read_prob_map", [](const std::string& p) { return as_array(read_prob_map(p)); },
          py::arg("path"));
    m.def(
        "write_prob_map",
        [](const std::string& p,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& probs) {
            write_prob_map(p, as_prob_map(probs));
        },
        py::arg("path"), py::arg("probs"));
    m.def("read_code", [](const std::string& p) { return as_array(read_code(p)); }, py::arg("path"));
    m.def(
        "write_code",
        [](const std::string& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
            write_code(p, as_feature_vector(v));
        },
        py::arg("path"), py::arg("code"));

    // synthetic worlds
    m.def(
        "generate_landmark",
        [](std::uint64_t seed, int height, int width, int num_classes, std::uint64_t id,
           int min_dynamic_objects, int max_dynamic_objects, bool shadow) {
            WorldSpec spec;
            spec.seed = seed;
            spec.height = height;
            spec.width = width;
            spec.num_classes = num_classes;
            spec.num_landmarks = static_cast<int>(id) + 1;
            spec.min_dynamic_objects = min_dynamic_objects;
            spec.max_dynamic_objects = max_dynamic_objects;
            spec.shadow = shadow;
            const LandmarkSample s = generate_landmark(spec, id);
            py::dict d;
            d["id"] = s.id;
            d["static_image"] = as_array(s.static_image);
            d["dynamic_image"] = as_array(s.dynamic_image);
            d["labels"] = as_array(s.static_semantics);
            d["probs"] = as_array(s.static_probs);
            py::array_t<std::uint8_t> mask({height, width});
            std::memcpy(mask.mutable_data(), s.dynamic_mask.data(), s.dynamic_mask.size());
            d["dynamic_mask"] = std::move(mask);
            return d;
        },
        py::arg("seed"), py::arg("height"), py::arg("width"), py::arg("num_classes"), py::arg("id"),
        py::arg("min_dynamic_objects") = 1, py::arg("max_dynamic_objects") = 4,
        py::arg("shadow") = true);

    m.def("class_names", [] {
        return std::vector<std::string>(kClassNames.begin(), kClassNames.end());
    });

    // CLI passthrough, mainly for pipeline smoke tests.
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_cli(args, out, err);
            return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a CLI command in-process; returns (exit_code, stdout, stderr).");
}
