#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmvpr/bow.hpp"
#include "mmvpr/retrieval.hpp"
#include "mmvpr/spm.hpp"
#include "mmvpr/synth.hpp"
#include "mmvpr/types.hpp"

namespace mmvpr {

// All formats are little-endian, versioned from 1, and written
// deterministically: the same value always produces the same bytes.
//
//   label map   binary PGM (P5, maxval 255), pixel value = class index
//   image       PGM (P5) for grayscale, PPM (P6) for RGB
//   prob map    "MMPM" u32 version, u32 H, u32 W, u32 K, H*W*K f32
//               (row-major, class fastest)
//   vocabulary  "MMVC" u32 version, u32 W, u64 seed, u32 idf flag,
//               W x 32-byte words, then W x f32 idf when the flag is set
//   index       "MMVI" u32 version, u64 N, u32 g_dim, u32 h_dim, u32 L,
//               u32 K, then per record u64 id, g_dim f32, h_dim f32
//   code vector "MMFV" u32 version, u64 length, f32 values

void write_label_map(const std::filesystem::path& path, const SemanticMap& m);
SemanticMap read_label_map(const std::filesystem::path& path, int num_classes);

void write_image(const std::filesystem::path& path, const ImageBuffer& img);
ImageBuffer read_image(const std::filesystem::path& path);

void write_prob_map(const std::filesystem::path& path, const ProbabilityMap& m);
ProbabilityMap read_prob_map(const std::filesystem::path& path);

void write_vocab(const std::filesystem::path& path, const Vocabulary& vocab);
Vocabulary read_vocab(const std::filesystem::path& path);

struct IndexFile {
    SpmConfig spm_config;
    std::vector<LandmarkEntry> entries;
};

void write_index(const std::filesystem::path& path, const SpmConfig& cfg,
                 const std::vector<LandmarkEntry>& entries);
IndexFile read_index(const std::filesystem::path& path);

void write_code(const std::filesystem::path& path, const FeatureVector& v);
FeatureVector read_code(const std::filesystem::path& path);

/// Dataset layout: manifest.json at the root plus one subdirectory per
/// landmark. The manifest is the single source of truth for K and the class
/// names; all paths are relative to the dataset root.
struct ManifestRecord {
    std::uint64_t id = 0;
    std::string static_image;
    std::string dynamic_image;
    std::string label_map;
    std::string prob_map;
    std::string dynamic_mask;
};

struct DatasetManifest {
    int version = 1;
    int num_classes = 0;
    std::vector<std::string> class_names;
    std::vector<ManifestRecord> landmarks;
};

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Parses and validates the manifest itself and checks that every referenced
/// file exists. Full parsing of the referenced files happens in load_dataset.
DatasetManifest read_manifest(const std::filesystem::path& path);

void write_dataset(const std::filesystem::path& dir, const std::vector<LandmarkSample>& samples,
                   const std::vector<std::string>& class_names);
std::vector<LandmarkSample> load_dataset(const std::filesystem::path& dir);
DatasetManifest load_manifest_of(const std::filesystem::path& dir);

}  // namespace mmvpr
