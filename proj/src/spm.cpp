#include "mmvpr/spm.hpp"

#include <cmath>
#include <sstream>

#include "mmvpr/error.hpp"

namespace mmvpr {

SpmConfig::SpmConfig(int levels_, int num_classes_) : levels(levels_), num_classes(num_classes_) {
    if (levels < 0 || levels > 10) {
        throw Error("SpmConfig.levels: must be in [0,10], got " + std::to_string(levels));
    }
    if (num_classes < 2) {
        throw Error("SpmConfig.num_classes: must be >= 2, got " + std::to_string(num_classes));
    }
}

double spm_weight(int level, int levels) {
    if (level < 0 || level > levels) {
        std::ostringstream os;
        os << "spm_weight: level " << level << " out of range [0," << levels << "]";
        throw Error(os.str());
    }
    if (level == 0) return std::ldexp(1.0, -levels);
    return std::ldexp(1.0, level - levels - 1);
}

std::size_t spm_code_length(int levels, int num_classes) {
    std::size_t cells = 0;
    for (int l = 0; l <= levels; ++l) cells += std::size_t{1} << (2 * l);
    return cells * static_cast<std::size_t>(num_classes);
}

std::vector<int> spm_cell_bounds(int extent, int cells) {
    std::vector<int> bounds(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        bounds[static_cast<std::size_t>(i)] =
            static_cast<int>(static_cast<std::int64_t>(i) * extent / cells);
    }
    return bounds;
}

std::vector<std::uint32_t> level_histograms(const SemanticMap& m, int level) {
    const int cells = 1 << level;
    const int h = m.height();
    const int w = m.width();
    const int k = m.num_classes();
    const std::vector<int> row_bounds = spm_cell_bounds(h, cells);
    const std::vector<int> col_bounds = spm_cell_bounds(w, cells);

    // Column -> cell lookup derived from the boundary partition (the inverse
    // multiplication formula disagrees with floor boundaries when the extent
    // is not divisible by the cell count).
    std::vector<int> col_cell(static_cast<std::size_t>(w));
    for (int cc = 0; cc < cells; ++cc) {
        for (int x = col_bounds[cc]; x < col_bounds[cc + 1]; ++x) col_cell[static_cast<std::size_t>(x)] = cc;
    }

    std::vector<std::uint32_t> hist(static_cast<std::size_t>(cells) * cells * k, 0);
    const std::uint16_t* labels = m.labels().data();
    for (int cr = 0; cr < cells; ++cr) {
        for (int cc = 0; cc < cells; ++cc) {
            std::uint32_t* cell = hist.data() + (static_cast<std::size_t>(cr) * cells + cc) * k;
            for (int y = 0; y < h; ++y) {
                if (y < row_bounds[cr] || y >= row_bounds[cr + 1]) continue;
                const std::uint16_t* row = labels + static_cast<std::size_t>(y) * w;
                for (int x = 0; x < w; ++x) {
                    if (col_cell[static_cast<std::size_t>(x)] != cc) continue;
                    ++cell[row[x]];
                }
            }
        }
    }
    return hist;
}

SpmCode encode_spm(const SemanticMap& m, const SpmConfig& cfg) {
    if (m.num_classes() != cfg.num_classes) {
        std::ostringstream os;
        os << "encode_spm: class-count mismatch, map K=" << m.num_classes() << " vs config K="
           << cfg.num_classes;
        throw Error(os.str());
    }
    std::vector<double> out;
    out.reserve(spm_code_length(cfg.levels, cfg.num_classes));
    for (int l = 0; l <= cfg.levels; ++l) {
        const double w = spm_weight(l, cfg.levels);
        const std::vector<std::uint32_t> hist = level_histograms(m, l);
        for (std::uint32_t c : hist) out.push_back(w * static_cast<double>(c));
    }
    return SpmCode{FeatureVector(std::move(out)), cfg};
}

}  // namespace mmvpr
