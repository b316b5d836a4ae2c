#include "mmvpr/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "mmvpr/error.hpp"

namespace mmvpr {

FusionConfig::FusionConfig(double alpha_) : alpha(alpha_) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error("FusionConfig.alpha: must be in [0,1], got " + std::to_string(alpha));
    }
}

void validate_index(const std::vector<LandmarkEntry>& index) {
    std::unordered_set<std::uint64_t> ids;
    for (std::size_t i = 0; i < index.size(); ++i) {
        const LandmarkEntry& e = index[i];
        if (!ids.insert(e.id).second) {
            std::ostringstream os;
            os << "LandmarkIndex: duplicate id " << e.id << " at record " << i;
            throw Error(os.str());
        }
        if (e.g.vector.size() != index[0].g.vector.size()) {
            std::ostringstream os;
            os << "LandmarkIndex: record " << i << " g-dim " << e.g.vector.size()
               << " differs from " << index[0].g.vector.size();
            throw Error(os.str());
        }
        if (e.h.vector.size() != index[0].h.vector.size() ||
            e.h.config.levels != index[0].h.config.levels ||
            e.h.config.num_classes != index[0].h.config.num_classes) {
            std::ostringstream os;
            os << "LandmarkIndex: record " << i << " h-dim or SPM config differs from record 0";
            throw Error(os.str());
        }
    }
}

double cosine(const FeatureVector& a, const FeatureVector& b) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "cosine: dimension mismatch, " << a.size() << " vs " << b.size();
        throw Error(os.str());
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 && nb == 0.0) return 1.0;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double fused_similarity(const QueryCodes& q, const QueryCodes& l, const FusionConfig& cfg) {
    return cfg.alpha * cosine(q.g.vector, l.g.vector) +
           (1.0 - cfg.alpha) * cosine(q.h.vector, l.h.vector);
}

std::vector<std::pair<std::uint64_t, double>> query(const std::vector<LandmarkEntry>& index,
                                                    const QueryCodes& q, std::size_t k,
                                                    const FusionConfig& cfg) {
    if (index.empty()) {
        throw Error("query: index is empty");
    }
    if (k < 1) {
        throw Error("query: k must be >= 1");
    }
    validate_index(index);
    std::vector<std::pair<std::uint64_t, double>> scored;
    scored.reserve(index.size());
    for (const LandmarkEntry& e : index) {
        const double s = cfg.alpha * cosine(q.g.vector, e.g.vector) +
                         (1.0 - cfg.alpha) * cosine(q.h.vector, e.h.vector);
        scored.emplace_back(e.id, s);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::size_t top_percent_cutoff(std::size_t index_size) {
    const std::size_t c = static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(index_size)));
    return std::max<std::size_t>(1, c);
}

RecallReport eval_recall(const std::vector<LandmarkEntry>& index,
                         const std::vector<QuerySample>& queries, const FusionConfig& cfg) {
    if (index.empty()) {
        throw Error("eval_recall: index is empty");
    }
    std::unordered_set<std::uint64_t> ids;
    for (const LandmarkEntry& e : index) ids.insert(e.id);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (ids.find(queries[i].true_id) == ids.end()) {
            std::ostringstream os;
            os << "eval_recall: query " << i << " true_id " << queries[i].true_id
               << " is not in the index";
            throw Error(os.str());
        }
    }
    if (queries.empty()) {
        throw Error("eval_recall: no queries");
    }

    const std::size_t n = index.size();
    // hits_at_rank[r] = queries whose true landmark sits at rank r+1.
    std::vector<std::size_t> hits_at_rank(n, 0);
    for (const QuerySample& qs : queries) {
        const auto ranking = query(index, qs.codes, n, cfg);
        for (std::size_t r = 0; r < ranking.size(); ++r) {
            if (ranking[r].first == qs.true_id) {
                ++hits_at_rank[r];
                break;
            }
        }
    }

    RecallReport report;
    report.top1pct_cutoff = top_percent_cutoff(n);
    report.curve.resize(n);
    std::size_t cum = 0;
    for (std::size_t r = 0; r < n; ++r) {
        cum += hits_at_rank[r];
        report.curve[r] = static_cast<double>(cum) / static_cast<double>(queries.size());
    }
    for (std::size_t cutoff : {std::size_t{1}, std::size_t{5}, std::size_t{10}, report.top1pct_cutoff}) {
        const std::size_t idx = std::min(cutoff, n) - 1;
        report.recall_at[cutoff] = report.curve[idx];
    }
    return report;
}

}  // namespace mmvpr
