#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "litkg/csv.hpp"
#include "litkg/errors.hpp"
#include "litkg/rng.hpp"
#include "litkg/vec.hpp"

namespace litkg {

struct CombineWeights {
    double sem = 1.0;
    double kge = 1.0;

    void check() const {
        if (sem < 0.0 || kge < 0.0 || (sem == 0.0 && kge == 0.0))
            throw InputError("combine: weights must be non-negative and not both zero");
    }
};

struct CombinedEmbedding {
    std::string paper_id;
    std::vector<double> values; // concat(w_sem * unit_sem, w_kge * unit_kge)
    bool has_sem = false;
    bool has_kge = false;

    bool partial() const { return !has_sem || !has_kge; }
};

/// Weighted concatenation of the L2-normalized parts. An absent or
/// zero-norm part contributes a zero block and marks the paper partial.
inline CombinedEmbedding combine(const std::string& paper_id,
                                 std::optional<std::span<const double>> sem,
                                 std::optional<std::span<const double>> kge,
                                 const CombineWeights& weights, size_t d_sem, size_t d_kge) {
    weights.check();
    if (!sem && !kge)
        throw InputError("combine: paper '" + paper_id + "' has neither embedding part");
    CombinedEmbedding out;
    out.paper_id = paper_id;
    out.values.assign(d_sem + d_kge, 0.0);
    auto fill = [&](std::span<const double> part, size_t offset, size_t expected_dim,
                    double weight) {
        if (part.size() != expected_dim)
            throw InputError("combine: paper '" + paper_id + "' part has dimension " +
                             std::to_string(part.size()) + ", expected " +
                             std::to_string(expected_dim));
        std::vector<double> unit(part.begin(), part.end());
        if (!vec::l2_normalize(unit)) return false; // zero-norm part
        for (size_t i = 0; i < unit.size(); ++i) out.values[offset + i] = weight * unit[i];
        return true;
    };
    if (sem) out.has_sem = fill(*sem, 0, d_sem, weights.sem);
    if (kge) out.has_kge = fill(*kge, d_sem, d_kge, weights.kge);
    return out;
}

/// Immutable brute-force cosine index; queries are read-only.
class SimilarityIndex {
public:
    explicit SimilarityIndex(std::vector<CombinedEmbedding> items) : items_(std::move(items)) {
        std::sort(items_.begin(), items_.end(),
                  [](const CombinedEmbedding& a, const CombinedEmbedding& b) {
                      return a.paper_id < b.paper_id;
                  });
        for (size_t i = 0; i < items_.size(); ++i) {
            if (i > 0 && items_[i].paper_id == items_[i - 1].paper_id)
                throw InputError("similarity index: duplicate paper '" + items_[i].paper_id +
                                 "'");
            by_id_[items_[i].paper_id] = i;
        }
    }

    size_t size() const { return items_.size(); }
    const std::vector<CombinedEmbedding>& items() const { return items_; }
    const CombinedEmbedding& item(size_t i) const { return items_[i]; }

    std::optional<size_t> find(const std::string& paper_id) const {
        auto it = by_id_.find(paper_id);
        if (it == by_id_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<CombinedEmbedding> items_;
    std::map<std::string, size_t> by_id_;
};

struct RecEntry {
    std::string paper_id;
    double cosine_distance = 0.0;
};

struct RecommendationList {
    std::string source;
    int k = 0;
    std::vector<RecEntry> entries; // non-decreasing distance, ties by paper_id
};

/// Exact top-k by cosine distance (1 - cosine similarity) over a full scan.
inline RecommendationList top_k(const SimilarityIndex& index, const std::string& source,
                                int k = 5) {
    if (k < 1) throw InputError("top_k: k must be >= 1");
    auto src = index.find(source);
    if (!src) throw InputError("top_k: unknown source paper '" + source + "'");
    const auto& sv = index.item(*src).values;

    std::vector<std::pair<double, size_t>> scored;
    scored.reserve(index.size() - 1);
    for (size_t i = 0; i < index.size(); ++i) {
        if (i == *src) continue;
        scored.push_back({vec::cosine_distance(sv, index.item(i).values), i});
    }
    size_t kk = std::min<size_t>(static_cast<size_t>(k), scored.size());
    auto cmp = [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return index.item(a.second).paper_id < index.item(b.second).paper_id;
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(kk), scored.end(), cmp);

    RecommendationList out;
    out.source = source;
    out.k = k;
    out.entries.reserve(kk);
    for (size_t i = 0; i < kk; ++i)
        out.entries.push_back({index.item(scored[i].second).paper_id, scored[i].first});
    return out;
}

/// top_k for every paper; order and contents are deterministic and do not
/// depend on the worker count.
inline std::vector<RecommendationList> batch_top_k(const SimilarityIndex& index, int k = 5,
                                                   int workers = 1) {
    if (index.size() == 0) throw InputError("batch_top_k: empty index");
    std::vector<RecommendationList> out(index.size());
    auto run = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) out[i] = top_k(index, index.item(i).paper_id, k);
    };
    if (workers <= 1 || index.size() < 2) {
        run(0, index.size());
    } else {
        size_t w = std::min<size_t>(static_cast<size_t>(workers), index.size());
        size_t chunk = (index.size() + w - 1) / w;
        std::vector<std::thread> pool;
        for (size_t j = 0; j < w; ++j)
            pool.emplace_back(run, j * chunk, std::min(index.size(), (j + 1) * chunk));
        for (auto& th : pool) th.join();
    }
    return out;
}

/// Seeded random baseline: k distinct papers per source, uniform without
/// replacement. Distances are the true cosine distances so the list
/// invariant (sorted entries) holds; the selected set stays uniform.
inline std::vector<RecommendationList> random_recommendations(const SimilarityIndex& index,
                                                              int k, std::uint64_t seed) {
    if (k < 1) throw InputError("random_recommendations: k must be >= 1");
    std::vector<RecommendationList> out;
    out.reserve(index.size());
    const auto n = static_cast<std::uint32_t>(index.size());
    for (std::uint32_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, "random-rec", i));
        auto picks = rng.sample_without_replacement(n - 1, static_cast<std::uint32_t>(k));
        RecommendationList list;
        list.source = index.item(i).paper_id;
        list.k = k;
        const auto& sv = index.item(i).values;
        for (std::uint32_t p : picks) {
            std::uint32_t j = p >= i ? p + 1 : p; // skip the source slot
            list.entries.push_back({index.item(j).paper_id,
                                    vec::cosine_distance(sv, index.item(j).values)});
        }
        std::sort(list.entries.begin(), list.entries.end(),
                  [](const RecEntry& a, const RecEntry& b) {
                      if (a.cosine_distance != b.cosine_distance)
                          return a.cosine_distance < b.cosine_distance;
                      return a.paper_id < b.paper_id;
                  });
        out.push_back(std::move(list));
    }
    return out;
}

inline void write_recommendations(const std::vector<RecommendationList>& lists,
                                  const std::filesystem::path& path,
                                  const std::string& header_comment = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!header_comment.empty()) out << header_comment;
    csv::write_row(out, {"source_paper_id", "rank", "target_paper_id", "cosine_distance"});
    for (const auto& list : lists)
        for (size_t i = 0; i < list.entries.size(); ++i)
            csv::write_row(out, {list.source, csv::format_int(static_cast<long long>(i + 1)),
                                 list.entries[i].paper_id,
                                 csv::format_double(list.entries[i].cosine_distance)});
}

inline std::vector<RecommendationList> read_recommendations(const std::filesystem::path& path) {
    auto rows = csv::read_file(path.string(),
                               {"source_paper_id", "rank", "target_paper_id", "cosine_distance"});
    std::vector<RecommendationList> lists;
    for (const auto& row : rows) {
        if (lists.empty() || lists.back().source != row.fields[0]) {
            lists.push_back({row.fields[0], 0, {}});
        }
        auto dist = csv::parse_double(row.fields[3]);
        if (!dist)
            throw InputError(path.string() + ":" + std::to_string(row.line) +
                             ": bad cosine_distance '" + row.fields[3] + "'");
        lists.back().entries.push_back({row.fields[2], *dist});
        lists.back().k = static_cast<int>(lists.back().entries.size());
    }
    return lists;
}

} // namespace litkg
