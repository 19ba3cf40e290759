#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "litkg/errors.hpp"
#include "litkg/graph.hpp"
#include "litkg/rng.hpp"
#include "litkg/similarity.hpp"
#include "litkg/vec.hpp"

namespace litkg {

enum class JaccardForm {
    standard, // (c_TF + c_FT) / (c_TT + c_TF + c_FT)
    printed,  // (c_TF + c_FT) / (c_TT + 2 c_TF), kept for exactness audits
};

/// Jaccard distance between boolean vectors; 0 when both are all-false.
inline double jaccard_distance(const std::vector<bool>& u, const std::vector<bool>& v,
                               JaccardForm form = JaccardForm::standard) {
    if (u.size() != v.size()) throw InputError("jaccard_distance: length mismatch");
    long c_tt = 0, c_tf = 0, c_ft = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        if (u[i] && v[i]) ++c_tt;
        else if (u[i] && !v[i]) ++c_tf;
        else if (!u[i] && v[i]) ++c_ft;
    }
    long num = c_tf + c_ft;
    long den = form == JaccardForm::standard ? c_tt + c_tf + c_ft : c_tt + 2 * c_tf;
    if (den == 0) return num == 0 ? 0.0 : 1.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

/// One-hot topic membership per paper over a fixed vocabulary order.
struct TopicStore {
    std::vector<std::string> vocabulary;
    std::map<std::string, std::vector<bool>> by_paper;

    const std::vector<bool>& of(const std::string& paper_id) const {
        auto it = by_paper.find(paper_id);
        if (it == by_paper.end())
            throw InputError("topic store: missing topic vector for paper '" + paper_id + "'");
        return it->second;
    }

    bool any(const std::string& paper_id) const {
        const auto& bits = of(paper_id);
        return std::find(bits.begin(), bits.end(), true) != bits.end();
    }
};

/// Every paper in the graph gets a bit vector over `vocabulary`.
inline TopicStore build_topic_store(const PropertyGraph& graph,
                                    const std::vector<std::string>& vocabulary) {
    TopicStore store;
    store.vocabulary = vocabulary;
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < vocabulary.size(); ++i) index[vocabulary[i]] = i;
    for (const Entity& paper : graph.entities_of(EntityKind::Paper)) {
        std::vector<bool> bits(vocabulary.size(), false);
        for (EntityId topic : graph.out_neighbors(Relation::associated_topic, paper.id)) {
            auto it = index.find(graph.entity(topic).key);
            if (it != index.end()) bits[it->second] = true;
        }
        store.by_paper[paper.key] = std::move(bits);
    }
    return store;
}

/// TS(s) = mean Jaccard distance between the source and its list entries.
inline double topic_similarity(const std::string& source, const RecommendationList& recs,
                               const TopicStore& topics,
                               JaccardForm form = JaccardForm::standard) {
    if (recs.entries.empty()) throw InputError("topic_similarity: empty recommendation list");
    const auto& su = topics.of(source);
    std::vector<double> dists;
    dists.reserve(recs.entries.size());
    for (const auto& e : recs.entries)
        dists.push_back(jaccard_distance(su, topics.of(e.paper_id), form));
    return vec::mean(dists);
}

struct MetricValue {
    double value = 0.0;
    long support = 0; // papers contributing
};

/// Mean TS over all source papers that carry at least one topic; sources
/// with all-false topic vectors are excluded and the support records how
/// many papers contributed.
inline MetricValue corpus_topic_similarity(const std::vector<RecommendationList>& lists,
                                           const TopicStore& topics,
                                           JaccardForm form = JaccardForm::standard) {
    std::vector<double> per_source;
    for (const auto& list : lists) {
        if (list.entries.empty()) continue;
        if (!topics.any(list.source)) continue;
        per_source.push_back(topic_similarity(list.source, list, topics, form));
    }
    return {vec::mean(per_source), static_cast<long>(per_source.size())};
}

/// Mean percent of a paper's citations recovered in its top-k list,
/// normalized by min(k, |citations|), over papers that cite at least one
/// other paper.
inline MetricValue citation_overlap(const std::vector<RecommendationList>& lists,
                                    const std::map<std::string, std::set<std::string>>& out_cites,
                                    int k = 5) {
    std::vector<double> per_paper;
    for (const auto& list : lists) {
        auto it = out_cites.find(list.source);
        if (it == out_cites.end() || it->second.empty()) continue;
        const auto& cites = it->second;
        long hits = 0;
        size_t considered = std::min<size_t>(static_cast<size_t>(k), list.entries.size());
        for (size_t i = 0; i < considered; ++i)
            if (cites.count(list.entries[i].paper_id)) ++hits;
        long denom = std::min<long>(k, static_cast<long>(cites.size()));
        per_paper.push_back(static_cast<double>(hits) / static_cast<double>(denom));
    }
    return {vec::mean(per_paper) * 100.0, static_cast<long>(per_paper.size())};
}

/// Citing adjacency as paper-id sets, for citation_overlap.
inline std::map<std::string, std::set<std::string>> out_citation_sets(
    const PropertyGraph& graph) {
    std::map<std::string, std::set<std::string>> out;
    for (const Entity& paper : graph.entities_of(EntityKind::Paper)) {
        auto cited = graph.out_neighbors(Relation::cites, paper.id);
        if (cited.empty()) continue;
        auto& s = out[paper.key];
        for (EntityId c : cited) s.insert(graph.entity(c).key);
    }
    return out;
}

/// Mean intersection-over-union of the two methods' top-k sets per source.
/// Both methods must cover the same source set.
inline MetricValue recommendation_iou(const std::vector<RecommendationList>& a,
                                      const std::vector<RecommendationList>& b) {
    std::map<std::string, const RecommendationList*> b_by_source;
    for (const auto& list : b) b_by_source[list.source] = &list;
    if (a.size() != b.size())
        throw InputError("recommendation_iou: methods cover different source sets");
    std::vector<double> per_source;
    per_source.reserve(a.size());
    for (const auto& la : a) {
        auto it = b_by_source.find(la.source);
        if (it == b_by_source.end())
            throw InputError("recommendation_iou: source '" + la.source +
                             "' missing from second method");
        std::set<std::string> sa, sb;
        for (const auto& e : la.entries) sa.insert(e.paper_id);
        for (const auto& e : it->second->entries) sb.insert(e.paper_id);
        std::vector<std::string> inter;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                              std::back_inserter(inter));
        size_t uni = sa.size() + sb.size() - inter.size();
        per_source.push_back(uni == 0 ? 0.0
                                      : static_cast<double>(inter.size()) /
                                            static_cast<double>(uni));
    }
    return {vec::mean(per_source), static_cast<long>(per_source.size())};
}

/// Occurrences of each paper across all top-k lists.
inline std::map<std::string, long> popularity_counts(
    const std::vector<RecommendationList>& lists,
    const std::vector<std::string>& universe) {
    std::map<std::string, long> counts;
    for (const auto& id : universe) counts[id] = 0;
    for (const auto& list : lists)
        for (const auto& e : list.entries) ++counts[e.paper_id];
    return counts;
}

struct PopularityBin {
    std::string label; // "0".."20" or ">20"
    long papers = 0;
};

/// Width-1 bins up to `overflow_at`, then a single overflow bucket.
inline std::vector<PopularityBin> popularity_histogram(
    const std::map<std::string, long>& counts, long overflow_at = 20) {
    std::vector<PopularityBin> bins;
    for (long c = 0; c <= overflow_at; ++c) bins.push_back({std::to_string(c), 0});
    bins.push_back({">" + std::to_string(overflow_at), 0});
    for (const auto& [id, c] : counts) {
        if (c <= overflow_at) ++bins[static_cast<size_t>(c)].papers;
        else ++bins.back().papers;
    }
    return bins;
}

struct JournalTopicRow {
    std::string journal; // "(unknown)" when absent
    std::string topic;
    double fraction = 0.0;
    long papers_in_journal = 0;
};

/// Per-journal multi-label topic fractions (fractions need not sum to 1).
inline std::vector<JournalTopicRow> topic_by_journal(const PropertyGraph& graph) {
    std::map<std::string, long> journal_papers;
    std::map<std::pair<std::string, std::string>, long> journal_topic;
    std::vector<std::string> topics;
    for (const Entity& t : graph.entities_of(EntityKind::Topic)) topics.push_back(t.key);

    for (const Entity& paper : graph.entities_of(EntityKind::Paper)) {
        const auto& rec = std::get<PaperRecord>(paper.attrs);
        std::string journal = rec.journal.value_or("(unknown)");
        ++journal_papers[journal];
        for (EntityId topic : graph.out_neighbors(Relation::associated_topic, paper.id))
            ++journal_topic[{journal, graph.entity(topic).key}];
    }

    std::vector<JournalTopicRow> rows;
    for (const auto& [journal, n] : journal_papers)
        for (const auto& topic : topics) {
            auto it = journal_topic.find({journal, topic});
            long hits = it == journal_topic.end() ? 0 : it->second;
            rows.push_back({journal, topic,
                            static_cast<double>(hits) / static_cast<double>(n), n});
        }
    return rows;
}

struct SvdProjection {
    std::vector<std::array<double, 2>> points;   // one (x, y) per input row
    std::array<std::vector<double>, 2> axes;     // right singular vectors
    std::array<double, 2> singular_values{};     // of the centered matrix
};

namespace svd_detail {

inline void orthogonalize(std::vector<double>& v, const std::vector<double>& against) {
    double proj = vec::dot(v, against);
    for (size_t i = 0; i < v.size(); ++i) v[i] -= proj * against[i];
}

// w = X^T (X v) without forming X^T X.
inline void apply_gram(const std::vector<std::vector<double>>& rows,
                       const std::vector<double>& v, std::vector<double>& w,
                       std::vector<double>& tmp_n) {
    for (size_t i = 0; i < rows.size(); ++i) tmp_n[i] = vec::dot(rows[i], v);
    std::fill(w.begin(), w.end(), 0.0);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < w.size(); ++j) w[j] += rows[i][j] * tmp_n[i];
}

} // namespace svd_detail

/// Top-2 projection of the column-centered matrix via power iteration with
/// deflation (tolerance 1e-10, at most 1000 iterations, seeded start).
/// Sign convention: each axis's largest-magnitude coordinate is positive.
inline SvdProjection truncated_svd_2d(const std::vector<std::vector<double>>& matrix,
                                      std::uint64_t seed = 12345) {
    const size_t n = matrix.size();
    if (n < 2) throw InputError("truncated_svd_2d: need at least 2 rows");
    const size_t d = matrix.front().size();
    if (d < 2) throw InputError("truncated_svd_2d: need at least 2 columns");
    for (const auto& row : matrix)
        if (row.size() != d) throw InputError("truncated_svd_2d: ragged matrix");

    std::vector<std::vector<double>> centered = matrix;
    std::vector<double> mean(d, 0.0);
    for (const auto& row : centered)
        for (size_t j = 0; j < d; ++j) mean[j] += row[j];
    for (size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
    double scale = 0.0;
    for (auto& row : centered)
        for (size_t j = 0; j < d; ++j) {
            row[j] -= mean[j];
            scale = std::max(scale, std::abs(row[j]));
        }

    const double tol = 1e-10;
    const int max_iters = 1000;
    Rng rng(seed);
    SvdProjection out;
    std::vector<double> tmp_n(n);

    for (int comp = 0; comp < 2; ++comp) {
        std::vector<double> v(d);
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        if (comp == 1) svd_detail::orthogonalize(v, out.axes[0]);
        if (!vec::l2_normalize(v)) v[0] = 1.0;

        std::vector<double> w(d);
        double residual = 1.0;
        bool converged = false;
        double lambda = 0.0;
        for (int iter = 0; iter < max_iters; ++iter) {
            svd_detail::apply_gram(centered, v, w, tmp_n);
            if (comp == 1) svd_detail::orthogonalize(w, out.axes[0]);
            lambda = vec::norm(w);
            if (lambda <= scale * scale * 1e-14 || lambda == 0.0) {
                // (near-)zero singular value: any unit vector orthogonal to
                // the previous axis is a valid axis
                for (size_t j = 0; j < d; ++j) {
                    std::fill(v.begin(), v.end(), 0.0);
                    v[j] = 1.0;
                    if (comp == 1) svd_detail::orthogonalize(v, out.axes[0]);
                    if (vec::norm(v) > 0.5) {
                        vec::l2_normalize(v);
                        break;
                    }
                }
                lambda = 0.0;
                converged = true;
                break;
            }
            for (double& x : w) x /= lambda;
            double diff_minus = 0.0, diff_plus = 0.0;
            for (size_t j = 0; j < d; ++j) {
                diff_minus += (w[j] - v[j]) * (w[j] - v[j]);
                diff_plus += (w[j] + v[j]) * (w[j] + v[j]);
            }
            residual = std::sqrt(std::min(diff_minus, diff_plus));
            v = w;
            if (residual < tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw ComputeError("truncated_svd_2d: power iteration did not converge; residual " +
                               std::to_string(residual));

        // sign convention
        size_t arg = 0;
        for (size_t j = 1; j < d; ++j)
            if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
        if (v[arg] < 0.0)
            for (double& x : v) x = -x;

        out.axes[static_cast<size_t>(comp)] = v;
        out.singular_values[static_cast<size_t>(comp)] = std::sqrt(lambda);
    }

    out.points.resize(n);
    for (size_t i = 0; i < n; ++i) {
        out.points[i][0] = vec::dot(centered[i], out.axes[0]);
        out.points[i][1] = vec::dot(centered[i], out.axes[1]);
    }
    return out;
}

} // namespace litkg
