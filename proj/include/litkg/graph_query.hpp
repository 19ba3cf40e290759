#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "litkg/curation.hpp"
#include "litkg/graph.hpp"

namespace litkg {

struct RankedEntity {
    EntityId id = 0;
    long count = 0; // matched papers behind this entity
};

struct ConceptTopicQueryResult {
    std::vector<std::string> unknown_concepts;
    std::vector<std::string> unknown_topics;
    std::vector<EntityId> papers;            // sorted by paper id
    std::vector<RankedEntity> authors;       // one hop, ranked by matched-paper count
    std::vector<RankedEntity> institutions;  // two hops, ranked by matched-paper count
};

namespace detail {

inline std::optional<EntityId> resolve_concept(const PropertyGraph& graph,
                                               const std::string& name) {
    for (auto mode : {NormalizationMode::lowercase_strip,
                      NormalizationMode::lowercase_strip_lemma}) {
        std::string norm = str::normalize_text(name);
        if (mode == NormalizationMode::lowercase_strip_lemma) {
            auto tokens = str::split(norm, ' ');
            for (auto& t : tokens) t = str::lemmatize_token(t);
            norm = str::join(tokens, " ");
        }
        if (norm.empty()) continue;
        if (auto id = graph.find(EntityKind::Concept, norm)) return id;
    }
    return std::nullopt;
}

inline std::optional<EntityId> resolve_topic(const PropertyGraph& graph,
                                             const std::string& label) {
    if (auto id = graph.find(EntityKind::Topic, label)) return id;
    std::string lowered = str::lower(str::trim(label));
    for (const Entity& e : graph.entities_of(EntityKind::Topic))
        if (str::lower(e.key) == lowered) return e.id;
    return std::nullopt;
}

inline std::vector<RankedEntity> ranked(const std::map<EntityId, long>& counts) {
    std::vector<RankedEntity> out;
    out.reserve(counts.size());
    for (const auto& [id, count] : counts) out.push_back({id, count});
    std::sort(out.begin(), out.end(), [](const RankedEntity& a, const RankedEntity& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.id < b.id;
    });
    return out;
}

} // namespace detail

/// Papers holding at least one of the named concepts AND at least one of
/// the named topics; their authors (one hop) and those authors'
/// institutions (two hops), each ranked by matched-paper count. Unknown
/// names are reported and treated as empty matches.
inline ConceptTopicQueryResult query_concept_topic(const PropertyGraph& graph,
                                                   const std::set<std::string>& concept_names,
                                                   const std::set<std::string>& topic_labels) {
    ConceptTopicQueryResult result;

    std::set<EntityId> concept_papers;
    for (const auto& name : concept_names) {
        auto id = detail::resolve_concept(graph, name);
        if (!id) {
            result.unknown_concepts.push_back(name);
            continue;
        }
        for (EntityId p : graph.in_neighbors(Relation::associated_concept, *id))
            concept_papers.insert(p);
    }
    std::set<EntityId> topic_papers;
    for (const auto& label : topic_labels) {
        auto id = detail::resolve_topic(graph, label);
        if (!id) {
            result.unknown_topics.push_back(label);
            continue;
        }
        for (EntityId p : graph.in_neighbors(Relation::associated_topic, *id))
            topic_papers.insert(p);
    }

    // conjunction across the two condition groups
    std::set_intersection(concept_papers.begin(), concept_papers.end(), topic_papers.begin(),
                          topic_papers.end(), std::back_inserter(result.papers));

    std::map<EntityId, long> author_counts;
    std::map<EntityId, std::set<EntityId>> institution_papers;
    for (EntityId paper : result.papers) {
        for (EntityId author : graph.out_neighbors(Relation::authored_by, paper)) {
            ++author_counts[author];
            for (EntityId inst : graph.out_neighbors(Relation::affiliated_with, author))
                institution_papers[inst].insert(paper);
        }
    }
    result.authors = detail::ranked(author_counts);
    std::map<EntityId, long> inst_counts;
    for (const auto& [inst, papers] : institution_papers)
        inst_counts[inst] = static_cast<long>(papers.size());
    result.institutions = detail::ranked(inst_counts);
    return result;
}

struct CitationRankRow {
    EntityId paper = 0;
    long cited_by = 0;
};

struct CitationRankResult {
    std::vector<std::string> unknown_concepts;
    std::vector<CitationRankRow> rows; // ranked by in-corpus citations
};

/// Papers matching at least one named concept, ranked by incoming cites
/// count (descending, ties by paper key ascending), truncated to `limit`.
inline CitationRankResult query_concept_citation_rank(
    const PropertyGraph& graph, const std::set<std::string>& concept_names, long limit) {
    if (limit < 1) throw InputError("query_concept_citation_rank: limit must be >= 1");
    CitationRankResult result;
    std::set<EntityId> papers;
    for (const auto& name : concept_names) {
        auto id = detail::resolve_concept(graph, name);
        if (!id) {
            result.unknown_concepts.push_back(name);
            continue;
        }
        for (EntityId p : graph.in_neighbors(Relation::associated_concept, *id))
            papers.insert(p);
    }
    for (EntityId p : papers)
        result.rows.push_back(
            {p, static_cast<long>(graph.in_neighbors(Relation::cites, p).size())});
    std::sort(result.rows.begin(), result.rows.end(),
              [](const CitationRankRow& a, const CitationRankRow& b) {
                  if (a.cited_by != b.cited_by) return a.cited_by > b.cited_by;
                  return a.paper < b.paper; // id order == paper_id order within papers
              });
    if (static_cast<long>(result.rows.size()) > limit) result.rows.resize(limit);
    return result;
}

} // namespace litkg
