#pragma once

#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "litkg/records.hpp"

namespace litkg {

enum class EntityKind { Paper = 0, Author = 1, Institution = 2, Concept = 3, Topic = 4 };
inline constexpr std::array<EntityKind, 5> kAllEntityKinds = {
    EntityKind::Paper, EntityKind::Author, EntityKind::Institution, EntityKind::Concept,
    EntityKind::Topic};

inline const char* kind_name(EntityKind k) {
    switch (k) {
        case EntityKind::Paper: return "paper";
        case EntityKind::Author: return "author";
        case EntityKind::Institution: return "institution";
        case EntityKind::Concept: return "concept";
        case EntityKind::Topic: return "topic";
    }
    return "?";
}

inline std::optional<EntityKind> parse_kind(const std::string& s) {
    for (EntityKind k : kAllEntityKinds)
        if (s == kind_name(k)) return k;
    return std::nullopt;
}

enum class Relation {
    authored_by = 0,       // paper -> author
    affiliated_with = 1,   // author -> institution
    associated_concept = 2,// paper -> concept, weight = confidence
    associated_topic = 3,  // paper -> topic, weight = score
    cites = 4,             // paper -> paper
};
inline constexpr std::array<Relation, 5> kAllRelations = {
    Relation::authored_by, Relation::affiliated_with, Relation::associated_concept,
    Relation::associated_topic, Relation::cites};
inline constexpr size_t kRelationCount = 5;

inline const char* relation_name(Relation r) {
    switch (r) {
        case Relation::authored_by: return "authored_by";
        case Relation::affiliated_with: return "affiliated_with";
        case Relation::associated_concept: return "associated_concept";
        case Relation::associated_topic: return "associated_topic";
        case Relation::cites: return "cites";
    }
    return "?";
}

inline std::optional<Relation> parse_relation(const std::string& s) {
    for (Relation r : kAllRelations)
        if (s == relation_name(r)) return r;
    return std::nullopt;
}

/// Fixed (head kind, tail kind) signature per relation type.
inline EntityKind head_kind(Relation r) {
    return r == Relation::affiliated_with ? EntityKind::Author : EntityKind::Paper;
}

inline EntityKind tail_kind(Relation r) {
    switch (r) {
        case Relation::authored_by: return EntityKind::Author;
        case Relation::affiliated_with: return EntityKind::Institution;
        case Relation::associated_concept: return EntityKind::Concept;
        case Relation::associated_topic: return EntityKind::Topic;
        case Relation::cites: return EntityKind::Paper;
    }
    return EntityKind::Paper;
}

struct AuthorAttrs {
    std::string first;
    std::string middle;
    std::string last;
};

struct InstitutionAttrs {
    std::string name;
    std::string country;
    std::string city;
};

struct ConceptAttrs {
    std::string name;      // normalized form, equals the entity key
    std::string category;  // majority category across merged mentions
    long paper_count = 0;
    bool flagged = false;  // above the flag fraction, kept for manual review
};

struct TopicAttrs {
    std::string label;
};

/// Variant order matches EntityKind so the index doubles as the kind.
using EntityAttrs =
    std::variant<PaperRecord, AuthorAttrs, InstitutionAttrs, ConceptAttrs, TopicAttrs>;

struct CuratedEntity {
    std::string key; // natural key, unique within a kind
    EntityAttrs attrs;

    EntityKind kind() const { return static_cast<EntityKind>(attrs.index()); }
};

struct CuratedTriplet {
    Relation relation = Relation::authored_by;
    std::string head_key;
    std::string tail_key;
    std::optional<double> weight;

    auto sort_key() const { return std::tie(relation, head_key, tail_key); }
};

struct CurationReport {
    long mentions_in = 0;
    long dropped_low_confidence = 0;
    long dropped_unnormalizable = 0;
    long pruned_rare = 0;      // concept entities removed by the min-fraction rule
    long flagged_frequent = 0; // concept entities above the flag fraction (kept)
    long authors_merged = 0;   // raw name variants folded into an existing author
    long citations_linked = 0;
    long dropped_out_of_vocabulary_topics = 0;
    long dangling_mentions_skipped = 0;
    long papers = 0;
    long author_entities = 0;
    long institution_entities = 0;
    long concept_entities = 0;
    long topic_entities = 0;
    long triplets = 0;
};

struct CuratedGraphInput {
    std::vector<CuratedEntity> entities;  // sorted by (kind, key)
    std::vector<CuratedTriplet> triplets; // sorted by (relation, head, tail)
    CurationReport report;
};

} // namespace litkg
