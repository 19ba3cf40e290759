#pragma once

#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace litkg {

/// The closed default topic vocabulary. Overridable per corpus via config.
inline const std::vector<std::string>& default_topic_vocabulary() {
    static const std::vector<std::string> labels = {
        "Vaccines/Immunology",
        "Genomics",
        "Public Health Policies",
        "Epidemiology",
        "Clinical Treatment",
        "Virology",
        "Influenza",
        "Healthcare Industry",
        "Lab Trials (human)",
        "Pulmonary infections",
    };
    return labels;
}

struct PaperRecord {
    std::string paper_id;            // opaque key, CORD_UID-style
    std::string title;
    std::optional<std::string> pub_date; // ISO-8601 date
    std::optional<std::string> journal;
    std::optional<std::string> doi;

    auto sort_key() const { return std::tie(paper_id); }
};

struct AuthorMention {
    std::string paper_id;
    std::optional<std::string> first;
    std::optional<std::string> middle;
    std::string last;
    std::optional<std::string> inst_name;
    std::optional<std::string> inst_country;
    std::optional<std::string> inst_city;

    auto sort_key() const {
        return std::tie(paper_id, last, first, middle, inst_name, inst_country, inst_city);
    }
};

struct ConceptMention {
    std::string paper_id;
    std::string surface_text;
    std::string category; // open label set (Anatomy, Medication, ...)
    double confidence = 0.0;

    auto sort_key() const { return std::tie(paper_id, surface_text, category, confidence); }
};

struct TopicAssignment {
    std::string paper_id;
    std::string topic_label;
    double score = 0.0;

    auto sort_key() const { return std::tie(paper_id, topic_label, score); }
};

struct RefAuthor {
    std::string first;
    std::string middle;
    std::string last;

    auto sort_key() const { return std::tie(last, first, middle); }
    bool operator==(const RefAuthor&) const = default;
};

struct BibliographyEntry {
    std::string citing_paper_id;
    std::string ref_title;
    std::vector<RefAuthor> ref_authors;
};

enum class Section { title = 0, abstract = 1, body = 2 };

inline const char* section_name(Section s) {
    switch (s) {
        case Section::title: return "title";
        case Section::abstract: return "abstract";
        case Section::body: return "body";
    }
    return "?";
}

inline std::optional<Section> parse_section(const std::string& s) {
    if (s == "title") return Section::title;
    if (s == "abstract") return Section::abstract;
    if (s == "body") return Section::body;
    return std::nullopt;
}

struct SectionText {
    std::string paper_id;
    Section section = Section::title;
    std::string text;

    auto sort_key() const { return std::make_tuple(paper_id, static_cast<int>(section)); }
};

/// Externally supplied document vector (optional corpus input).
struct ExternalDocVector {
    std::string paper_id;
    std::vector<double> values;
};

/// Externally supplied per-sentence vector (optional corpus input).
struct ExternalSentenceVector {
    std::string paper_id;
    Section section = Section::title;
    long sentence_index = 0;
    std::vector<double> values;
};

/// Everything loaded from a corpus export directory. Immutable after load;
/// collections are sorted on their natural keys so identical input bytes
/// give an identical Corpus regardless of row order.
struct Corpus {
    std::vector<PaperRecord> papers;
    std::vector<AuthorMention> author_mentions;
    std::vector<ConceptMention> concept_mentions;
    std::vector<TopicAssignment> topic_assignments;
    std::vector<BibliographyEntry> bibliography;
    std::vector<SectionText> sections;
    std::vector<ExternalDocVector> external_doc_vectors;
    std::vector<ExternalSentenceVector> external_sentence_vectors;
    std::vector<std::string> topic_vocabulary;

    bool has_paper(const std::string& id) const;
};

} // namespace litkg
