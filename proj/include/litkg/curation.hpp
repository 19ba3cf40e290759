#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "litkg/csv.hpp"
#include "litkg/errors.hpp"
#include "litkg/records.hpp"
#include "litkg/schema.hpp"
#include "litkg/strings.hpp"

namespace litkg {

enum class NormalizationMode { lowercase_strip, lowercase_strip_lemma };

inline const char* normalization_mode_name(NormalizationMode m) {
    return m == NormalizationMode::lowercase_strip ? "lowercase_strip"
                                                   : "lowercase_strip_lemma";
}

struct CurationConfig {
    double concept_confidence_threshold = 0.5;
    double concept_min_fraction = 1e-4; // of papers; below this a concept is pruned
    double concept_flag_fraction = 0.5; // above this a concept is flagged (kept)
    NormalizationMode normalization_mode = NormalizationMode::lowercase_strip;

    void check() const {
        if (concept_confidence_threshold < 0.0 || concept_confidence_threshold > 1.0)
            throw InputError("concept_confidence_threshold outside [0,1]");
        if (concept_min_fraction < 0.0 || concept_min_fraction >= concept_flag_fraction ||
            concept_flag_fraction > 1.0)
            throw InputError("need 0 <= concept_min_fraction < concept_flag_fraction <= 1");
    }
};

/// Normalized author key: lowercase, punctuation removed, parts joined by
/// single spaces. Idempotent.
inline std::string normalize_author(const std::optional<std::string>& first,
                                    const std::optional<std::string>& middle,
                                    const std::string& last) {
    if (last.empty()) throw InputError("normalize_author: empty last name");
    std::string key;
    auto append = [&](const std::string& part) {
        std::string norm = str::normalize_text(part);
        if (norm.empty()) return;
        if (!key.empty()) key.push_back(' ');
        key += norm;
    };
    if (first) append(*first);
    if (middle) append(*middle);
    std::string last_norm = str::normalize_text(last);
    if (last_norm.empty())
        throw InputError("normalize_author: last name '" + last +
                         "' is empty after normalization");
    if (!key.empty()) key.push_back(' ');
    key += last_norm;
    return key;
}

/// Normalized concept name; in lemma mode each token additionally goes
/// through the rule-based suffix singularizer.
inline std::string normalize_concept(const std::string& surface_text, NormalizationMode mode) {
    if (surface_text.empty()) throw InputError("normalize_concept: empty surface text");
    std::string norm = str::normalize_text(surface_text);
    if (mode == NormalizationMode::lowercase_strip_lemma) {
        auto tokens = str::split(norm, ' ');
        for (auto& t : tokens) t = str::lemmatize_token(t);
        norm = str::join(tokens, " ");
    }
    if (norm.empty())
        throw InputError("normalize_concept: '" + surface_text +
                         "' is empty after normalization");
    return norm;
}

struct ConceptCuration {
    std::vector<CuratedEntity> entities;   // sorted by key
    std::vector<CuratedTriplet> triplets;  // associated_concept, max confidence per pair
    std::vector<std::string> flagged;      // keys above the flag fraction
    long mentions_in = 0;
    long dropped_low_confidence = 0;
    long dropped_unnormalizable = 0;
    long pruned_rare = 0;
};

/// Confidence thresholding, name normalization/merging, rare-concept
/// pruning and frequent-concept flagging.
inline ConceptCuration curate_concepts(const std::vector<ConceptMention>& mentions,
                                       long n_papers, const CurationConfig& config) {
    if (n_papers <= 0) throw InputError("curate_concepts: n_papers must be positive");
    config.check();
    ConceptCuration out;
    out.mentions_in = static_cast<long>(mentions.size());

    struct PerConcept {
        std::map<std::string, double> max_conf_by_paper;
        std::map<std::string, long> category_votes;
    };
    std::map<std::string, PerConcept> grouped;
    for (const auto& m : mentions) {
        if (m.confidence < config.concept_confidence_threshold) {
            ++out.dropped_low_confidence;
            continue;
        }
        std::string name = str::normalize_text(m.surface_text);
        if (config.normalization_mode == NormalizationMode::lowercase_strip_lemma) {
            auto tokens = str::split(name, ' ');
            for (auto& t : tokens) t = str::lemmatize_token(t);
            name = str::join(tokens, " ");
        }
        if (name.empty()) {
            ++out.dropped_unnormalizable;
            continue;
        }
        auto& pc = grouped[name];
        auto [it, inserted] = pc.max_conf_by_paper.try_emplace(m.paper_id, m.confidence);
        if (!inserted) it->second = std::max(it->second, m.confidence);
        ++pc.category_votes[m.category];
    }

    // ceil with a downward nudge so that fraction*n landing on an integer is
    // not pushed up by floating-point noise (1e-4 * 10000 must give 1).
    const long min_count = static_cast<long>(
        std::ceil(config.concept_min_fraction * static_cast<double>(n_papers) - 1e-9));
    const double flag_count =
        config.concept_flag_fraction * static_cast<double>(n_papers) + 1e-9;

    for (const auto& [name, pc] : grouped) {
        long papers = static_cast<long>(pc.max_conf_by_paper.size());
        if (papers < min_count) {
            ++out.pruned_rare;
            continue;
        }
        bool flagged = static_cast<double>(papers) > flag_count;
        if (flagged) out.flagged.push_back(name);

        std::string category;
        long best = -1;
        for (const auto& [cat, votes] : pc.category_votes)
            if (votes > best) {
                best = votes;
                category = cat;
            }
        out.entities.push_back({name, ConceptAttrs{name, category, papers, flagged}});
        for (const auto& [paper_id, conf] : pc.max_conf_by_paper)
            out.triplets.push_back({Relation::associated_concept, paper_id, name, conf});
    }
    std::sort(out.triplets.begin(), out.triplets.end(),
              [](const CuratedTriplet& a, const CuratedTriplet& b) {
                  return a.sort_key() < b.sort_key();
              });
    return out;
}

struct AuthorCuration {
    std::vector<CuratedEntity> authors;       // sorted by key
    std::vector<CuratedEntity> institutions;  // sorted by key
    std::vector<CuratedTriplet> authored_by;
    std::vector<CuratedTriplet> affiliated_with;
    long authors_merged = 0;
    long dropped_unnormalizable = 0;
};

/// Merges author mentions on the normalized name key and institutions on
/// the lowercased name; emits the deduplicated relation triplets.
inline AuthorCuration curate_authors(const std::vector<AuthorMention>& mentions) {
    AuthorCuration out;

    struct AuthorAgg {
        std::set<std::tuple<std::string, std::string, std::string>> variants;
    };
    struct InstAgg {
        std::set<std::string> names;
        std::set<std::string> countries;
        std::set<std::string> cities;
    };
    std::map<std::string, AuthorAgg> authors;
    std::map<std::string, InstAgg> institutions;
    std::set<std::pair<std::string, std::string>> authored;
    std::set<std::pair<std::string, std::string>> affiliated;

    for (const auto& m : mentions) {
        std::string key;
        try {
            key = normalize_author(m.first, m.middle, m.last);
        } catch (const InputError&) {
            ++out.dropped_unnormalizable;
            continue;
        }
        authors[key].variants.insert(
            {m.first.value_or(""), m.middle.value_or(""), m.last});
        authored.insert({m.paper_id, key});

        if (m.inst_name) {
            std::string inst_key = str::lower(str::trim(*m.inst_name));
            if (!inst_key.empty()) {
                auto& agg = institutions[inst_key];
                agg.names.insert(str::trim(*m.inst_name));
                if (m.inst_country) agg.countries.insert(*m.inst_country);
                if (m.inst_city) agg.cities.insert(*m.inst_city);
                affiliated.insert({key, inst_key});
            }
        }
    }

    for (const auto& [key, agg] : authors) {
        // Representative display name: the longest variant, ties broken
        // lexicographically, so "John Q. Smith" beats "J. Smith".
        std::tuple<std::string, std::string, std::string> best;
        size_t best_len = 0;
        for (const auto& v : agg.variants) {
            size_t len =
                std::get<0>(v).size() + std::get<1>(v).size() + std::get<2>(v).size();
            if (len > best_len || (len == best_len && v < best)) {
                best = v;
                best_len = len;
            }
        }
        out.authors.push_back(
            {key, AuthorAttrs{std::get<0>(best), std::get<1>(best), std::get<2>(best)}});
        out.authors_merged += static_cast<long>(agg.variants.size()) - 1;
    }
    for (const auto& [key, agg] : institutions) {
        InstitutionAttrs attrs;
        attrs.name = agg.names.empty() ? key : *agg.names.begin();
        if (!agg.countries.empty()) attrs.country = *agg.countries.begin();
        if (!agg.cities.empty()) attrs.city = *agg.cities.begin();
        out.institutions.push_back({key, std::move(attrs)});
    }
    for (const auto& [paper, author] : authored)
        out.authored_by.push_back({Relation::authored_by, paper, author, std::nullopt});
    for (const auto& [author, inst] : affiliated)
        out.affiliated_with.push_back({Relation::affiliated_with, author, inst, std::nullopt});
    return out;
}

namespace detail {

inline std::string author_multiset_key(std::vector<std::string> keys) {
    std::sort(keys.begin(), keys.end());
    return str::join(keys, "\x1f");
}

} // namespace detail

/// Emits a cites triplet when a bibliography entry's normalized title AND
/// normalized author-name multiset both match a corpus paper exactly.
/// Self-citations are dropped.
inline std::vector<CuratedTriplet> link_citations(
    const std::vector<BibliographyEntry>& bibliography,
    const std::vector<PaperRecord>& papers,
    const std::vector<AuthorMention>& author_mentions) {
    std::map<std::string, std::vector<std::string>> authors_by_paper;
    for (const auto& m : author_mentions) {
        try {
            authors_by_paper[m.paper_id].push_back(normalize_author(m.first, m.middle, m.last));
        } catch (const InputError&) {
            // unnormalizable names are skipped on both sides
        }
    }

    std::map<std::pair<std::string, std::string>, std::vector<std::string>> index;
    for (const auto& p : papers) {
        std::string title = str::normalize_text(p.title);
        auto it = authors_by_paper.find(p.paper_id);
        std::string authors = detail::author_multiset_key(
            it == authors_by_paper.end() ? std::vector<std::string>{} : it->second);
        index[{title, authors}].push_back(p.paper_id);
    }

    std::set<std::pair<std::string, std::string>> links;
    for (const auto& entry : bibliography) {
        std::string title = str::normalize_text(entry.ref_title);
        std::vector<std::string> ref_keys;
        for (const auto& a : entry.ref_authors) {
            try {
                ref_keys.push_back(normalize_author(
                    a.first.empty() ? std::nullopt : std::make_optional(a.first),
                    a.middle.empty() ? std::nullopt : std::make_optional(a.middle), a.last));
            } catch (const InputError&) {
            }
        }
        auto it = index.find({title, detail::author_multiset_key(std::move(ref_keys))});
        if (it == index.end()) continue;
        for (const auto& cited : it->second)
            if (cited != entry.citing_paper_id) links.insert({entry.citing_paper_id, cited});
    }

    std::vector<CuratedTriplet> out;
    out.reserve(links.size());
    for (const auto& [citing, cited] : links)
        out.push_back({Relation::cites, citing, cited, std::nullopt});
    return out;
}

struct TopicCuration {
    std::vector<CuratedEntity> topics; // only labels that are actually used
    std::vector<CuratedTriplet> triplets;
    long dropped_out_of_vocabulary = 0;
};

inline TopicCuration curate_topics(const std::vector<TopicAssignment>& assignments,
                                   const std::vector<std::string>& vocabulary) {
    TopicCuration out;
    std::set<std::string> vocab(vocabulary.begin(), vocabulary.end());
    std::map<std::pair<std::string, std::string>, double> max_score;
    for (const auto& a : assignments) {
        if (!vocab.count(a.topic_label)) {
            ++out.dropped_out_of_vocabulary;
            continue;
        }
        auto [it, inserted] = max_score.try_emplace({a.paper_id, a.topic_label}, a.score);
        if (!inserted) it->second = std::max(it->second, a.score);
    }
    std::set<std::string> used;
    for (const auto& [pair, score] : max_score) {
        out.triplets.push_back({Relation::associated_topic, pair.first, pair.second, score});
        used.insert(pair.second);
    }
    for (const auto& label : used) out.topics.push_back({label, TopicAttrs{label}});
    return out;
}

/// Full curation pass: mentions referencing unknown papers are skipped,
/// then concepts, authors, topics and citations are curated independently
/// and merged into one referentially intact entity/triplet set.
inline CuratedGraphInput curate(const Corpus& corpus, const CurationConfig& config = {}) {
    config.check();
    CuratedGraphInput out;
    CurationReport& report = out.report;

    std::unordered_set<std::string> known;
    for (const auto& p : corpus.papers) known.insert(p.paper_id);
    auto keep = [&](const std::string& id) {
        if (known.count(id)) return true;
        ++report.dangling_mentions_skipped;
        return false;
    };

    std::vector<ConceptMention> concept_mentions;
    for (const auto& m : corpus.concept_mentions)
        if (keep(m.paper_id)) concept_mentions.push_back(m);
    std::vector<AuthorMention> author_mentions;
    for (const auto& m : corpus.author_mentions)
        if (keep(m.paper_id)) author_mentions.push_back(m);
    std::vector<TopicAssignment> topic_assignments;
    for (const auto& t : corpus.topic_assignments)
        if (keep(t.paper_id)) topic_assignments.push_back(t);
    std::vector<BibliographyEntry> bibliography;
    for (const auto& b : corpus.bibliography)
        if (keep(b.citing_paper_id)) bibliography.push_back(b);

    auto concepts = curate_concepts(concept_mentions,
                                    static_cast<long>(corpus.papers.size()), config);
    auto authors = curate_authors(author_mentions);
    auto topics = curate_topics(topic_assignments, corpus.topic_vocabulary);
    auto cites = link_citations(bibliography, corpus.papers, author_mentions);

    for (const auto& p : corpus.papers) out.entities.push_back({p.paper_id, p});
    for (auto& e : authors.authors) out.entities.push_back(std::move(e));
    for (auto& e : authors.institutions) out.entities.push_back(std::move(e));
    for (auto& e : concepts.entities) out.entities.push_back(std::move(e));
    for (auto& e : topics.topics) out.entities.push_back(std::move(e));
    std::sort(out.entities.begin(), out.entities.end(),
              [](const CuratedEntity& a, const CuratedEntity& b) {
                  if (a.kind() != b.kind()) return a.kind() < b.kind();
                  return a.key < b.key;
              });

    auto append = [&](std::vector<CuratedTriplet>& src) {
        for (auto& t : src) out.triplets.push_back(std::move(t));
    };
    append(authors.authored_by);
    append(authors.affiliated_with);
    append(concepts.triplets);
    append(topics.triplets);
    append(cites);
    std::sort(out.triplets.begin(), out.triplets.end(),
              [](const CuratedTriplet& a, const CuratedTriplet& b) {
                  return a.sort_key() < b.sort_key();
              });

    report.mentions_in = concepts.mentions_in;
    report.dropped_low_confidence = concepts.dropped_low_confidence;
    report.dropped_unnormalizable =
        concepts.dropped_unnormalizable + authors.dropped_unnormalizable;
    report.pruned_rare = concepts.pruned_rare;
    report.flagged_frequent = static_cast<long>(concepts.flagged.size());
    report.authors_merged = authors.authors_merged;
    report.citations_linked = static_cast<long>(cites.size());
    report.dropped_out_of_vocabulary_topics = topics.dropped_out_of_vocabulary;
    report.papers = static_cast<long>(corpus.papers.size());
    report.author_entities = static_cast<long>(authors.authors.size());
    report.institution_entities = static_cast<long>(authors.institutions.size());
    report.concept_entities = static_cast<long>(concepts.entities.size());
    report.topic_entities = static_cast<long>(topics.topics.size());
    report.triplets = static_cast<long>(out.triplets.size());
    return out;
}

/// Curated entity/triplet CSVs, mirroring the ingest schema.
inline void write_curated(const CuratedGraphInput& curated, const std::filesystem::path& dir,
                          const std::string& header_comment = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!header_comment.empty()) out << header_comment;
        return out;
    };

    auto papers = open("papers.csv");
    csv::write_row(papers, {"paper_id", "title", "pub_date", "journal", "doi"});
    auto authors = open("authors.csv");
    csv::write_row(authors, {"author_key", "first", "middle", "last"});
    auto institutions = open("institutions.csv");
    csv::write_row(institutions, {"inst_key", "name", "country", "city"});
    auto concepts = open("concepts.csv");
    csv::write_row(concepts, {"name", "category", "paper_count", "flagged"});
    auto topics = open("topics.csv");
    csv::write_row(topics, {"label"});

    for (const auto& e : curated.entities) {
        switch (e.kind()) {
            case EntityKind::Paper: {
                const auto& p = std::get<PaperRecord>(e.attrs);
                csv::write_row(papers, {p.paper_id, p.title, p.pub_date.value_or(""),
                                        p.journal.value_or(""), p.doi.value_or("")});
                break;
            }
            case EntityKind::Author: {
                const auto& a = std::get<AuthorAttrs>(e.attrs);
                csv::write_row(authors, {e.key, a.first, a.middle, a.last});
                break;
            }
            case EntityKind::Institution: {
                const auto& i = std::get<InstitutionAttrs>(e.attrs);
                csv::write_row(institutions, {e.key, i.name, i.country, i.city});
                break;
            }
            case EntityKind::Concept: {
                const auto& ca = std::get<ConceptAttrs>(e.attrs);
                csv::write_row(concepts, {ca.name, ca.category, csv::format_int(ca.paper_count),
                                          ca.flagged ? "1" : "0"});
                break;
            }
            case EntityKind::Topic:
                csv::write_row(topics, {e.key});
                break;
        }
    }

    auto triplets = open("triplets.csv");
    csv::write_row(triplets, {"relation", "head_key", "tail_key", "weight"});
    for (const auto& t : curated.triplets)
        csv::write_row(triplets, {relation_name(t.relation), t.head_key, t.tail_key,
                                  t.weight ? csv::format_double(*t.weight) : ""});
}

/// Reads back what write_curated produced.
inline CuratedGraphInput read_curated(const std::filesystem::path& dir) {
    CuratedGraphInput curated;
    auto path = [&](const char* name) { return (dir / name).string(); };
    auto opt = [](const std::string& s) {
        return s.empty() ? std::optional<std::string>() : std::optional<std::string>(s);
    };

    for (const auto& row :
         csv::read_file(path("papers.csv"), {"paper_id", "title", "pub_date", "journal", "doi"})) {
        PaperRecord p;
        p.paper_id = row.fields[0];
        p.title = row.fields[1];
        p.pub_date = opt(row.fields[2]);
        p.journal = opt(row.fields[3]);
        p.doi = opt(row.fields[4]);
        curated.entities.push_back({p.paper_id, std::move(p)});
    }
    for (const auto& row :
         csv::read_file(path("authors.csv"), {"author_key", "first", "middle", "last"})) {
        curated.entities.push_back(
            {row.fields[0], AuthorAttrs{row.fields[1], row.fields[2], row.fields[3]}});
    }
    for (const auto& row :
         csv::read_file(path("institutions.csv"), {"inst_key", "name", "country", "city"})) {
        curated.entities.push_back(
            {row.fields[0], InstitutionAttrs{row.fields[1], row.fields[2], row.fields[3]}});
    }
    for (const auto& row :
         csv::read_file(path("concepts.csv"), {"name", "category", "paper_count", "flagged"})) {
        auto count = csv::parse_int(row.fields[2]);
        if (!count) throw InputError(path("concepts.csv") + ": bad paper_count");
        curated.entities.push_back({row.fields[0], ConceptAttrs{row.fields[0], row.fields[1],
                                                                static_cast<long>(*count),
                                                                row.fields[3] == "1"}});
    }
    for (const auto& row : csv::read_file(path("topics.csv"), {"label"}))
        curated.entities.push_back({row.fields[0], TopicAttrs{row.fields[0]}});

    std::sort(curated.entities.begin(), curated.entities.end(),
              [](const CuratedEntity& a, const CuratedEntity& b) {
                  if (a.kind() != b.kind()) return a.kind() < b.kind();
                  return a.key < b.key;
              });

    for (const auto& row : csv::read_file(path("triplets.csv"),
                                          {"relation", "head_key", "tail_key", "weight"})) {
        auto rel = parse_relation(row.fields[0]);
        if (!rel)
            throw InputError(path("triplets.csv") + ":" + std::to_string(row.line) +
                             ": unknown relation '" + row.fields[0] + "'");
        std::optional<double> weight;
        if (!row.fields[3].empty()) {
            auto w = csv::parse_double(row.fields[3]);
            if (!w)
                throw InputError(path("triplets.csv") + ":" + std::to_string(row.line) +
                                 ": bad weight '" + row.fields[3] + "'");
            weight = *w;
        }
        curated.triplets.push_back({*rel, row.fields[1], row.fields[2], weight});
    }
    std::sort(curated.triplets.begin(), curated.triplets.end(),
              [](const CuratedTriplet& a, const CuratedTriplet& b) {
                  return a.sort_key() < b.sort_key();
              });
    return curated;
}

} // namespace litkg
