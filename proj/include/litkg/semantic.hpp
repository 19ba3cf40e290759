#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litkg/errors.hpp"
#include "litkg/records.hpp"
#include "litkg/rng.hpp"
#include "litkg/strings.hpp"
#include "litkg/vec.hpp"

namespace litkg {

enum class SemanticSource { auto_detect, external_vectors, fallback_hashing };

inline const char* semantic_source_name(SemanticSource s) {
    switch (s) {
        case SemanticSource::auto_detect: return "auto";
        case SemanticSource::external_vectors: return "external_vectors";
        case SemanticSource::fallback_hashing: return "fallback_hashing";
    }
    return "?";
}

struct SemanticConfig {
    int dim = 768; // used by the fallback encoder; external vectors fix their own
    SemanticSource source = SemanticSource::auto_detect;
    std::set<Section> sections_used = {Section::title, Section::abstract, Section::body};

    void check() const {
        if (dim < 1) throw InputError("semantic: dim must be >= 1");
        if (sections_used.empty()) throw InputError("semantic: sections_used must be non-empty");
    }
};

/// Splits on '.', '!' or '?' followed by whitespace and an uppercase letter
/// or digit. Text without any boundary comes back as a single sentence.
inline std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        size_t j = i + 1;
        if (j >= text.size() || !str::is_space(text[j])) continue;
        while (j < text.size() && str::is_space(text[j])) ++j;
        if (j >= text.size()) continue;
        char next = text[j];
        if ((next >= 'A' && next <= 'Z') || (next >= '0' && next <= '9')) {
            std::string sentence = str::trim(text.substr(start, i + 1 - start));
            if (!sentence.empty()) out.push_back(std::move(sentence));
            start = j;
            i = j - 1;
        }
    }
    std::string last = str::trim(text.substr(start));
    if (!last.empty()) out.push_back(std::move(last));
    return out;
}

/// Signed feature hashing: tokens are lowercased alphanumeric runs, each
/// hashed by FNV-1a 64 to an index (hash mod dim) and a sign (bit 63);
/// signed counts are accumulated and L2-normalized. Deterministic and
/// dependency-free stand-in for an external sentence encoder.
inline std::vector<double> fallback_encode(const std::string& sentence, int dim) {
    if (dim < 1) throw InputError("fallback_encode: dim must be >= 1");
    std::vector<double> v(static_cast<size_t>(dim), 0.0);
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        std::uint64_t h = str::fnv1a64(token);
        size_t idx = static_cast<size_t>(h % static_cast<std::uint64_t>(dim));
        v[idx] += (h >> 63) ? -1.0 : 1.0;
        token.clear();
    };
    for (char c : sentence) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            token.push_back(str::to_lower(c));
        else
            flush();
    }
    flush();
    vec::l2_normalize(v);
    return v;
}

struct DocumentEmbedding {
    std::string paper_id;
    std::vector<double> values;
    std::set<Section> sections_present;
};

/// Per-section mean of the sentence vectors, then the unweighted mean of
/// the available section means. Missing sections are excluded, not
/// zero-filled.
inline DocumentEmbedding document_vector(
    const std::string& paper_id,
    const std::map<Section, std::vector<std::vector<double>>>& sections) {
    DocumentEmbedding doc;
    doc.paper_id = paper_id;
    std::vector<std::vector<double>> section_means;
    for (const auto& [section, sentence_vectors] : sections) {
        if (sentence_vectors.empty()) continue;
        std::vector<double> mean(sentence_vectors.front().size(), 0.0);
        for (const auto& s : sentence_vectors) {
            if (s.size() != mean.size())
                throw InputError("document_vector: inconsistent sentence vector dimensions");
            for (size_t i = 0; i < mean.size(); ++i) mean[i] += s[i];
        }
        for (double& x : mean) x /= static_cast<double>(sentence_vectors.size());
        section_means.push_back(std::move(mean));
        doc.sections_present.insert(section);
    }
    if (section_means.empty())
        throw InputError("document_vector: no sections with sentence vectors for paper '" +
                         paper_id + "'");
    doc.values.assign(section_means.front().size(), 0.0);
    for (const auto& m : section_means)
        for (size_t i = 0; i < doc.values.size(); ++i) doc.values[i] += m[i];
    for (double& x : doc.values) x /= static_cast<double>(section_means.size());
    return doc;
}

struct SemanticEmbeddings {
    std::vector<DocumentEmbedding> documents; // sorted by paper_id
    // per-paper section means, kept for the coverage/similarity report
    std::map<Section, std::vector<std::pair<std::string, std::vector<double>>>> section_means;
    SemanticSource source_used = SemanticSource::fallback_hashing;
};

/// One document vector per paper. External per-document vectors pass
/// through; external sentence vectors and the fallback encoder flow
/// through the section-mean averaging pipeline. A paper with no text in
/// any used section gets no embedding. When sections.jsonl carries no
/// title text, the papers.csv title stands in.
inline SemanticEmbeddings embed_corpus(const Corpus& corpus, const SemanticConfig& config) {
    config.check();
    SemanticEmbeddings out;

    SemanticSource source = config.source;
    if (source == SemanticSource::auto_detect)
        source = (!corpus.external_doc_vectors.empty() ||
                  !corpus.external_sentence_vectors.empty())
                     ? SemanticSource::external_vectors
                     : SemanticSource::fallback_hashing;
    out.source_used = source;

    if (source == SemanticSource::external_vectors && !corpus.external_doc_vectors.empty()) {
        // document granularity: vectors pass through, section presence
        // comes from the corpus text metadata
        for (const auto& v : corpus.external_doc_vectors) {
            DocumentEmbedding doc;
            doc.paper_id = v.paper_id;
            doc.values = v.values;
            for (const auto& s : corpus.sections)
                if (s.paper_id == v.paper_id && config.sections_used.count(s.section))
                    doc.sections_present.insert(s.section);
            if (doc.sections_present.empty()) doc.sections_present.insert(Section::title);
            out.documents.push_back(std::move(doc));
        }
        std::sort(out.documents.begin(), out.documents.end(),
                  [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
        return out;
    }

    // sentence granularity (external or fallback-encoded)
    std::map<std::string, std::map<Section, std::vector<std::vector<double>>>> per_paper;
    if (source == SemanticSource::external_vectors) {
        if (corpus.external_sentence_vectors.empty())
            throw InputError("semantic: source=external_vectors but neither "
                             "semantic_vectors.csv nor sentence_vectors.csv was loaded");
        for (const auto& v : corpus.external_sentence_vectors)
            if (config.sections_used.count(v.section))
                per_paper[v.paper_id][v.section].push_back(v.values);
    } else {
        std::map<std::pair<std::string, Section>, const std::string*> texts;
        for (const auto& s : corpus.sections)
            if (config.sections_used.count(s.section))
                texts[{s.paper_id, s.section}] = &s.text;
        for (const auto& p : corpus.papers)
            if (config.sections_used.count(Section::title) &&
                !texts.count({p.paper_id, Section::title}))
                texts[{p.paper_id, Section::title}] = &p.title;
        for (const auto& [key, text] : texts) {
            for (const auto& sentence : split_sentences(*text)) {
                auto v = fallback_encode(sentence, config.dim);
                if (vec::norm(v) == 0.0) continue; // no tokens
                per_paper[key.first][key.second].push_back(std::move(v));
            }
        }
    }

    for (const auto& [paper_id, sections] : per_paper) {
        bool any = false;
        for (const auto& [sec, vs] : sections) any = any || !vs.empty();
        if (!any) continue;
        auto doc = document_vector(paper_id, sections);
        for (const auto& [sec, vs] : sections) {
            if (vs.empty()) continue;
            std::vector<double> mean(vs.front().size(), 0.0);
            for (const auto& s : vs)
                for (size_t i = 0; i < mean.size(); ++i) mean[i] += s[i];
            for (double& x : mean) x /= static_cast<double>(vs.size());
            out.section_means[sec].push_back({paper_id, std::move(mean)});
        }
        out.documents.push_back(std::move(doc));
    }
    return out;
}

struct SectionSimilarity {
    double coverage = 0.0;             // fraction of papers with this section
    std::optional<double> mean_cosine; // absent when fewer than 2 vectors
    long vectors = 0;
};

struct SemanticsReport {
    std::map<std::string, SectionSimilarity> by_section; // "title","abstract","body"
    SectionSimilarity combined;                          // over document vectors
};

namespace semantic_detail {

inline std::optional<double> mean_pairwise_cosine(
    const std::vector<const std::vector<double>*>& vs, std::uint64_t seed) {
    const size_t n = vs.size();
    if (n < 2) return std::nullopt;
    const size_t kExactLimit = 5000;
    std::vector<double> sims;
    if (n < kExactLimit) {
        sims.reserve(n * (n - 1) / 2);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) sims.push_back(vec::cosine(*vs[i], *vs[j]));
    } else {
        Rng rng(seed);
        const size_t kSamples = 1000000;
        sims.reserve(kSamples);
        for (size_t s = 0; s < kSamples; ++s) {
            size_t i = static_cast<size_t>(rng.uniform_index(n));
            size_t j = static_cast<size_t>(rng.uniform_index(n - 1));
            if (j >= i) ++j;
            sims.push_back(vec::cosine(*vs[i], *vs[j]));
        }
    }
    return vec::mean(sims);
}

} // namespace semantic_detail

/// Coverage and mean pairwise cosine similarity per section and for the
/// combined document vectors (exact below 5,000 papers, seeded sampling
/// of 1e6 pairs above).
inline SemanticsReport corpus_semantics_report(const SemanticEmbeddings& embeddings,
                                               size_t n_papers, std::uint64_t seed = 0) {
    SemanticsReport report;
    if (n_papers == 0) return report;
    for (const auto& [section, entries] : embeddings.section_means) {
        SectionSimilarity s;
        s.vectors = static_cast<long>(entries.size());
        s.coverage = static_cast<double>(entries.size()) / static_cast<double>(n_papers);
        std::vector<const std::vector<double>*> vs;
        vs.reserve(entries.size());
        for (const auto& [id, v] : entries) vs.push_back(&v);
        s.mean_cosine = semantic_detail::mean_pairwise_cosine(
            vs, derive_seed(seed, section_name(section)));
        report.by_section[section_name(section)] = std::move(s);
    }
    SectionSimilarity combined;
    combined.vectors = static_cast<long>(embeddings.documents.size());
    combined.coverage =
        static_cast<double>(embeddings.documents.size()) / static_cast<double>(n_papers);
    std::vector<const std::vector<double>*> vs;
    vs.reserve(embeddings.documents.size());
    for (const auto& d : embeddings.documents) vs.push_back(&d.values);
    combined.mean_cosine = semantic_detail::mean_pairwise_cosine(vs, derive_seed(seed, "combined"));
    report.combined = std::move(combined);
    return report;
}

} // namespace litkg
