#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "litkg/csv.hpp"
#include "litkg/errors.hpp"
#include "litkg/records.hpp"
#include "litkg/strings.hpp"

namespace litkg {

inline bool Corpus::has_paper(const std::string& id) const {
    auto it = std::lower_bound(papers.begin(), papers.end(), id,
                               [](const PaperRecord& p, const std::string& key) {
                                   return p.paper_id < key;
                               });
    return it != papers.end() && it->paper_id == id;
}

struct IngestConfig {
    std::vector<std::string> topic_vocabulary = default_topic_vocabulary();
};

struct CorpusCounts {
    size_t papers = 0;
    size_t author_mentions = 0;
    size_t concept_mentions = 0;
    size_t topic_assignments = 0;
    size_t bibliography = 0;
    size_t sections = 0;
};

inline CorpusCounts counts(const Corpus& c) {
    return {c.papers.size(),       c.author_mentions.size(), c.concept_mentions.size(),
            c.topic_assignments.size(), c.bibliography.size(), c.sections.size()};
}

struct LoadedCorpus {
    Corpus corpus;
    std::vector<std::string> warnings; // referential-integrity issues, non-fatal
};

namespace detail {

inline std::optional<std::string> opt_field(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s;
}

inline std::string opt_to_csv(const std::optional<std::string>& s) {
    return s ? *s : std::string();
}

// YYYY, YYYY-MM or YYYY-MM-DD.
inline bool valid_iso_date(const std::string& s) {
    auto digits = [&](size_t from, size_t n) {
        for (size_t i = from; i < from + n; ++i)
            if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    if (s.size() == 4) return digits(0, 4);
    if (s.size() == 7) return digits(0, 4) && s[4] == '-' && digits(5, 2);
    if (s.size() == 10)
        return digits(0, 4) && s[4] == '-' && digits(5, 2) && s[7] == '-' && digits(8, 2);
    return false;
}

inline double parse_unit_interval(const csv::Row& row, const std::string& file,
                                  const std::string& field_name, const std::string& value) {
    auto v = csv::parse_double(value);
    if (!v)
        throw InputError(file + ":" + std::to_string(row.line) + ": " + field_name +
                         " is not a number: '" + value + "'");
    if (*v < 0.0 || *v > 1.0)
        throw InputError(file + ":" + std::to_string(row.line) + ": " + field_name + " " +
                         value + " outside [0,1]");
    return *v;
}

inline std::vector<RefAuthor> parse_ref_authors(const csv::Row& row, const std::string& file,
                                                const std::string& value) {
    std::vector<RefAuthor> out;
    if (value.empty()) return out;
    for (const std::string& token : str::split(value, ';')) {
        if (token.empty()) continue;
        auto parts = str::split(token, '|');
        if (parts.size() != 3)
            throw InputError(file + ":" + std::to_string(row.line) +
                             ": ref_authors entry must be 'first|middle|last', got '" + token +
                             "'");
        if (parts[2].empty())
            throw InputError(file + ":" + std::to_string(row.line) +
                             ": ref_authors entry has empty last name: '" + token + "'");
        out.push_back({parts[0], parts[1], parts[2]});
    }
    return out;
}

// Header "prefix...,v0,v1,...,v{n-1}"; returns n.
inline size_t vector_column_count(const std::string& path,
                                  const std::vector<std::string>& header,
                                  size_t prefix_cols) {
    if (header.size() <= prefix_cols)
        throw InputError(path + ": header has no vector columns");
    for (size_t i = prefix_cols; i < header.size(); ++i) {
        std::string expected = "v" + std::to_string(i - prefix_cols);
        if (header[i] != expected)
            throw InputError(path + ": expected vector column '" + expected + "', got '" +
                             header[i] + "'");
    }
    return header.size() - prefix_cols;
}

inline std::vector<double> parse_vector_fields(const csv::Row& row, const std::string& file,
                                               size_t from) {
    std::vector<double> v;
    v.reserve(row.fields.size() - from);
    for (size_t i = from; i < row.fields.size(); ++i) {
        auto d = csv::parse_double(row.fields[i]);
        if (!d)
            throw InputError(file + ":" + std::to_string(row.line) +
                             ": vector component is not a number: '" + row.fields[i] + "'");
        v.push_back(*d);
    }
    return v;
}

template <typename T>
void sort_by_key(std::vector<T>& v) {
    std::sort(v.begin(), v.end(),
              [](const T& a, const T& b) { return a.sort_key() < b.sort_key(); });
}

} // namespace detail

/// Loads a corpus export directory. Fatal problems (missing mandatory file,
/// malformed row, duplicate paper_id, duplicate (paper_id, section)) throw
/// InputError with file and line; dangling paper references are collected
/// as warnings. Collections come back sorted on their natural keys.
inline LoadedCorpus load_corpus(const std::filesystem::path& dir,
                                const IngestConfig& config = {}) {
    namespace fs = std::filesystem;
    LoadedCorpus result;
    Corpus& c = result.corpus;
    c.topic_vocabulary = config.topic_vocabulary;

    auto mandatory = [&](const char* name) {
        fs::path p = dir / name;
        if (!fs::exists(p)) throw InputError("missing mandatory corpus file: " + p.string());
        return p.string();
    };

    // papers.csv
    {
        std::string path = mandatory("papers.csv");
        auto rows = csv::read_file(path, {"paper_id", "title", "pub_date", "journal", "doi"});
        std::unordered_set<std::string> seen;
        for (const auto& row : rows) {
            PaperRecord p;
            p.paper_id = row.fields[0];
            p.title = row.fields[1];
            if (p.paper_id.empty())
                throw InputError(path + ":" + std::to_string(row.line) + ": empty paper_id");
            if (p.title.empty())
                throw InputError(path + ":" + std::to_string(row.line) + ": empty title");
            if (!seen.insert(p.paper_id).second)
                throw InputError(path + ":" + std::to_string(row.line) +
                                 ": duplicate paper_id '" + p.paper_id + "'");
            p.pub_date = detail::opt_field(row.fields[2]);
            if (p.pub_date && !detail::valid_iso_date(*p.pub_date))
                throw InputError(path + ":" + std::to_string(row.line) +
                                 ": pub_date is not an ISO-8601 date: '" + *p.pub_date + "'");
            p.journal = detail::opt_field(row.fields[3]);
            p.doi = detail::opt_field(row.fields[4]);
            c.papers.push_back(std::move(p));
        }
        detail::sort_by_key(c.papers);
    }

    auto warn_dangling = [&](const std::string& file, long line, const std::string& id) {
        if (!c.has_paper(id))
            result.warnings.push_back(file + ":" + std::to_string(line) +
                                      ": reference to unknown paper_id '" + id + "'");
    };

    // author_mentions.csv
    {
        std::string path = mandatory("author_mentions.csv");
        auto rows = csv::read_file(
            path, {"paper_id", "first", "middle", "last", "inst_name", "inst_country",
                   "inst_city"});
        for (const auto& row : rows) {
            AuthorMention m;
            m.paper_id = row.fields[0];
            if (row.fields[3].empty())
                throw InputError(path + ":" + std::to_string(row.line) + ": empty last name");
            m.first = detail::opt_field(row.fields[1]);
            m.middle = detail::opt_field(row.fields[2]);
            m.last = row.fields[3];
            m.inst_name = detail::opt_field(row.fields[4]);
            m.inst_country = detail::opt_field(row.fields[5]);
            m.inst_city = detail::opt_field(row.fields[6]);
            warn_dangling(path, row.line, m.paper_id);
            c.author_mentions.push_back(std::move(m));
        }
        detail::sort_by_key(c.author_mentions);
    }

    // concept_mentions.csv
    {
        std::string path = mandatory("concept_mentions.csv");
        auto rows =
            csv::read_file(path, {"paper_id", "surface_text", "category", "confidence"});
        for (const auto& row : rows) {
            ConceptMention m;
            m.paper_id = row.fields[0];
            m.surface_text = row.fields[1];
            if (m.surface_text.empty())
                throw InputError(path + ":" + std::to_string(row.line) +
                                 ": empty surface_text");
            m.category = row.fields[2];
            m.confidence = detail::parse_unit_interval(row, path, "confidence", row.fields[3]);
            warn_dangling(path, row.line, m.paper_id);
            c.concept_mentions.push_back(std::move(m));
        }
        detail::sort_by_key(c.concept_mentions);
    }

    // topic_assignments.csv — out-of-vocabulary labels load fine and are
    // reported by validate_corpus; curation only keeps vocabulary topics.
    {
        std::string path = mandatory("topic_assignments.csv");
        auto rows = csv::read_file(path, {"paper_id", "topic_label", "score"});
        for (const auto& row : rows) {
            TopicAssignment t;
            t.paper_id = row.fields[0];
            t.topic_label = row.fields[1];
            if (t.topic_label.empty())
                throw InputError(path + ":" + std::to_string(row.line) + ": empty topic_label");
            t.score = detail::parse_unit_interval(row, path, "score", row.fields[2]);
            warn_dangling(path, row.line, t.paper_id);
            c.topic_assignments.push_back(std::move(t));
        }
        detail::sort_by_key(c.topic_assignments);
    }

    // bibliography.csv
    {
        std::string path = mandatory("bibliography.csv");
        auto rows = csv::read_file(path, {"citing_paper_id", "ref_title", "ref_authors"});
        for (const auto& row : rows) {
            BibliographyEntry b;
            b.citing_paper_id = row.fields[0];
            b.ref_title = row.fields[1];
            if (b.ref_title.empty())
                throw InputError(path + ":" + std::to_string(row.line) + ": empty ref_title");
            b.ref_authors = detail::parse_ref_authors(row, path, row.fields[2]);
            warn_dangling(path, row.line, b.citing_paper_id);
            c.bibliography.push_back(std::move(b));
        }
        std::sort(c.bibliography.begin(), c.bibliography.end(),
                  [](const BibliographyEntry& a, const BibliographyEntry& b) {
                      auto ka = std::tie(a.citing_paper_id, a.ref_title);
                      auto kb = std::tie(b.citing_paper_id, b.ref_title);
                      if (ka != kb) return ka < kb;
                      return a.ref_authors.size() < b.ref_authors.size();
                  });
    }

    // sections.jsonl (optional)
    {
        fs::path p = dir / "sections.jsonl";
        if (fs::exists(p)) {
            std::ifstream in(p, std::ios::binary);
            std::string line;
            long line_no = 0;
            std::set<std::pair<std::string, int>> seen;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty() || line[0] == '#') continue;
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(line);
                } catch (const nlohmann::json::exception& e) {
                    throw InputError(p.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
                }
                if (!j.contains("paper_id") || !j.contains("section") || !j.contains("text"))
                    throw InputError(p.string() + ":" + std::to_string(line_no) +
                                     ": object needs paper_id, section, text");
                SectionText s;
                s.paper_id = j["paper_id"].get<std::string>();
                auto sec = parse_section(j["section"].get<std::string>());
                if (!sec)
                    throw InputError(p.string() + ":" + std::to_string(line_no) +
                                     ": section must be title|abstract|body");
                s.section = *sec;
                s.text = j["text"].get<std::string>();
                if (!seen.insert({s.paper_id, static_cast<int>(s.section)}).second)
                    throw InputError(p.string() + ":" + std::to_string(line_no) +
                                     ": duplicate section '" +
                                     std::string(section_name(s.section)) + "' for paper '" +
                                     s.paper_id + "'");
                warn_dangling(p.string(), line_no, s.paper_id);
                c.sections.push_back(std::move(s));
            }
            detail::sort_by_key(c.sections);
        }
    }

    // semantic_vectors.csv (optional, per-document external vectors)
    {
        fs::path p = dir / "semantic_vectors.csv";
        if (fs::exists(p)) {
            std::ifstream in(p, std::ios::binary);
            csv::Reader reader(in, p.string());
            auto header = reader.next();
            if (!header) throw InputError(p.string() + ": empty file");
            if (header->fields.empty() || header->fields[0] != "paper_id")
                throw InputError(p.string() + ": first column must be paper_id");
            size_t dim = detail::vector_column_count(p.string(), header->fields, 1);
            while (auto row = reader.next()) {
                if (row->fields.size() != 1 + dim)
                    reader.fail(row->line, "wrong field count");
                ExternalDocVector v;
                v.paper_id = row->fields[0];
                v.values = detail::parse_vector_fields(*row, p.string(), 1);
                warn_dangling(p.string(), row->line, v.paper_id);
                c.external_doc_vectors.push_back(std::move(v));
            }
            std::sort(c.external_doc_vectors.begin(), c.external_doc_vectors.end(),
                      [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
        }
    }

    // sentence_vectors.csv (optional, per-sentence external vectors)
    {
        fs::path p = dir / "sentence_vectors.csv";
        if (fs::exists(p)) {
            std::ifstream in(p, std::ios::binary);
            csv::Reader reader(in, p.string());
            auto header = reader.next();
            if (!header) throw InputError(p.string() + ": empty file");
            if (header->fields.size() < 3 || header->fields[0] != "paper_id" ||
                header->fields[1] != "section" || header->fields[2] != "sentence_index")
                throw InputError(p.string() +
                                 ": columns must start paper_id,section,sentence_index");
            size_t dim = detail::vector_column_count(p.string(), header->fields, 3);
            while (auto row = reader.next()) {
                if (row->fields.size() != 3 + dim)
                    reader.fail(row->line, "wrong field count");
                ExternalSentenceVector v;
                v.paper_id = row->fields[0];
                auto sec = parse_section(row->fields[1]);
                if (!sec) reader.fail(row->line, "section must be title|abstract|body");
                v.section = *sec;
                auto idx = csv::parse_int(row->fields[2]);
                if (!idx || *idx < 0) reader.fail(row->line, "bad sentence_index");
                v.sentence_index = *idx;
                v.values = detail::parse_vector_fields(*row, p.string(), 3);
                warn_dangling(p.string(), row->line, v.paper_id);
                c.external_sentence_vectors.push_back(std::move(v));
            }
            std::sort(c.external_sentence_vectors.begin(), c.external_sentence_vectors.end(),
                      [](const auto& a, const auto& b) {
                          return std::tie(a.paper_id, a.section, a.sentence_index) <
                                 std::tie(b.paper_id, b.section, b.sentence_index);
                      });
        }
    }

    std::sort(result.warnings.begin(), result.warnings.end());
    return result;
}

struct ValidationReport {
    std::vector<std::string> dangling_references;
    std::vector<std::string> empty_sections;
    std::vector<std::string> out_of_vocabulary_topics;

    bool clean() const {
        return dangling_references.empty() && empty_sections.empty() &&
               out_of_vocabulary_topics.empty();
    }
    size_t total() const {
        return dangling_references.size() + empty_sections.size() +
               out_of_vocabulary_topics.size();
    }
};

/// Report-only consistency pass over a loaded corpus.
inline ValidationReport validate_corpus(const Corpus& c) {
    ValidationReport report;
    auto check_ref = [&](const std::string& id, const char* what) {
        if (!c.has_paper(id))
            report.dangling_references.push_back(std::string(what) +
                                                 " references unknown paper_id '" + id + "'");
    };
    for (const auto& m : c.author_mentions) check_ref(m.paper_id, "author_mention");
    for (const auto& m : c.concept_mentions) check_ref(m.paper_id, "concept_mention");
    for (const auto& t : c.topic_assignments) check_ref(t.paper_id, "topic_assignment");
    for (const auto& b : c.bibliography) check_ref(b.citing_paper_id, "bibliography_entry");
    for (const auto& s : c.sections) check_ref(s.paper_id, "section");
    for (const auto& v : c.external_doc_vectors) check_ref(v.paper_id, "semantic_vector");
    for (const auto& v : c.external_sentence_vectors) check_ref(v.paper_id, "sentence_vector");

    for (const auto& s : c.sections)
        if (str::trim(s.text).empty())
            report.empty_sections.push_back("paper '" + s.paper_id + "' section '" +
                                            section_name(s.section) + "' has empty text");

    std::set<std::string> vocab(c.topic_vocabulary.begin(), c.topic_vocabulary.end());
    for (const auto& t : c.topic_assignments)
        if (!vocab.count(t.topic_label))
            report.out_of_vocabulary_topics.push_back("paper '" + t.paper_id +
                                                      "' has unknown topic label '" +
                                                      t.topic_label + "'");
    return report;
}

/// Writes the corpus back as normalized CSV/JSONL. Serializing a freshly
/// loaded corpus is idempotent: load(serialize(c)) == c byte for byte.
inline void serialize_corpus(const Corpus& c, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    {
        std::ofstream out(dir / "papers.csv", std::ios::binary);
        csv::write_row(out, {"paper_id", "title", "pub_date", "journal", "doi"});
        for (const auto& p : c.papers)
            csv::write_row(out, {p.paper_id, p.title, detail::opt_to_csv(p.pub_date),
                                 detail::opt_to_csv(p.journal), detail::opt_to_csv(p.doi)});
    }
    {
        std::ofstream out(dir / "author_mentions.csv", std::ios::binary);
        csv::write_row(out, {"paper_id", "first", "middle", "last", "inst_name",
                             "inst_country", "inst_city"});
        for (const auto& m : c.author_mentions)
            csv::write_row(out, {m.paper_id, detail::opt_to_csv(m.first),
                                 detail::opt_to_csv(m.middle), m.last,
                                 detail::opt_to_csv(m.inst_name),
                                 detail::opt_to_csv(m.inst_country),
                                 detail::opt_to_csv(m.inst_city)});
    }
    {
        std::ofstream out(dir / "concept_mentions.csv", std::ios::binary);
        csv::write_row(out, {"paper_id", "surface_text", "category", "confidence"});
        for (const auto& m : c.concept_mentions)
            csv::write_row(out, {m.paper_id, m.surface_text, m.category,
                                 csv::format_double(m.confidence)});
    }
    {
        std::ofstream out(dir / "topic_assignments.csv", std::ios::binary);
        csv::write_row(out, {"paper_id", "topic_label", "score"});
        for (const auto& t : c.topic_assignments)
            csv::write_row(out, {t.paper_id, t.topic_label, csv::format_double(t.score)});
    }
    {
        std::ofstream out(dir / "bibliography.csv", std::ios::binary);
        csv::write_row(out, {"citing_paper_id", "ref_title", "ref_authors"});
        for (const auto& b : c.bibliography) {
            std::vector<std::string> tokens;
            tokens.reserve(b.ref_authors.size());
            for (const auto& a : b.ref_authors)
                tokens.push_back(a.first + "|" + a.middle + "|" + a.last);
            csv::write_row(out, {b.citing_paper_id, b.ref_title, str::join(tokens, ";")});
        }
    }
    if (!c.sections.empty()) {
        std::ofstream out(dir / "sections.jsonl", std::ios::binary);
        for (const auto& s : c.sections) {
            nlohmann::ordered_json j;
            j["paper_id"] = s.paper_id;
            j["section"] = section_name(s.section);
            j["text"] = s.text;
            out << j.dump() << '\n';
        }
    }
    if (!c.external_doc_vectors.empty()) {
        std::ofstream out(dir / "semantic_vectors.csv", std::ios::binary);
        std::vector<std::string> header = {"paper_id"};
        for (size_t i = 0; i < c.external_doc_vectors.front().values.size(); ++i)
            header.push_back("v" + std::to_string(i));
        csv::write_row(out, header);
        for (const auto& v : c.external_doc_vectors) {
            std::vector<std::string> row = {v.paper_id};
            for (double x : v.values) row.push_back(csv::format_double(x));
            csv::write_row(out, row);
        }
    }
    if (!c.external_sentence_vectors.empty()) {
        std::ofstream out(dir / "sentence_vectors.csv", std::ios::binary);
        std::vector<std::string> header = {"paper_id", "section", "sentence_index"};
        for (size_t i = 0; i < c.external_sentence_vectors.front().values.size(); ++i)
            header.push_back("v" + std::to_string(i));
        csv::write_row(out, header);
        for (const auto& v : c.external_sentence_vectors) {
            std::vector<std::string> row = {v.paper_id, section_name(v.section),
                                            csv::format_int(v.sentence_index)};
            for (double x : v.values) row.push_back(csv::format_double(x));
            csv::write_row(out, row);
        }
    }
}

} // namespace litkg
