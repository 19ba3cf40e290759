#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litkg/curation.hpp"
#include "litkg/evaluation.hpp"
#include "litkg/graph.hpp"
#include "litkg/graph_query.hpp"
#include "litkg/graph_stats.hpp"
#include "litkg/ingest.hpp"
#include "litkg/io.hpp"
#include "litkg/kge.hpp"
#include "litkg/semantic.hpp"
#include "litkg/similarity.hpp"

namespace litkg {

/// File-based stage configuration. Every stage reads its declared inputs
/// from corpus_dir / work_dir and writes its declared outputs under
/// work_dir; stage seeds are derived deterministically from `seed`.
struct PipelineConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path work_dir;
    std::uint64_t seed = 0;
    int workers = 1;

    CurationConfig curation;
    std::vector<std::string> topic_vocabulary = default_topic_vocabulary();

    // kge knobs (spec-level defaults; fixtures override via flags)
    int kge_dim = 400;
    double kge_gamma = 12.0;
    int kge_negatives = 16;
    int kge_batch_size = 1024;
    double kge_learning_rate = 0.01;
    int kge_epochs = 100;
    bool kge_unit_norm = false;
    std::set<Relation> exclude_relations;
    int folds = 10;

    SemanticConfig semantic;
    CombineWeights weights;
    int k = 5;
    std::string method = "combined"; // semantic | kge | combined | random

    // query parameters
    std::vector<std::string> query_concepts;
    std::vector<std::string> query_topics;
    long query_limit = 10;
    std::vector<std::string> svd_sources;

    KgeConfig kge_config() const {
        KgeConfig kc;
        kc.dim = kge_dim;
        kc.gamma = kge_gamma;
        kc.negatives_per_positive = kge_negatives;
        kc.batch_size = kge_batch_size;
        kc.learning_rate = kge_learning_rate;
        kc.epochs = kge_epochs;
        kc.unit_norm_projection = kge_unit_norm;
        kc.workers = workers;
        kc.seed = derive_seed(seed, "kge");
        kc.include_relations.clear();
        for (Relation r : kAllRelations)
            if (!exclude_relations.count(r)) kc.include_relations.insert(r);
        return kc;
    }

    IngestConfig ingest_config() const { return {topic_vocabulary}; }

    ConfigEcho echo() const {
        ConfigEcho e;
        auto add = [&](const std::string& k, const std::string& v) { e.push_back({k, v}); };
        add("corpus_dir", corpus_dir.string());
        add("work_dir", work_dir.string());
        add("seed", std::to_string(seed));
        add("workers", std::to_string(workers));
        add("threshold", csv::format_double(curation.concept_confidence_threshold));
        add("min_fraction", csv::format_double(curation.concept_min_fraction));
        add("flag_fraction", csv::format_double(curation.concept_flag_fraction));
        add("normalization", normalization_mode_name(curation.normalization_mode));
        add("dim", std::to_string(kge_dim));
        add("gamma", csv::format_double(kge_gamma));
        add("negatives", std::to_string(kge_negatives));
        add("batch_size", std::to_string(kge_batch_size));
        add("lr", csv::format_double(kge_learning_rate));
        add("epochs", std::to_string(kge_epochs));
        add("unit_norm", kge_unit_norm ? "1" : "0");
        std::string excluded;
        for (Relation r : exclude_relations)
            excluded += (excluded.empty() ? "" : "|") + std::string(relation_name(r));
        add("exclude_relations", excluded);
        add("folds", std::to_string(folds));
        add("sem_dim", std::to_string(semantic.dim));
        add("sem_source", semantic_source_name(semantic.source));
        std::string sections;
        for (Section s : semantic.sections_used)
            sections += (sections.empty() ? "" : "|") + std::string(section_name(s));
        add("sections", sections);
        add("w_sem", csv::format_double(weights.sem));
        add("w_kge", csv::format_double(weights.kge));
        add("k", std::to_string(k));
        add("method", method);
        return e;
    }
};

namespace stages {

namespace fs = std::filesystem;

// ---- ingest ---------------------------------------------------------------

inline ValidationReport run_ingest(const PipelineConfig& cfg) {
    auto loaded = load_corpus(cfg.corpus_dir, cfg.ingest_config());
    auto report = validate_corpus(loaded.corpus);
    fs::create_directories(cfg.work_dir);
    serialize_corpus(loaded.corpus, cfg.work_dir / "corpus_normalized");

    nlohmann::ordered_json j;
    j["meta"] = json_meta("ingest", cfg.echo());
    auto n = counts(loaded.corpus);
    j["counts"] = {{"papers", n.papers},
                   {"author_mentions", n.author_mentions},
                   {"concept_mentions", n.concept_mentions},
                   {"topic_assignments", n.topic_assignments},
                   {"bibliography", n.bibliography},
                   {"sections", n.sections}};
    j["load_warnings"] = loaded.warnings;
    j["dangling_references"] = report.dangling_references;
    j["empty_sections"] = report.empty_sections;
    j["out_of_vocabulary_topics"] = report.out_of_vocabulary_topics;
    write_json_file(cfg.work_dir / "validation_report.json", j);
    return report;
}

// ---- curate ---------------------------------------------------------------

inline CurationReport run_curate(const PipelineConfig& cfg) {
    auto loaded = load_corpus(cfg.corpus_dir, cfg.ingest_config());
    auto curated = curate(loaded.corpus, cfg.curation);
    fs::create_directories(cfg.work_dir);
    write_curated(curated, cfg.work_dir / "curated", csv_header_comment("curate", cfg.echo()));

    const CurationReport& r = curated.report;
    nlohmann::ordered_json j;
    j["meta"] = json_meta("curate", cfg.echo());
    j["mentions_in"] = r.mentions_in;
    j["dropped_low_confidence"] = r.dropped_low_confidence;
    j["dropped_unnormalizable"] = r.dropped_unnormalizable;
    j["pruned_rare"] = r.pruned_rare;
    j["flagged_frequent"] = r.flagged_frequent;
    j["authors_merged"] = r.authors_merged;
    j["citations_linked"] = r.citations_linked;
    j["dropped_out_of_vocabulary_topics"] = r.dropped_out_of_vocabulary_topics;
    j["dangling_mentions_skipped"] = r.dangling_mentions_skipped;
    j["entities"] = {{"papers", r.papers},
                     {"authors", r.author_entities},
                     {"institutions", r.institution_entities},
                     {"concepts", r.concept_entities},
                     {"topics", r.topic_entities}};
    j["triplets"] = r.triplets;
    write_json_file(cfg.work_dir / "curation_report.json", j);
    return curated.report;
}

inline PropertyGraph load_graph(const PipelineConfig& cfg) {
    return build_graph(read_curated(cfg.work_dir / "curated"));
}

// ---- build ----------------------------------------------------------------

inline void run_build(const PipelineConfig& cfg) {
    PropertyGraph graph = load_graph(cfg);
    nlohmann::ordered_json j;
    j["meta"] = json_meta("build", cfg.echo());
    nlohmann::ordered_json entity_counts, relation_counts;
    for (EntityKind k : kAllEntityKinds)
        entity_counts[kind_name(k)] = graph.count_of(k);
    for (Relation r : kAllRelations)
        relation_counts[relation_name(r)] = graph.relation_count(r);
    j["entities"] = entity_counts;
    j["entities_total"] = graph.entity_count();
    j["relations"] = relation_counts;
    j["relations_total"] = graph.triplet_count();
    write_json_file(cfg.work_dir / "graph_summary.json", j);
}

// ---- stats ----------------------------------------------------------------

inline void write_degree_hist(const PropertyGraph& graph, const std::set<Relation>& excluded,
                              const fs::path& path, const std::string& header) {
    auto hist = degree_distribution(graph, excluded);
    std::ofstream out(path, std::ios::binary);
    out << header;
    csv::write_row(out, {"degree", "count"});
    for (const auto& [degree, count] : hist)
        csv::write_row(out, {csv::format_int(degree), csv::format_int(count)});
}

inline GraphStats run_stats(const PipelineConfig& cfg) {
    PropertyGraph graph = load_graph(cfg);
    GraphStats stats = compute_stats(graph);

    nlohmann::ordered_json j;
    j["meta"] = json_meta("stats", cfg.echo());
    j["entities"] = stats.entity_counts;
    j["entities_total"] = graph.entity_count();
    j["relations"] = stats.relation_counts;
    j["relations_total"] = graph.triplet_count();
    j["mean_out_degree"] = stats.mean_out_degree;
    j["connected_components"] = stats.component_count;
    j["largest_cc_size"] = stats.largest_cc_size;
    j["largest_cc_diameter"] = stats.largest_cc_diameter;
    write_json_file(cfg.work_dir / "stats.json", j);

    std::string header = csv_header_comment("stats", cfg.echo());
    write_degree_hist(graph, {}, cfg.work_dir / "degree_hist_all.csv", header);
    write_degree_hist(graph, {Relation::associated_concept},
                      cfg.work_dir / "degree_hist_no_associated_concept.csv", header);
    write_degree_hist(graph, {Relation::cites}, cfg.work_dir / "degree_hist_no_cites.csv",
                      header);
    write_degree_hist(graph, {Relation::associated_topic},
                      cfg.work_dir / "degree_hist_no_associated_topic.csv", header);
    if (!cfg.exclude_relations.empty())
        write_degree_hist(graph, cfg.exclude_relations,
                          cfg.work_dir / "degree_hist_custom.csv", header);
    return stats;
}

// ---- queries ---------------------------------------------------------------

inline ConceptTopicQueryResult run_query_concept_topic(const PipelineConfig& cfg) {
    PropertyGraph graph = load_graph(cfg);
    std::set<std::string> concepts(cfg.query_concepts.begin(), cfg.query_concepts.end());
    std::set<std::string> topics(cfg.query_topics.begin(), cfg.query_topics.end());
    auto result = query_concept_topic(graph, concepts, topics);

    std::string header = csv_header_comment("query-concept-topic", cfg.echo());
    {
        std::ofstream out(cfg.work_dir / "qct_papers.csv", std::ios::binary);
        out << header;
        csv::write_row(out, {"paper_id", "title"});
        for (EntityId id : result.papers) {
            const auto& rec = std::get<PaperRecord>(graph.entity(id).attrs);
            csv::write_row(out, {rec.paper_id, rec.title});
        }
    }
    {
        std::ofstream out(cfg.work_dir / "qct_authors.csv", std::ios::binary);
        out << header;
        csv::write_row(out, {"author_key", "display_name", "matched_papers"});
        for (const auto& row : result.authors) {
            const Entity& e = graph.entity(row.id);
            const auto& a = std::get<AuthorAttrs>(e.attrs);
            std::string display = a.first;
            if (!a.middle.empty()) display += (display.empty() ? "" : " ") + a.middle;
            display += (display.empty() ? "" : " ") + a.last;
            csv::write_row(out, {e.key, display, csv::format_int(row.count)});
        }
    }
    {
        std::ofstream out(cfg.work_dir / "qct_institutions.csv", std::ios::binary);
        out << header;
        csv::write_row(out, {"inst_key", "name", "matched_papers"});
        for (const auto& row : result.institutions) {
            const Entity& e = graph.entity(row.id);
            csv::write_row(out, {e.key, std::get<InstitutionAttrs>(e.attrs).name,
                                 csv::format_int(row.count)});
        }
    }
    return result;
}

inline CitationRankResult run_query_citation_rank(const PipelineConfig& cfg) {
    PropertyGraph graph = load_graph(cfg);
    std::set<std::string> concepts(cfg.query_concepts.begin(), cfg.query_concepts.end());
    auto result = query_concept_citation_rank(graph, concepts, cfg.query_limit);

    std::ofstream out(cfg.work_dir / "citation_rank.csv", std::ios::binary);
    out << csv_header_comment("query-citation-rank", cfg.echo());
    csv::write_row(out, {"paper_id", "title", "cited_by"});
    for (const auto& row : result.rows) {
        const auto& rec = std::get<PaperRecord>(graph.entity(row.paper).attrs);
        csv::write_row(out, {rec.paper_id, rec.title, csv::format_int(row.cited_by)});
    }
    return result;
}

// ---- kge ------------------------------------------------------------------

inline void run_train_kge(const PipelineConfig& cfg) {
    PropertyGraph graph = load_graph(cfg);
    KgeConfig kc = cfg.kge_config();
    KgeModel model = train_kge(graph, kc);
    save_kge_model(model, kc, cfg.work_dir / "kge_model",
                   csv_header_comment("train-kge", cfg.echo()));
}

inline KfoldResult run_validate_kge(const PipelineConfig& cfg) {
    PropertyGraph graph = load_graph(cfg);
    KgeConfig kc = cfg.kge_config();
    auto result = kfold_validate(graph, kc, cfg.folds);

    {
        std::ofstream out(cfg.work_dir / "scores.csv", std::ios::binary);
        out << csv_header_comment("validate-kge", cfg.echo());
        csv::write_row(out, {"head", "relation", "tail", "fold", "score"});
        for (const auto& s : result.scores)
            csv::write_row(out, {graph.entity(s.triplet.head).key,
                                 relation_name(s.triplet.relation),
                                 graph.entity(s.triplet.tail).key, csv::format_int(s.fold),
                                 csv::format_double(s.score)});
    }
    nlohmann::ordered_json j;
    j["meta"] = json_meta("validate-kge", cfg.echo());
    j["folds"] = cfg.folds;
    j["scored_triplets"] = result.scores.size();
    j["warnings"] = result.warnings;
    auto summarize = [](const std::map<std::string, RelationScoreSummary>& summaries) {
        nlohmann::ordered_json by_rel;
        for (const auto& [name, s] : summaries) {
            nlohmann::ordered_json r;
            r["count"] = s.count;
            r["mean"] = s.mean;
            r["stddev"] = s.stddev;
            r["min"] = s.min;
            r["max"] = s.max;
            nlohmann::ordered_json hist = nlohmann::ordered_json::array();
            for (const auto& [edge, count] : s.histogram)
                hist.push_back({{"bin_lower_edge", edge}, {"count", count}});
            r["histogram"] = hist;
            by_rel[name] = r;
        }
        return by_rel;
    };
    j["by_relation"] = summarize(result.by_relation);
    j["corrupted_by_relation"] = summarize(result.corrupted_by_relation);
    write_json_file(cfg.work_dir / "kge_validation.json", j);
    return result;
}

// ---- semantic ---------------------------------------------------------------

inline void write_document_embeddings(const std::vector<DocumentEmbedding>& docs,
                                      const fs::path& path, const std::string& header) {
    std::ofstream out(path, std::ios::binary);
    out << header;
    size_t dim = docs.empty() ? 0 : docs.front().values.size();
    std::vector<std::string> cols = {"paper_id", "sections_present"};
    for (size_t i = 0; i < dim; ++i) cols.push_back("v" + std::to_string(i));
    csv::write_row(out, cols);
    for (const auto& d : docs) {
        std::string flags;
        for (Section s : d.sections_present) {
            if (!flags.empty()) flags += "|";
            flags += std::string(1, section_name(s)[0]); // t | a | b
        }
        std::vector<std::string> row = {d.paper_id, flags};
        for (double x : d.values) row.push_back(csv::format_double(x));
        csv::write_row(out, row);
    }
}

inline std::vector<DocumentEmbedding> read_document_embeddings(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    csv::Reader reader(in, path.string());
    auto header = reader.next();
    if (!header || header->fields.size() < 3 || header->fields[0] != "paper_id" ||
        header->fields[1] != "sections_present")
        throw InputError(path.string() + ": expected paper_id,sections_present,v0.. header");
    size_t dim = header->fields.size() - 2;
    std::vector<DocumentEmbedding> docs;
    while (auto row = reader.next()) {
        if (row->fields.size() != dim + 2) reader.fail(row->line, "wrong field count");
        DocumentEmbedding d;
        d.paper_id = row->fields[0];
        for (const auto& flag : str::split(row->fields[1], '|')) {
            if (flag == "t") d.sections_present.insert(Section::title);
            else if (flag == "a") d.sections_present.insert(Section::abstract);
            else if (flag == "b") d.sections_present.insert(Section::body);
        }
        d.values.reserve(dim);
        for (size_t i = 2; i < row->fields.size(); ++i) {
            auto x = csv::parse_double(row->fields[i]);
            if (!x) reader.fail(row->line, "bad vector value '" + row->fields[i] + "'");
            d.values.push_back(*x);
        }
        docs.push_back(std::move(d));
    }
    return docs;
}

inline SemanticsReport run_embed_semantic(const PipelineConfig& cfg) {
    auto loaded = load_corpus(cfg.corpus_dir, cfg.ingest_config());
    auto embeddings = embed_corpus(loaded.corpus, cfg.semantic);
    auto report = corpus_semantics_report(embeddings, loaded.corpus.papers.size(),
                                          derive_seed(cfg.seed, "semantic"));
    fs::create_directories(cfg.work_dir);
    write_document_embeddings(embeddings.documents, cfg.work_dir / "document_embeddings.csv",
                              csv_header_comment("embed-semantic", cfg.echo()));

    nlohmann::ordered_json j;
    j["meta"] = json_meta("embed-semantic", cfg.echo());
    j["source"] = semantic_source_name(embeddings.source_used);
    j["papers"] = loaded.corpus.papers.size();
    auto row = [](const SectionSimilarity& s) {
        nlohmann::ordered_json r;
        r["coverage"] = s.coverage;
        if (s.mean_cosine) r["mean_cosine_similarity"] = *s.mean_cosine;
        else r["mean_cosine_similarity"] = nullptr;
        r["vectors"] = s.vectors;
        return r;
    };
    nlohmann::ordered_json sections;
    for (const auto& [name, s] : report.by_section) sections[name] = row(s);
    j["sections"] = sections;
    j["combined"] = row(report.combined);
    write_json_file(cfg.work_dir / "semantics_report.json", j);
    return report;
}

// ---- combine / recommend -----------------------------------------------------

/// Paper-id keyed KGE vectors pulled out of the full entity table.
inline std::vector<std::pair<std::string, std::vector<double>>> paper_kge_vectors(
    const PropertyGraph& graph, const KgeModel& model) {
    std::vector<std::pair<std::string, std::vector<double>>> out;
    for (const Entity& paper : graph.entities_of(EntityKind::Paper)) {
        auto v = model.entity_vec(paper.id);
        out.push_back({paper.key, std::vector<double>(v.begin(), v.end())});
    }
    return out;
}

inline void run_combine(const PipelineConfig& cfg) {
    PropertyGraph graph = load_graph(cfg);
    KgeModel model = load_kge_model(cfg.work_dir / "kge_model");
    auto docs = read_document_embeddings(cfg.work_dir / "document_embeddings.csv");

    std::map<std::string, const DocumentEmbedding*> sem_by_id;
    for (const auto& d : docs) sem_by_id[d.paper_id] = &d;
    size_t d_sem = docs.empty() ? 0 : docs.front().values.size();
    size_t d_kge = static_cast<size_t>(model.dim());

    std::vector<CombinedEmbedding> combined;
    for (const auto& [paper_id, kge_vec] : paper_kge_vectors(graph, model)) {
        std::optional<std::span<const double>> sem;
        auto it = sem_by_id.find(paper_id);
        if (it != sem_by_id.end()) sem = std::span<const double>(it->second->values);
        combined.push_back(
            combine(paper_id, sem, std::span<const double>(kge_vec), cfg.weights, d_sem, d_kge));
    }

    std::ofstream out(cfg.work_dir / "combined_embeddings.csv", std::ios::binary);
    out << csv_header_comment("combine", cfg.echo());
    size_t dim = d_sem + d_kge;
    std::vector<std::string> cols = {"paper_id", "parts"};
    for (size_t i = 0; i < dim; ++i) cols.push_back("v" + std::to_string(i));
    csv::write_row(out, cols);
    std::sort(combined.begin(), combined.end(),
              [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; });
    for (const auto& c : combined) {
        std::string parts = c.has_sem && c.has_kge ? "sem|kge" : (c.has_sem ? "sem" : "kge");
        std::vector<std::string> row = {c.paper_id, parts};
        for (double x : c.values) row.push_back(csv::format_double(x));
        csv::write_row(out, row);
    }
}

inline std::vector<CombinedEmbedding> read_combined_embeddings(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    csv::Reader reader(in, path.string());
    auto header = reader.next();
    if (!header || header->fields.size() < 3 || header->fields[0] != "paper_id" ||
        header->fields[1] != "parts")
        throw InputError(path.string() + ": expected paper_id,parts,v0.. header");
    size_t dim = header->fields.size() - 2;
    std::vector<CombinedEmbedding> out;
    while (auto row = reader.next()) {
        if (row->fields.size() != dim + 2) reader.fail(row->line, "wrong field count");
        CombinedEmbedding c;
        c.paper_id = row->fields[0];
        c.has_sem = row->fields[1].find("sem") != std::string::npos;
        c.has_kge = row->fields[1].find("kge") != std::string::npos;
        for (size_t i = 2; i < row->fields.size(); ++i) {
            auto x = csv::parse_double(row->fields[i]);
            if (!x) reader.fail(row->line, "bad vector value");
            c.values.push_back(*x);
        }
        out.push_back(std::move(c));
    }
    return out;
}

/// Builds the per-method index the recommend stage scans. Single-method
/// indexes use the raw vectors (cosine is scale invariant).
inline SimilarityIndex build_method_index(const PipelineConfig& cfg, const std::string& method) {
    if (method == "semantic") {
        auto docs = read_document_embeddings(cfg.work_dir / "document_embeddings.csv");
        std::vector<CombinedEmbedding> items;
        for (auto& d : docs)
            items.push_back({d.paper_id, std::move(d.values), true, false});
        return SimilarityIndex(std::move(items));
    }
    if (method == "kge") {
        PropertyGraph graph = load_graph(cfg);
        KgeModel model = load_kge_model(cfg.work_dir / "kge_model");
        std::vector<CombinedEmbedding> items;
        for (auto& [id, v] : paper_kge_vectors(graph, model))
            items.push_back({id, std::move(v), false, true});
        return SimilarityIndex(std::move(items));
    }
    if (method == "combined" || method == "random")
        return SimilarityIndex(
            read_combined_embeddings(cfg.work_dir / "combined_embeddings.csv"));
    throw InputError("unknown method '" + method + "' (semantic|kge|combined|random)");
}

inline void run_recommend(const PipelineConfig& cfg, const std::string& out_name = {}) {
    SimilarityIndex index = build_method_index(cfg, cfg.method);
    std::vector<RecommendationList> lists;
    if (cfg.method == "random")
        lists = random_recommendations(index, cfg.k, derive_seed(cfg.seed, "random"));
    else
        lists = batch_top_k(index, cfg.k, cfg.workers);
    fs::path out = cfg.work_dir / (out_name.empty() ? "recommendations.csv" : out_name);
    write_recommendations(lists, out, csv_header_comment("recommend", cfg.echo()));
}

// ---- evaluate ---------------------------------------------------------------

inline void run_evaluate(const PipelineConfig& cfg, const std::vector<std::string>& methods) {
    PropertyGraph graph = load_graph(cfg);
    TopicStore topics = build_topic_store(graph, cfg.topic_vocabulary);
    auto cites = out_citation_sets(graph);

    std::map<std::string, std::vector<RecommendationList>> lists;
    for (const auto& m : methods)
        lists[m] = read_recommendations(cfg.work_dir / ("recommendations_" + m + ".csv"));

    std::vector<std::string> universe;
    for (const Entity& p : graph.entities_of(EntityKind::Paper)) universe.push_back(p.key);

    nlohmann::ordered_json j;
    j["meta"] = json_meta("evaluate", cfg.echo());
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    auto add_report = [&](const std::string& method, const std::string& metric,
                          const MetricValue& v) {
        reports.push_back({{"method", method},
                           {"metric", metric},
                           {"value", v.value},
                           {"support", v.support}});
    };

    for (const auto& m : methods) {
        add_report(m, "topic_similarity", corpus_topic_similarity(lists[m], topics));
        add_report(m, "citation_overlap_percent", citation_overlap(lists[m], cites, cfg.k));
    }

    // Pairwise IoU matrix (Table-7 shape).
    {
        std::ofstream out(cfg.work_dir / "iou_matrix.csv", std::ios::binary);
        out << csv_header_comment("evaluate", cfg.echo());
        std::vector<std::string> header = {"method"};
        header.insert(header.end(), methods.begin(), methods.end());
        csv::write_row(out, header);
        for (const auto& a : methods) {
            std::vector<std::string> row = {a};
            for (const auto& b : methods) {
                MetricValue v = recommendation_iou(lists[a], lists[b]);
                row.push_back(csv::format_double(v.value));
                if (a < b) add_report(a + " vs " + b, "recommendation_iou", v);
            }
            csv::write_row(out, row);
        }
    }

    // Popularity histograms.
    {
        std::ofstream out(cfg.work_dir / "popularity.csv", std::ios::binary);
        out << csv_header_comment("evaluate", cfg.echo());
        csv::write_row(out, {"method", "occurrences", "num_papers"});
        for (const auto& m : methods) {
            auto counts = popularity_counts(lists[m], universe);
            for (const auto& bin : popularity_histogram(counts))
                csv::write_row(out, {m, bin.label, csv::format_int(bin.papers)});
        }
    }

    // Topic distribution by journal.
    {
        std::ofstream out(cfg.work_dir / "topic_by_journal.csv", std::ios::binary);
        out << csv_header_comment("evaluate", cfg.echo());
        csv::write_row(out, {"journal", "topic", "fraction", "papers_in_journal"});
        for (const auto& row : topic_by_journal(graph))
            csv::write_row(out, {row.journal, row.topic, csv::format_double(row.fraction),
                                 csv::format_int(row.papers_in_journal)});
    }

    j["reports"] = reports;
    write_json_file(cfg.work_dir / "evaluation_report.json", j);
}

// ---- svd ---------------------------------------------------------------------

inline void run_svd(const PipelineConfig& cfg) {
    SimilarityIndex index = build_method_index(
        cfg, cfg.method == "random" ? std::string("combined") : cfg.method);
    std::vector<std::string> sources = cfg.svd_sources;
    if (sources.empty()) {
        for (size_t i = 0; i < index.size() && i < 5; ++i)
            sources.push_back(index.item(i).paper_id);
    }

    // union of each source and its top-k, grouped by source
    std::vector<std::string> member_ids;
    std::vector<std::string> member_groups;
    std::set<std::string> seen_pairs;
    auto add = [&](const std::string& id, const std::string& group) {
        if (seen_pairs.insert(group + "\x1f" + id).second) {
            member_ids.push_back(id);
            member_groups.push_back(group);
        }
    };
    for (const auto& src : sources) {
        add(src, src);
        for (const auto& e : top_k(index, src, cfg.k).entries) add(e.paper_id, src);
    }

    // dedupe papers for the projection itself
    std::map<std::string, size_t> proj_index;
    std::vector<std::vector<double>> matrix;
    for (const auto& id : member_ids) {
        if (proj_index.count(id)) continue;
        auto idx = index.find(id);
        proj_index[id] = matrix.size();
        matrix.push_back(index.item(*idx).values);
    }
    auto projection = truncated_svd_2d(matrix, derive_seed(cfg.seed, "svd"));

    std::ofstream out(cfg.work_dir / "svd_projection.csv", std::ios::binary);
    out << csv_header_comment("svd", cfg.echo());
    csv::write_row(out, {"paper_id", "x", "y", "source_group"});
    for (size_t i = 0; i < member_ids.size(); ++i) {
        const auto& point = projection.points[proj_index[member_ids[i]]];
        csv::write_row(out, {member_ids[i], csv::format_double(point[0]),
                             csv::format_double(point[1]), member_groups[i]});
    }
}

// ---- pipeline -----------------------------------------------------------------

/// All stages against one work dir; later stages consume the files the
/// earlier ones wrote.
inline void run_pipeline(const PipelineConfig& cfg) {
    run_ingest(cfg);
    run_curate(cfg);
    run_build(cfg);
    run_stats(cfg);
    run_train_kge(cfg);
    run_validate_kge(cfg);
    run_embed_semantic(cfg);
    run_combine(cfg);
    std::vector<std::string> methods = {"semantic", "kge", "combined", "random"};
    for (const auto& m : methods) {
        PipelineConfig mc = cfg;
        mc.method = m;
        run_recommend(mc, "recommendations_" + m + ".csv");
    }
    run_evaluate(cfg, methods);
    run_svd(cfg);
}

} // namespace stages
} // namespace litkg
