#pragma once

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "litkg/pipeline.hpp"
#include "litkg/version.hpp"

namespace litkg::cli {

namespace detail {

inline std::set<Relation> parse_relation_set(const std::vector<std::string>& names) {
    std::set<Relation> out;
    for (const auto& raw : names) {
        for (const auto& name : str::split(raw, ',')) {
            if (name.empty()) continue;
            auto r = parse_relation(name);
            if (!r) throw InputError("unknown relation '" + name + "'");
            out.insert(*r);
        }
    }
    return out;
}

inline std::set<Section> parse_section_set(const std::string& flags) {
    std::set<Section> out;
    for (const auto& name : str::split(flags, '|')) {
        auto s = parse_section(name);
        if (!s) throw InputError("unknown section '" + name + "' (title|abstract|body)");
        out.insert(*s);
    }
    if (out.empty()) throw InputError("empty section set");
    return out;
}

} // namespace detail

/// Parses argv, dispatches to the stage functions under litkg::stages.
/// Exit codes: 0 ok, 1 usage error, 2 input validation failure,
/// 3 runtime failure.
inline int run(std::vector<std::string> args) {
    CLI::App app{std::string(kToolName) +
                 " - scholarly knowledge-graph construction, embedding and "
                 "recommendation toolkit"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.set_config("--config")->description("key=value config file; command line wins");
    app.fallthrough();
    app.require_subcommand(1);

    PipelineConfig cfg;
    std::string corpus_dir = ".", work_dir = "work";
    std::string sections = "title|abstract|body";
    std::string sem_source = "auto";
    std::string topic_vocab_joined;
    std::vector<std::string> exclude_relations;
    std::vector<std::string> eval_methods = {"semantic", "kge", "combined", "random"};
    std::string recommend_out;
    bool lemma = false;
    bool unit_norm = false;

    auto* seed_opt =
        app.add_option("--seed", cfg.seed, "global seed; stage seeds derive from it");
    app.add_option("--corpus-dir", corpus_dir, "corpus export directory");
    app.add_option("--work-dir", work_dir, "stage artifact directory");
    app.add_option("--workers", cfg.workers, "worker threads; 1 = deterministic path")
        ->check(CLI::PositiveNumber);
    app.add_option("--k", cfg.k, "recommendations per paper")->check(CLI::PositiveNumber);
    app.add_option("--threshold", cfg.curation.concept_confidence_threshold,
                   "concept confidence threshold");
    app.add_option("--min-fraction", cfg.curation.concept_min_fraction,
                   "prune concepts below this fraction of papers");
    app.add_option("--flag-fraction", cfg.curation.concept_flag_fraction,
                   "flag concepts above this fraction of papers");
    app.add_flag("--lemma", lemma, "lemmatize concept names");
    app.add_option("--dim", cfg.kge_dim, "embedding dimension")->check(CLI::PositiveNumber);
    app.add_option("--gamma", cfg.kge_gamma, "score offset");
    app.add_option("--negatives", cfg.kge_negatives, "negatives per positive")
        ->check(CLI::PositiveNumber);
    app.add_option("--batch-size", cfg.kge_batch_size, "minibatch size")
        ->check(CLI::PositiveNumber);
    app.add_option("--lr", cfg.kge_learning_rate, "learning rate");
    app.add_option("--epochs", cfg.kge_epochs, "training epochs")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--unit-norm", unit_norm, "project entity embeddings to unit norm");
    app.add_option("--exclude-relations", exclude_relations,
                   "relation types to leave out (comma separated or repeated)");
    app.add_option("--folds", cfg.folds, "validation folds")->check(CLI::PositiveNumber);
    app.add_option("--sem-dim", cfg.semantic.dim, "fallback encoder dimension")
        ->check(CLI::PositiveNumber);
    app.add_option("--sem-source", sem_source,
                   "semantic vector source: auto|external_vectors|fallback_hashing");
    app.add_option("--sections", sections, "sections used, e.g. title|abstract");
    app.add_option("--w-sem", cfg.weights.sem, "semantic part weight");
    app.add_option("--w-kge", cfg.weights.kge, "kge part weight");
    app.add_option("--method", cfg.method, "semantic|kge|combined|random");
    app.add_option("--topic-vocabulary", topic_vocab_joined,
                   "override topic vocabulary, labels separated by |");
    app.add_option("--concepts", cfg.query_concepts, "concept names (repeatable)");
    app.add_option("--topics", cfg.query_topics, "topic labels (repeatable)");
    app.add_option("--limit", cfg.query_limit, "result limit")->check(CLI::PositiveNumber);
    app.add_option("--sources", cfg.svd_sources, "source paper ids (repeatable)");
    app.add_option("--out", recommend_out, "output file name override (recommend)");
    app.add_option("--methods", eval_methods, "methods to evaluate (repeatable)");

    auto* sc_ingest = app.add_subcommand("ingest", "load and validate a corpus export");
    auto* sc_curate = app.add_subcommand("curate", "normalize mentions into entities/triplets");
    auto* sc_build = app.add_subcommand("build", "build the property graph and report counts");
    auto* sc_stats = app.add_subcommand("stats", "graph statistics and degree histograms");
    auto* sc_qct = app.add_subcommand("query-concept-topic",
                                      "papers/authors/institutions for concepts AND topics");
    auto* sc_qcr = app.add_subcommand("query-citation-rank",
                                      "rank concept-matching papers by in-corpus citations");
    auto* sc_train = app.add_subcommand("train-kge", "train translation embeddings");
    auto* sc_validate = app.add_subcommand("validate-kge", "k-fold link-prediction scoring");
    auto* sc_embed = app.add_subcommand("embed-semantic", "document vectors + coverage report");
    auto* sc_combine = app.add_subcommand("combine", "fuse semantic and kge vectors");
    auto* sc_recommend = app.add_subcommand("recommend", "top-k similar papers per paper");
    auto* sc_evaluate = app.add_subcommand("evaluate", "recommendation quality metrics");
    auto* sc_svd = app.add_subcommand("svd", "2-d projection of selected papers");
    auto* sc_pipeline = app.add_subcommand("pipeline", "run every stage in order");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cfg.corpus_dir = corpus_dir;
        cfg.work_dir = work_dir;
        cfg.curation.normalization_mode = lemma ? NormalizationMode::lowercase_strip_lemma
                                                : NormalizationMode::lowercase_strip;
        cfg.kge_unit_norm = unit_norm;
        cfg.exclude_relations = detail::parse_relation_set(exclude_relations);
        cfg.semantic.sections_used = detail::parse_section_set(sections);
        if (sem_source == "auto") cfg.semantic.source = SemanticSource::auto_detect;
        else if (sem_source == "external_vectors")
            cfg.semantic.source = SemanticSource::external_vectors;
        else if (sem_source == "fallback_hashing")
            cfg.semantic.source = SemanticSource::fallback_hashing;
        else throw InputError("unknown --sem-source '" + sem_source + "'");
        if (!topic_vocab_joined.empty()) {
            cfg.topic_vocabulary = str::split(topic_vocab_joined, '|');
            for (const auto& label : cfg.topic_vocabulary)
                if (label.empty()) throw InputError("empty label in --topic-vocabulary");
        }
        cfg.curation.check();

        const bool uses_random =
            cfg.method == "random" || sc_pipeline->parsed() ||
            (sc_evaluate->parsed() && std::find(eval_methods.begin(), eval_methods.end(),
                                                "random") != eval_methods.end());
        if (uses_random && seed_opt->count() == 0)
            throw InputError("the random baseline needs an explicit --seed");

        if (sc_ingest->parsed()) {
            auto report = stages::run_ingest(cfg);
            std::cout << "ingest: ok (" << report.total() << " validation findings)\n";
        } else if (sc_curate->parsed()) {
            auto report = stages::run_curate(cfg);
            std::cout << "curate: " << report.triplets << " triplets from "
                      << report.papers << " papers\n";
        } else if (sc_build->parsed()) {
            stages::run_build(cfg);
            std::cout << "build: ok\n";
        } else if (sc_stats->parsed()) {
            auto stats = stages::run_stats(cfg);
            std::cout << "stats: " << stats.component_count
                      << " components, largest diameter " << stats.largest_cc_diameter << "\n";
        } else if (sc_qct->parsed()) {
            auto result = stages::run_query_concept_topic(cfg);
            std::cout << "query-concept-topic: " << result.papers.size() << " papers, "
                      << result.authors.size() << " authors, " << result.institutions.size()
                      << " institutions\n";
            for (const auto& name : result.unknown_concepts)
                std::cerr << "warning: unknown concept '" << name << "'\n";
            for (const auto& name : result.unknown_topics)
                std::cerr << "warning: unknown topic '" << name << "'\n";
        } else if (sc_qcr->parsed()) {
            auto result = stages::run_query_citation_rank(cfg);
            std::cout << "query-citation-rank: " << result.rows.size() << " papers\n";
            for (const auto& name : result.unknown_concepts)
                std::cerr << "warning: unknown concept '" << name << "'\n";
        } else if (sc_train->parsed()) {
            stages::run_train_kge(cfg);
            std::cout << "train-kge: ok\n";
        } else if (sc_validate->parsed()) {
            auto result = stages::run_validate_kge(cfg);
            std::cout << "validate-kge: " << result.scores.size() << " triplets scored\n";
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        } else if (sc_embed->parsed()) {
            auto report = stages::run_embed_semantic(cfg);
            std::cout << "embed-semantic: coverage " << report.combined.coverage << "\n";
        } else if (sc_combine->parsed()) {
            stages::run_combine(cfg);
            std::cout << "combine: ok\n";
        } else if (sc_recommend->parsed()) {
            stages::run_recommend(cfg, recommend_out);
            std::cout << "recommend: ok (" << cfg.method << ")\n";
        } else if (sc_evaluate->parsed()) {
            stages::run_evaluate(cfg, eval_methods);
            std::cout << "evaluate: ok\n";
        } else if (sc_svd->parsed()) {
            stages::run_svd(cfg);
            std::cout << "svd: ok\n";
        } else if (sc_pipeline->parsed()) {
            stages::run_pipeline(cfg);
            std::cout << "pipeline: ok\n";
        }
        return 0;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args));
}

} // namespace litkg::cli
