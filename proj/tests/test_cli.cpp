#include "doctest.h"

#include "json.hpp"

#include "litkg/cli.hpp"
#include "support/test_util.hpp"

using namespace litkg;
using litkg::test::TempDir;

namespace {

int run_cli(std::vector<std::string> args) { return cli::run(std::move(args)); }

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

std::string corpus_arg() { return litkg::test::fixture_corpus_dir().string(); }

} // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli({"no-such-subcommand"}) == 1);
    CHECK(run_cli({}) == 1);
    CHECK(run_cli({"ingest", "--bogus-flag"}) == 1);
    CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("input validation failures exit 2") {
    TempDir work("cli_exit2");
    CHECK(run_cli({"ingest", "--corpus-dir", "/nonexistent/dir", "--work-dir",
                   (work / "w").string()}) == 2);
    // random baseline without an explicit seed is refused
    CHECK(run_cli({"recommend", "--method", "random", "--corpus-dir", corpus_arg(),
                   "--work-dir", (work / "w2").string()}) == 2);
}

TEST_CASE("ingest writes a normalized corpus and a validation report") {
    TempDir work("cli_ingest");
    REQUIRE(run_cli({"ingest", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string()}) == 0);
    CHECK(std::filesystem::exists(work / "corpus_normalized/papers.csv"));
    auto report = load_json(work / "validation_report.json");
    CHECK(report["counts"]["papers"] == 12);
    CHECK(report["meta"]["subcommand"] == "ingest");
    CHECK(report["dangling_references"].empty());
}

TEST_CASE("curate on the fixture reports the planted dropped mention") {
    TempDir work("cli_curate");
    REQUIRE(run_cli({"curate", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string()}) == 0);
    auto report = load_json(work / "curation_report.json");
    CHECK(report["dropped_low_confidence"] == 1);
    CHECK(report["flagged_frequent"] == 1);
    CHECK(report["citations_linked"] == 4);
    // curated CSVs carry the comment header
    auto head = litkg::test::read_file(work / "curated/triplets.csv").substr(0, 1);
    CHECK(head == "#");
}

TEST_CASE("stage outputs start with the tool/config comment header") {
    TempDir work("cli_headers");
    REQUIRE(run_cli({"curate", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string()}) == 0);
    REQUIRE(run_cli({"stats", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string()}) == 0);
    auto content = litkg::test::read_file(work / "degree_hist_all.csv");
    CHECK(content.rfind("# litkg ", 0) == 0);
    CHECK(content.find("# config:") != std::string::npos);
    CHECK(content.find("subcommand") == std::string::npos); // csv header is compact
    auto stats = load_json(work / "stats.json");
    CHECK(stats["meta"]["tool"] == "litkg");
    CHECK(stats["relations"]["cites"] == 4);
    CHECK(stats["mean_out_degree"]["cites"] == doctest::Approx(4.0 / 12.0));
}

TEST_CASE("re-running a stage with unchanged inputs is byte-identical") {
    TempDir work("cli_rerun");
    const char* files[] = {"curated/triplets.csv", "curation_report.json", "stats.json",
                           "degree_hist_all.csv", "degree_hist_no_cites.csv"};
    auto run_both = [&] {
        REQUIRE(run_cli({"curate", "--corpus-dir", corpus_arg(), "--work-dir",
                         work.path().string()}) == 0);
        REQUIRE(run_cli({"stats", "--corpus-dir", corpus_arg(), "--work-dir",
                         work.path().string()}) == 0);
    };
    run_both();
    std::map<std::string, std::string> first;
    for (const char* name : files) first[name] = litkg::test::read_file(work / name);
    run_both();
    for (const char* name : files) {
        INFO(name);
        CHECK(litkg::test::read_file(work / name) == first[name]);
    }
}

TEST_CASE("query subcommands write the expected CSV shapes") {
    TempDir work("cli_query");
    REQUIRE(run_cli({"curate", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string()}) == 0);
    REQUIRE(run_cli({"query-citation-rank", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string(), "--concepts", "coronavirus", "--limit", "3"}) == 0);
    auto content = litkg::test::read_file(work / "citation_rank.csv");
    CHECK(content.find("paper_id,title,cited_by") != std::string::npos);
    CHECK(content.find("p001,Remdesivir Efficacy in Severe Coronavirus Cases,3") !=
          std::string::npos);

    REQUIRE(run_cli({"query-concept-topic", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string(), "--concepts", "remdesivir", "--topics",
                     "Lab Trials (human)"}) == 0);
    auto authors = litkg::test::read_file(work / "qct_authors.csv");
    CHECK(authors.find("john q smith") != std::string::npos);
    CHECK(std::filesystem::exists(work / "qct_papers.csv"));
    CHECK(std::filesystem::exists(work / "qct_institutions.csv"));
}

TEST_CASE("full pipeline on the fixture produces every stage artifact") {
    TempDir work("cli_pipeline");
    REQUIRE(run_cli({"pipeline", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string(), "--seed", "7", "--workers", "1", "--dim", "8",
                     "--epochs", "5", "--batch-size", "8", "--negatives", "2", "--lr", "0.5",
                     "--sem-dim", "64", "--folds", "3", "--k", "3"}) == 0);
    for (const char* name :
         {"validation_report.json", "curation_report.json", "graph_summary.json", "stats.json",
          "degree_hist_all.csv", "degree_hist_no_associated_concept.csv",
          "degree_hist_no_cites.csv", "degree_hist_no_associated_topic.csv",
          "kge_model/header.json", "kge_model/entity_embeddings.csv",
          "kge_model/relation_embeddings.csv", "kge_model/loss_trace.csv", "scores.csv",
          "kge_validation.json", "document_embeddings.csv", "semantics_report.json",
          "combined_embeddings.csv", "recommendations_semantic.csv",
          "recommendations_kge.csv", "recommendations_combined.csv",
          "recommendations_random.csv", "evaluation_report.json", "iou_matrix.csv",
          "popularity.csv", "topic_by_journal.csv", "svd_projection.csv"}) {
        INFO(name);
        CHECK(std::filesystem::exists(work / name));
    }
    auto eval = load_json(work / "evaluation_report.json");
    CHECK(eval["reports"].is_array());
    CHECK(!eval["reports"].empty());
    // iou matrix diagonal is exactly 1
    auto iou = litkg::test::read_file(work / "iou_matrix.csv");
    CHECK(iou.find("semantic,1,") != std::string::npos);
}

TEST_CASE("recommend default output name and --out override") {
    TempDir work("cli_recommend");
    REQUIRE(run_cli({"curate", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string()}) == 0);
    REQUIRE(run_cli({"train-kge", "--corpus-dir", corpus_arg(), "--work-dir",
                     work.path().string(), "--dim", "8", "--epochs", "3", "--batch-size", "8",
                     "--negatives", "2"}) == 0);
    REQUIRE(run_cli({"recommend", "--method", "kge", "--corpus-dir", corpus_arg(),
                     "--work-dir", work.path().string(), "--k", "3"}) == 0);
    CHECK(std::filesystem::exists(work / "recommendations.csv"));
    REQUIRE(run_cli({"recommend", "--method", "kge", "--corpus-dir", corpus_arg(),
                     "--work-dir", work.path().string(), "--k", "3", "--out",
                     "recommendations_kge.csv"}) == 0);
    CHECK(std::filesystem::exists(work / "recommendations_kge.csv"));
    auto lists = read_recommendations(work / "recommendations.csv");
    CHECK(lists.size() == 12);
    for (const auto& l : lists) CHECK(l.entries.size() == 3);
}

TEST_CASE("config file values are overridden by command-line flags") {
    TempDir work("cli_config");
    litkg::test::write_file(work / "litkg.conf",
                            "threshold=0.9\n"
                            "work-dir=" + (work / "from_file").string() + "\n");
    // --threshold on the command line wins over the file
    REQUIRE(run_cli({"curate", "--corpus-dir", corpus_arg(), "--config",
                     (work / "litkg.conf").string(), "--threshold", "0.5"}) == 0);
    auto report = load_json(work / "from_file/curation_report.json");
    CHECK(report["meta"]["config"]["threshold"] == "0.5");
    CHECK(report["dropped_low_confidence"] == 1);
}
