#include "doctest.h"

#include "litkg/ingest.hpp"
#include "support/test_util.hpp"

using namespace litkg;
using litkg::test::TempDir;
using litkg::test::write_file;
using litkg::test::write_minimal_corpus;

TEST_CASE("load_corpus counts fixture records") {
    TempDir dir("ingest_counts");
    write_minimal_corpus(dir.path());
    auto loaded = load_corpus(dir.path());
    auto n = counts(loaded.corpus);
    CHECK(n.papers == 3);
    CHECK(n.author_mentions == 4);
    CHECK(n.concept_mentions == 3);
    CHECK(n.topic_assignments == 3);
    CHECK(loaded.warnings.empty());
}

TEST_CASE("confidence outside [0,1] is a malformed row naming file and line") {
    TempDir dir("ingest_badconf");
    write_minimal_corpus(dir.path());
    write_file(dir / "concept_mentions.csv",
               "paper_id,surface_text,category,confidence\n"
               "a01,fever,Medical Condition,1.2\n");
    try {
        load_corpus(dir.path());
        FAIL("expected InputError");
    } catch (const InputError& e) {
        std::string msg = e.what();
        CHECK(msg.find("concept_mentions.csv") != std::string::npos);
        CHECK(msg.find(":2:") != std::string::npos);
        CHECK(msg.find("1.2") != std::string::npos);
    }
}

TEST_CASE("missing mandatory file is fatal") {
    TempDir dir("ingest_missing");
    write_minimal_corpus(dir.path());
    std::filesystem::remove(dir / "bibliography.csv");
    CHECK_THROWS_AS(load_corpus(dir.path()), InputError);
}

TEST_CASE("duplicate paper_id is fatal") {
    TempDir dir("ingest_dup");
    write_minimal_corpus(dir.path());
    write_file(dir / "papers.csv",
               "paper_id,title,pub_date,journal,doi\n"
               "a01,First,,,\n"
               "a01,Again,,,\n");
    CHECK_THROWS_AS(load_corpus(dir.path()), InputError);
}

TEST_CASE("duplicate (paper_id, section) is fatal rather than last-wins") {
    TempDir dir("ingest_dupsec");
    write_minimal_corpus(dir.path());
    write_file(dir / "sections.jsonl",
               R"({"paper_id":"a01","section":"abstract","text":"one"})"
               "\n"
               R"({"paper_id":"a01","section":"abstract","text":"two"})"
               "\n");
    CHECK_THROWS_AS(load_corpus(dir.path()), InputError);
}

TEST_CASE("empty optional fields map to absent, never empty text") {
    TempDir dir("ingest_absent");
    write_minimal_corpus(dir.path());
    auto loaded = load_corpus(dir.path());
    const auto& p3 = loaded.corpus.papers[2];
    CHECK(p3.paper_id == "a03");
    CHECK(!p3.pub_date.has_value());
    CHECK(!p3.journal.has_value());
    const auto& p1 = loaded.corpus.papers[0];
    REQUIRE(p1.journal.has_value());
    CHECK(*p1.journal == "Journal A");
}

TEST_CASE("malformed pub_date is rejected") {
    TempDir dir("ingest_date");
    write_minimal_corpus(dir.path());
    write_file(dir / "papers.csv",
               "paper_id,title,pub_date,journal,doi\n"
               "a01,First,03/15/2020,,\n");
    CHECK_THROWS_AS(load_corpus(dir.path()), InputError);
}

TEST_CASE("load_corpus is deterministic and order-normalized") {
    TempDir dir_a("ingest_det_a");
    TempDir dir_b("ingest_det_b");
    write_minimal_corpus(dir_a.path());
    write_minimal_corpus(dir_b.path());
    // same rows, different order
    write_file(dir_b / "papers.csv",
               "paper_id,title,pub_date,journal,doi\n"
               "a03,Third Paper,,,\n"
               "a01,First Paper,2020-01-01,Journal A,\n"
               "a02,Second Paper,2020-02-01,Journal A,\n");
    auto a = load_corpus(dir_a.path());
    auto b = load_corpus(dir_b.path());
    TempDir out_a("ingest_det_oa");
    TempDir out_b("ingest_det_ob");
    serialize_corpus(a.corpus, out_a.path());
    serialize_corpus(b.corpus, out_b.path());
    CHECK(test::read_file(out_a / "papers.csv") == test::read_file(out_b / "papers.csv"));
}

TEST_CASE("serialize(load(.)) is idempotent byte for byte") {
    auto loaded = load_corpus(test::fixture_corpus_dir());
    TempDir once("roundtrip_once");
    serialize_corpus(loaded.corpus, once.path());
    auto reloaded = load_corpus(once.path());
    TempDir twice("roundtrip_twice");
    serialize_corpus(reloaded.corpus, twice.path());
    for (const char* name : {"papers.csv", "author_mentions.csv", "concept_mentions.csv",
                             "topic_assignments.csv", "bibliography.csv", "sections.jsonl"}) {
        INFO(name);
        CHECK(test::read_file(once / name) == test::read_file(twice / name));
    }
}

TEST_CASE("validate_corpus reports dangling references") {
    TempDir dir("validate_dangling");
    write_minimal_corpus(dir.path());
    write_file(dir / "concept_mentions.csv",
               "paper_id,surface_text,category,confidence\n"
               "ghost,fever,Medical Condition,0.9\n");
    auto loaded = load_corpus(dir.path());
    CHECK(loaded.warnings.size() == 1);
    auto report = validate_corpus(loaded.corpus);
    CHECK(report.dangling_references.size() == 1);
    CHECK(report.dangling_references[0].find("ghost") != std::string::npos);
}

TEST_CASE("validate_corpus reports out-of-vocabulary topic labels") {
    TempDir dir("validate_oov");
    write_minimal_corpus(dir.path());
    write_file(dir / "topic_assignments.csv",
               "paper_id,topic_label,score\n"
               "a01,Astrology,0.9\n");
    auto loaded = load_corpus(dir.path());
    auto report = validate_corpus(loaded.corpus);
    REQUIRE(report.out_of_vocabulary_topics.size() == 1);
    CHECK(report.out_of_vocabulary_topics[0].find("Astrology") != std::string::npos);
}

TEST_CASE("validate_corpus on a clean fixture is empty") {
    TempDir dir("validate_clean");
    write_minimal_corpus(dir.path());
    auto loaded = load_corpus(dir.path());
    CHECK(validate_corpus(loaded.corpus).clean());
}

TEST_CASE("validate_corpus reports empty section text") {
    TempDir dir("validate_empty_section");
    write_minimal_corpus(dir.path());
    write_file(dir / "sections.jsonl",
               R"({"paper_id":"a01","section":"abstract","text":"  "})"
               "\n");
    auto loaded = load_corpus(dir.path());
    auto report = validate_corpus(loaded.corpus);
    CHECK(report.empty_sections.size() == 1);
}

TEST_CASE("external document vectors load with dimension checks") {
    TempDir dir("ingest_vectors");
    write_minimal_corpus(dir.path());
    write_file(dir / "semantic_vectors.csv",
               "paper_id,v0,v1,v2\n"
               "a01,0.1,0.2,0.3\n"
               "a02,1,0,0\n");
    auto loaded = load_corpus(dir.path());
    REQUIRE(loaded.corpus.external_doc_vectors.size() == 2);
    CHECK(loaded.corpus.external_doc_vectors[0].values ==
          std::vector<double>{0.1, 0.2, 0.3});

    write_file(dir / "semantic_vectors.csv",
               "paper_id,v0,vbad\n"
               "a01,0.1,0.2\n");
    CHECK_THROWS_AS(load_corpus(dir.path()), InputError);
}
