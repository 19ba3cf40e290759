#include "doctest.h"

#include <sstream>

#include "litkg/csv.hpp"
#include "litkg/strings.hpp"

using namespace litkg;

TEST_CASE("csv reader handles quoting, escapes and embedded newlines") {
    std::istringstream in("a,b,c\n\"x,y\",\"he said \"\"hi\"\"\",\"line1\nline2\"\nplain,,end\n");
    csv::Reader reader(in, "test.csv");
    auto header = reader.next();
    REQUIRE(header);
    CHECK(header->fields == std::vector<std::string>{"a", "b", "c"});
    auto row1 = reader.next();
    REQUIRE(row1);
    CHECK(row1->fields[0] == "x,y");
    CHECK(row1->fields[1] == "he said \"hi\"");
    CHECK(row1->fields[2] == "line1\nline2");
    auto row2 = reader.next();
    REQUIRE(row2);
    CHECK(row2->fields == std::vector<std::string>{"plain", "", "end"});
    CHECK(!reader.next());
}

TEST_CASE("csv reader skips comment lines and tracks line numbers") {
    std::istringstream in("# tool header\n# config: a=1\nh1,h2\nv1,v2\n");
    csv::Reader reader(in, "test.csv");
    auto header = reader.next();
    REQUIRE(header);
    CHECK(header->fields == std::vector<std::string>{"h1", "h2"});
    CHECK(header->line == 3);
    auto row = reader.next();
    REQUIRE(row);
    CHECK(row->line == 4);
}

TEST_CASE("csv reader accepts CRLF line endings") {
    std::istringstream in("a,b\r\n1,2\r\n");
    csv::Reader reader(in, "test.csv");
    auto header = reader.next();
    REQUIRE(header);
    CHECK(header->fields.size() == 2);
    auto row = reader.next();
    REQUIRE(row);
    CHECK(row->fields == std::vector<std::string>{"1", "2"});
}

TEST_CASE("csv write/read round-trip preserves fields") {
    std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "multi\nline",
                                       ""};
    std::ostringstream out;
    csv::write_row(out, fields);
    std::istringstream in(out.str());
    csv::Reader reader(in, "roundtrip.csv");
    auto row = reader.next();
    REQUIRE(row);
    CHECK(row->fields == fields);
}

TEST_CASE("fields starting with '#' survive the round-trip") {
    std::vector<std::string> fields = {"#not-a-comment", "x"};
    std::ostringstream out;
    csv::write_row(out, fields);
    std::istringstream in(out.str());
    csv::Reader reader(in, "hash.csv");
    auto row = reader.next();
    REQUIRE(row);
    CHECK(row->fields == fields);
}

TEST_CASE("format_double emits shortest round-trip representation") {
    CHECK(csv::format_double(0.5) == "0.5");
    CHECK(csv::format_double(1.0) == "1");
    CHECK(csv::format_double(0.1) == "0.1");
    CHECK(csv::format_double(-2.25) == "-2.25");
    // parse(format(x)) == x for awkward values
    for (double x : {1.0 / 3.0, 1e-9, 123456.789, 0.1 + 0.2}) {
        auto parsed = csv::parse_double(csv::format_double(x));
        REQUIRE(parsed);
        CHECK(*parsed == x);
    }
}

TEST_CASE("parse_double rejects trailing garbage") {
    CHECK(!csv::parse_double("1.2x"));
    CHECK(!csv::parse_double(""));
    CHECK(csv::parse_double("1.2"));
}

TEST_CASE("string normalization collapses punctuation and case") {
    CHECK(str::normalize_text("  Acute  Appendicitis ") == "acute appendicitis");
    CHECK(str::normalize_text("X-Ray!") == "x ray");
    CHECK(str::normalize_text("...") == "");
    CHECK(str::lower("AbC") == "abc");
    CHECK(str::trim("  a b  ") == "a b");
}

TEST_CASE("suffix lemmatizer covers the rule table") {
    CHECK(str::lemmatize_token("antibodies") == "antibody");
    CHECK(str::lemmatize_token("viruses") == "virus");
    CHECK(str::lemmatize_token("boxes") == "box");
    CHECK(str::lemmatize_token("procedures") == "procedure");
    CHECK(str::lemmatize_token("virus") == "virus");       // -us guarded
    CHECK(str::lemmatize_token("appendicitis") == "appendicitis"); // -is guarded
    CHECK(str::lemmatize_token("glass") == "glass");       // -ss guarded
    CHECK(str::lemmatize_token("as") == "as");             // too short
    // idempotent on a word list
    for (const char* w : {"antibodies", "viruses", "patients", "series", "lungs", "doses"}) {
        std::string once = str::lemmatize_token(w);
        CHECK(str::lemmatize_token(once) == once);
    }
}
