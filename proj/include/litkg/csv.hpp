#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "litkg/errors.hpp"

namespace litkg::csv {

/// Shortest round-trip decimal representation ("0.5", not "0.500000").
/// Canonical formatting is what makes re-serialization idempotent and
/// pipeline outputs byte-comparable.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

struct Row {
    std::vector<std::string> fields;
    long line = 0; // 1-based line where the row started, for error messages
};

/// RFC-4180 reader. Quoted fields may contain commas, doubled quotes and
/// newlines; a leading '#' outside of a record starts a comment line
/// (used by pipeline outputs for their config headers).
class Reader {
public:
    Reader(std::istream& in, std::string file_name)
        : in_(in), file_(std::move(file_name)) {}

    const std::string& file() const { return file_; }

    std::optional<Row> next() {
        skip_comments();
        if (!peek_ok()) return std::nullopt;
        Row row;
        row.line = line_;
        std::string field;
        bool in_quotes = false;
        while (true) {
            int ci = in_.get();
            if (ci == EOF) {
                if (in_quotes) fail(row.line, "unterminated quoted field");
                row.fields.push_back(std::move(field));
                return row;
            }
            char c = static_cast<char>(ci);
            if (in_quotes) {
                if (c == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n') ++line_;
                    field.push_back(c);
                }
                continue;
            }
            switch (c) {
                case '"':
                    if (!field.empty()) fail(row.line, "quote inside unquoted field");
                    in_quotes = true;
                    break;
                case ',':
                    row.fields.push_back(std::move(field));
                    field.clear();
                    break;
                case '\r':
                    if (in_.peek() == '\n') break; // swallowed with the \n
                    [[fallthrough]];
                case '\n':
                    ++line_;
                    row.fields.push_back(std::move(field));
                    return row;
                default:
                    field.push_back(c);
                    break;
            }
        }
    }

    [[noreturn]] void fail(long line, const std::string& what) const {
        throw InputError(file_ + ":" + std::to_string(line) + ": " + what);
    }

private:
    bool peek_ok() { return in_.peek() != EOF; }

    void skip_comments() {
        while (in_.peek() == '#') {
            std::string dummy;
            std::getline(in_, dummy);
            ++line_;
        }
    }

    std::istream& in_;
    std::string file_;
    long line_ = 1;
};

inline std::string escape_field(std::string_view f) {
    // a leading '#' is quoted so the field can never read back as a comment
    bool need_quotes = !f.empty() && f[0] == '#';
    for (char c : f) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            need_quotes = true;
            break;
        }
    }
    if (!need_quotes) return std::string(f);
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << escape_field(fields[i]);
    }
    out.put('\n');
}

/// Reads a whole CSV file: skips comment lines, checks the header row
/// matches `expected_header` exactly, returns the data rows.
inline std::vector<Row> read_file(const std::string& path,
                                  const std::vector<std::string>& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    Reader reader(in, path);
    auto header = reader.next();
    if (!header) throw InputError(path + ": empty file, expected header row");
    if (header->fields != expected_header) {
        std::ostringstream msg;
        msg << path << ":" << header->line << ": bad header; expected ";
        for (size_t i = 0; i < expected_header.size(); ++i)
            msg << (i ? "," : "") << expected_header[i];
        throw InputError(msg.str());
    }
    std::vector<Row> rows;
    while (auto row = reader.next()) {
        if (row->fields.size() == 1 && row->fields[0].empty()) continue; // blank line
        if (row->fields.size() != expected_header.size())
            reader.fail(row->line, "expected " + std::to_string(expected_header.size()) +
                                       " fields, got " + std::to_string(row->fields.size()));
        rows.push_back(std::move(*row));
    }
    return rows;
}

} // namespace litkg::csv
