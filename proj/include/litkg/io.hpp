#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "litkg/errors.hpp"
#include "litkg/version.hpp"

namespace litkg {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Comment preamble for CSV outputs: tool version, subcommand and the full
/// effective config. Re-running a stage with unchanged inputs reproduces
/// these bytes exactly (no timestamps).
inline std::string csv_header_comment(const std::string& subcommand, const ConfigEcho& config) {
    std::string out = std::string("# ") + kToolName + " " + kToolVersion + " " + subcommand + "\n";
    out += "# config:";
    for (const auto& [k, v] : config) out += " " + k + "=" + v;
    out += "\n";
    return out;
}

/// JSON outputs carry the same information as a leading "meta" object
/// (comments are not representable in JSON).
inline nlohmann::ordered_json json_meta(const std::string& subcommand,
                                        const ConfigEcho& config) {
    nlohmann::ordered_json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["subcommand"] = subcommand;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : config) cfg[k] = v;
    meta["config"] = cfg;
    return meta;
}

inline void write_json_file(const std::filesystem::path& path,
                            const nlohmann::ordered_json& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << body.dump(2) << '\n';
}

} // namespace litkg
