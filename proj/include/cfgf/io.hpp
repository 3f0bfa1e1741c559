#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cfgf/errors.hpp"

// Reproducibility plumbing: run manifests with a configuration digest, and
// CSV/JSON table rendering.  The digest covers everything that determines the
// output bytes (subcommand, parameters, master seed, version tag) and nothing
// that does not (wall time, output location, serialization format), so a
// replayed run reproduces its artifacts byte-identically wherever it writes.

namespace cfgf {

inline constexpr const char* kVersionTag = "cfgf-1.0.0";

inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Shortest-exact is not needed; %.17g round-trips every double.
inline std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunManifest {
    std::string subcommand;
    std::vector<std::string> argv;  // full invocation, for replay
    std::uint64_t master_seed = 0;
    std::map<std::string, std::string> parameters;  // canonical configuration
    std::string version_tag = kVersionTag;
    double wall_time_seconds = 0.0;                  // excluded from the digest
    std::map<std::string, std::string> output_digests;  // path -> hex64 of bytes

    // Configuration digest: stable across reruns of the same configuration.
    std::uint64_t digest() const {
        std::string canon = version_tag;
        canon += '\n';
        canon += subcommand;
        canon += '\n';
        canon += std::to_string(master_seed);
        canon += '\n';
        for (const auto& [k, v] : parameters) {
            canon += k;
            canon += '=';
            canon += v;
            canon += '\x1f';
        }
        return fnv1a64(canon);
    }

    std::string to_json() const {
        nlohmann::json j;
        j["subcommand"] = subcommand;
        j["argv"] = argv;
        j["master_seed"] = master_seed;
        j["parameters"] = parameters;
        j["version_tag"] = version_tag;
        j["digest"] = hex64(digest());
        j["wall_time_seconds"] = wall_time_seconds;
        j["output_digests"] = output_digests;
        return j.dump(2) + "\n";
    }

    static RunManifest from_json_text(const std::string& text) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ParamError(std::string("manifest: invalid JSON: ") + e.what());
        }
        RunManifest m;
        try {
            m.subcommand = j.at("subcommand").get<std::string>();
            m.argv = j.at("argv").get<std::vector<std::string>>();
            m.master_seed = j.at("master_seed").get<std::uint64_t>();
            m.parameters =
                j.at("parameters").get<std::map<std::string, std::string>>();
            m.version_tag = j.at("version_tag").get<std::string>();
            m.wall_time_seconds = j.value("wall_time_seconds", 0.0);
            if (j.contains("output_digests"))
                m.output_digests =
                    j["output_digests"].get<std::map<std::string, std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParamError(std::string("manifest: missing field: ") + e.what());
        }
        return m;
    }
};

// Numeric result table; every CLI artifact reduces to one.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> vals) {
        rows.emplace_back(vals);
        if (rows.back().size() != columns.size())
            throw ParamError("Table: row width != column count");
    }
};

inline std::string render_csv(const Table& t, std::uint64_t manifest_digest) {
    std::string out = "# manifest " + hex64(manifest_digest) + "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw ParamError("render_csv: ragged row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_g17(row[c]);
        }
        out += '\n';
    }
    return out;
}

// Same content as the CSV, one-to-one: digest, column names, rows.
inline std::string render_json(const Table& t, std::uint64_t manifest_digest) {
    nlohmann::json j;
    j["manifest_digest"] = hex64(manifest_digest);
    j["columns"] = t.columns;
    auto rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size())
            throw ParamError("render_json: ragged row");
        rows.push_back(row);
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("write_text_file: cannot open " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw Error("write_text_file: write failed for " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("read_text_file: cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace cfgf
