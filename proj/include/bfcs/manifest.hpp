#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfcs/errors.hpp"
#include "bfcs/version.hpp"

namespace bfcs {

// FNV-1a over the file bytes; records input identity in manifests (not a
// cryptographic digest).
inline std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for digest: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

inline std::string fnv_hex(std::uint64_t hash) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

// Everything needed to reproduce a run: the subcommand, the effective
// option values, the seed, and digests of the inputs. Written alongside
// every output the CLI produces.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> options;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    void set(const std::string& key, const std::string& value) { options[key] = value; }
    void set(const std::string& key, long long value) {
        options[key] = std::to_string(value);
    }
    void set_seed(std::uint64_t s) {
        has_seed = true;
        seed = s;
    }
};

inline void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j;
    j["tool"] = "bfcs";
    j["version"] = kVersion;
    j["subcommand"] = m.subcommand;
    j["options"] = m.options;
    if (m.has_seed) j["seed"] = m.seed;
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& path_in : m.inputs) {
        inputs.push_back({{"path", path_in}, {"fnv1a64", fnv_hex(fnv1a64_file(path_in))}});
    }
    j["inputs"] = inputs;
    j["outputs"] = m.outputs;

    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace bfcs
