#include "entrovol/manifest.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "entrovol/errors.hpp"
#include "json.hpp"

namespace entrovol {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(ss.str())));
    return buf;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["version"] = manifest.version;
    j["timestamp"] = manifest.timestamp;
    j["config"] = manifest.config;
    j["inputs"] = manifest.input_digests;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& output_path) {
    std::ofstream out(output_path + ".manifest.json", std::ios::binary);
    if (!out) throw DataError("cannot write manifest for '" + output_path + "'");
    out << manifest_json(manifest);
}

}  // namespace entrovol
