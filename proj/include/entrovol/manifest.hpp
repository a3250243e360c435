#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace entrovol {

inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility sidecar written next to every command output: the
// fully resolved configuration plus input digests.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;  // flag -> resolved value
    std::map<std::string, std::string> input_digests;  // path -> fnv1a-64 hex
    std::string version = kToolVersion;
    std::string timestamp;  // UTC, ISO-8601
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string file_digest_hex(const std::string& path);

// JSON emission and sidecar writing (<output>.manifest.json).
std::string manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& output_path);

std::string utc_timestamp_now();

}  // namespace entrovol
