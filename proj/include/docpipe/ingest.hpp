// Copyright 2026 The docpipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "docpipe/hash.hpp"

namespace docpipe {

struct CandidateUrl {
    std::string raw;            // absolute http(s) URL
    std::string snapshot_id;
    std::string source_record;  // "<file>:<line>"
};

class UrlError : public std::runtime_error {
public:
    explicit UrlError(const std::string& input)
        : std::runtime_error("malformed URL: " + input), input_(input) {}
    const std::string& input() const { return input_; }

private:
    std::string input_;
};

// Lowercases scheme and host, sorts query parameters by (key, value),
// strips the trailing slash and the fragment. Idempotent.
std::string canonicalize_url(const std::string& raw);

// Persistent set of 32-byte hashes, keyed by canonical URL or content
// digest, remembering the snapshot of first sighting. Append-only file
// backing; the full set is held in memory.
class DedupStore {
public:
    explicit DedupStore(const std::filesystem::path& backing_path);

    // True if newly inserted; false (store untouched) when the canonical
    // URL was already seen, from any snapshot.
    bool insert_url(const std::string& canonical_url,
                    const std::string& snapshot_id);
    bool insert_hash(const Sha256Digest& digest, const std::string& snapshot_id);
    bool contains_url(const std::string& canonical_url) const;
    size_t size() const { return entries_.size(); }

private:
    bool insert(const std::string& key, const std::string& snapshot_id);

    std::filesystem::path path_;
    std::unordered_map<std::string, std::string> entries_;  // key -> snapshot
    mutable std::mutex mu_;
};

enum class SafetyReason {
    macro_part,
    embedded_object,
    encrypted,
    zip_bomb,
    oversize,
    content_type_mismatch,
    corrupt_archive,
};

const char* to_string(SafetyReason r);

struct SafetyVerdict {
    bool passed = true;
    std::vector<SafetyReason> reasons;
};

// Structural safety screening of a downloaded archive. Never throws; every
// failure mode is a verdict reason. declared_type is the expected container
// family, e.g. "docx" or "doc".
SafetyVerdict safety_check(std::string_view archive_bytes,
                           std::string_view declared_type);

Sha256Digest content_hash(std::string_view file_bytes);

// Scans local crawl-metadata text for candidate .doc/.docx URLs, one
// candidate per matching line.
std::vector<CandidateUrl> parse_wat(std::string_view text,
                                    const std::string& snapshot_id,
                                    const std::string& source_name);

}  // namespace docpipe
