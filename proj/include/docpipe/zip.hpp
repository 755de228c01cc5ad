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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace docpipe {

// Minimal ZIP container support: central-directory listing plus stored and
// deflate member extraction. Enough for OpenXML-style packages; no zip64.
struct ZipEntry {
    std::string name;
    uint16_t method = 0;      // 0 = stored, 8 = deflate
    uint16_t flags = 0;
    uint64_t compressed_size = 0;
    uint64_t uncompressed_size = 0;
    uint32_t local_header_offset = 0;
};

class ZipReader {
public:
    // Returns nullopt if the end-of-central-directory record or the central
    // directory itself cannot be read.
    static std::optional<ZipReader> open(std::string_view bytes);

    const std::vector<ZipEntry>& entries() const { return entries_; }
    bool has(std::string_view name) const;
    // Inflates one member; nullopt on missing member, unsupported method,
    // or corrupt stream.
    std::optional<std::string> extract(std::string_view name) const;

private:
    std::string bytes_;
    std::vector<ZipEntry> entries_;
};

class ZipWriter {
public:
    void add(std::string_view name, std::string_view data, bool deflate = false);
    // Appends a member whose central-directory record lies about its sizes.
    // Test fixture hook for bomb/corruption scenarios.
    void add_forged(std::string_view name, std::string_view stored_data,
                    uint64_t claimed_uncompressed);
    std::string finish() const;

private:
    struct Member {
        std::string name;
        std::string payload;           // bytes as written to the local stream
        uint16_t method = 0;
        uint64_t uncompressed_size = 0;
        uint32_t crc = 0;
    };
    std::vector<Member> members_;
};

std::string zlib_deflate_raw(std::string_view data);
std::optional<std::string> zlib_inflate_raw(std::string_view data,
                                            uint64_t expected_size);

}  // namespace docpipe
