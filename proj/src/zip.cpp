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

#include "docpipe/zip.hpp"

#include <zlib.h>

#include <cstring>

namespace docpipe {
namespace {

uint16_t rd16(const unsigned char* p) { return p[0] | p[1] << 8; }
uint32_t rd32(const unsigned char* p) {
    return p[0] | p[1] << 8 | p[2] << 16 | uint32_t(p[3]) << 24;
}

void wr16(std::string& s, uint16_t v) {
    s.push_back(char(v & 0xFF));
    s.push_back(char(v >> 8));
}
void wr32(std::string& s, uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(char((v >> (8 * i)) & 0xFF));
}

constexpr uint32_t kLocalSig = 0x04034b50;
constexpr uint32_t kCentralSig = 0x02014b50;
constexpr uint32_t kEocdSig = 0x06054b50;

}  // namespace

std::string zlib_deflate_raw(std::string_view data) {
    z_stream zs{};
    // windowBits -15: raw deflate, as stored inside zip members
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -15, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK)
        return {};
    std::string out(deflateBound(&zs, data.size()), '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    return rc == Z_STREAM_END ? out : std::string{};
}

std::optional<std::string> zlib_inflate_raw(std::string_view data,
                                            uint64_t expected_size) {
    if (expected_size > (1ull << 31)) return std::nullopt;
    z_stream zs{};
    if (inflateInit2(&zs, -15) != Z_OK) return std::nullopt;
    std::string out(expected_size, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    bool ok = rc == Z_STREAM_END && zs.total_out == expected_size;
    inflateEnd(&zs);
    if (!ok) return std::nullopt;
    return out;
}

std::optional<ZipReader> ZipReader::open(std::string_view bytes) {
    if (bytes.size() < 22) return std::nullopt;
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    // EOCD: scan backwards over a possible trailing comment
    size_t eocd = std::string::npos;
    size_t lo = bytes.size() >= 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
    for (size_t i = bytes.size() - 22; ; --i) {
        if (rd32(p + i) == kEocdSig) {
            eocd = i;
            break;
        }
        if (i == lo) break;
    }
    if (eocd == std::string::npos) return std::nullopt;

    uint16_t count = rd16(p + eocd + 10);
    uint32_t cd_size = rd32(p + eocd + 12);
    uint32_t cd_off = rd32(p + eocd + 16);
    if (uint64_t(cd_off) + cd_size > eocd) return std::nullopt;

    ZipReader zr;
    zr.bytes_.assign(bytes);
    size_t pos = cd_off;
    for (uint16_t i = 0; i < count; ++i) {
        if (pos + 46 > bytes.size() || rd32(p + pos) != kCentralSig)
            return std::nullopt;
        ZipEntry e;
        e.flags = rd16(p + pos + 8);
        e.method = rd16(p + pos + 10);
        e.compressed_size = rd32(p + pos + 20);
        e.uncompressed_size = rd32(p + pos + 24);
        uint16_t nlen = rd16(p + pos + 28);
        uint16_t xlen = rd16(p + pos + 30);
        uint16_t clen = rd16(p + pos + 32);
        e.local_header_offset = rd32(p + pos + 42);
        if (pos + 46 + nlen > bytes.size()) return std::nullopt;
        e.name.assign(bytes.substr(pos + 46, nlen));
        pos += 46 + nlen + xlen + clen;
        zr.entries_.push_back(std::move(e));
    }
    return zr;
}

bool ZipReader::has(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return true;
    return false;
}

std::optional<std::string> ZipReader::extract(std::string_view name) const {
    const ZipEntry* entry = nullptr;
    for (const auto& e : entries_)
        if (e.name == name) entry = &e;
    if (!entry) return std::nullopt;

    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data());
    size_t off = entry->local_header_offset;
    if (off + 30 > bytes_.size() || rd32(p + off) != kLocalSig)
        return std::nullopt;
    uint16_t nlen = rd16(p + off + 26);
    uint16_t xlen = rd16(p + off + 28);
    size_t data_off = off + 30 + nlen + xlen;
    if (data_off + entry->compressed_size > bytes_.size()) return std::nullopt;
    std::string_view raw(bytes_.data() + data_off, entry->compressed_size);

    if (entry->method == 0) {
        if (entry->compressed_size != entry->uncompressed_size)
            return std::nullopt;
        return std::string(raw);
    }
    if (entry->method == 8)
        return zlib_inflate_raw(raw, entry->uncompressed_size);
    return std::nullopt;
}

void ZipWriter::add(std::string_view name, std::string_view data,
                    bool deflate) {
    Member m;
    m.name.assign(name);
    m.uncompressed_size = data.size();
    m.crc = crc32(0, reinterpret_cast<const Bytef*>(data.data()), data.size());
    if (deflate) {
        m.payload = zlib_deflate_raw(data);
        m.method = 8;
    } else {
        m.payload.assign(data);
        m.method = 0;
    }
    members_.push_back(std::move(m));
}

void ZipWriter::add_forged(std::string_view name, std::string_view stored_data,
                           uint64_t claimed_uncompressed) {
    Member m;
    m.name.assign(name);
    m.payload.assign(stored_data);
    m.method = 8;
    m.uncompressed_size = claimed_uncompressed;
    m.crc = 0;
    members_.push_back(std::move(m));
}

std::string ZipWriter::finish() const {
    std::string out;
    std::vector<uint32_t> offsets;
    for (const auto& m : members_) {
        offsets.push_back(static_cast<uint32_t>(out.size()));
        wr32(out, kLocalSig);
        wr16(out, 20);  // version needed
        wr16(out, 0);   // flags
        wr16(out, m.method);
        wr16(out, 0);  // mod time
        wr16(out, 0);  // mod date
        wr32(out, m.crc);
        wr32(out, static_cast<uint32_t>(m.payload.size()));
        wr32(out, static_cast<uint32_t>(m.uncompressed_size));
        wr16(out, static_cast<uint16_t>(m.name.size()));
        wr16(out, 0);  // extra len
        out += m.name;
        out += m.payload;
    }
    size_t cd_off = out.size();
    for (size_t i = 0; i < members_.size(); ++i) {
        const auto& m = members_[i];
        wr32(out, kCentralSig);
        wr16(out, 20);
        wr16(out, 20);
        wr16(out, 0);
        wr16(out, m.method);
        wr16(out, 0);
        wr16(out, 0);
        wr32(out, m.crc);
        wr32(out, static_cast<uint32_t>(m.payload.size()));
        wr32(out, static_cast<uint32_t>(m.uncompressed_size));
        wr16(out, static_cast<uint16_t>(m.name.size()));
        wr16(out, 0);
        wr16(out, 0);
        wr16(out, 0);
        wr16(out, 0);
        wr32(out, 0);
        wr32(out, offsets[i]);
        out += m.name;
    }
    size_t cd_size = out.size() - cd_off;
    wr32(out, kEocdSig);
    wr16(out, 0);
    wr16(out, 0);
    wr16(out, static_cast<uint16_t>(members_.size()));
    wr16(out, static_cast<uint16_t>(members_.size()));
    wr32(out, static_cast<uint32_t>(cd_size));
    wr32(out, static_cast<uint32_t>(cd_off));
    wr16(out, 0);
    return out;
}

}  // namespace docpipe
