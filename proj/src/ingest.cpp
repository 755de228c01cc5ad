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

#include "docpipe/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "docpipe/zip.hpp"

namespace docpipe {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool contains_ci(std::string_view hay, std::string_view needle) {
    return lower(hay).find(lower(needle)) != std::string::npos;
}

}  // namespace

std::string canonicalize_url(const std::string& raw) {
    size_t scheme_end = raw.find("://");
    if (scheme_end == std::string::npos) throw UrlError(raw);
    std::string scheme = lower(raw.substr(0, scheme_end));
    if (scheme != "http" && scheme != "https") throw UrlError(raw);

    size_t rest = scheme_end + 3;
    size_t frag = raw.find('#', rest);
    std::string no_frag = raw.substr(rest, frag == std::string::npos
                                               ? std::string::npos
                                               : frag - rest);
    size_t qpos = no_frag.find('?');
    std::string authority_path =
        qpos == std::string::npos ? no_frag : no_frag.substr(0, qpos);
    std::string query =
        qpos == std::string::npos ? "" : no_frag.substr(qpos + 1);

    size_t path_pos = authority_path.find('/');
    std::string host = path_pos == std::string::npos
                           ? authority_path
                           : authority_path.substr(0, path_pos);
    std::string path = path_pos == std::string::npos
                           ? ""
                           : authority_path.substr(path_pos);
    if (host.empty()) throw UrlError(raw);
    host = lower(host);

    // Trailing slash removal; the root path "/" becomes the empty path.
    while (!path.empty() && path.back() == '/') path.pop_back();

    std::string result = scheme + "://" + host + path;
    if (!query.empty()) {
        std::vector<std::pair<std::string, std::string>> params;
        std::stringstream ss(query);
        std::string item;
        while (std::getline(ss, item, '&')) {
            if (item.empty()) continue;
            size_t eq = item.find('=');
            if (eq == std::string::npos)
                params.emplace_back(item, "");
            else
                params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        }
        std::sort(params.begin(), params.end());
        if (!params.empty()) {
            result += '?';
            for (size_t i = 0; i < params.size(); ++i) {
                if (i) result += '&';
                result += params[i].first;
                if (!params[i].second.empty() ||
                    query.find(params[i].first + "=") != std::string::npos)
                    result += "=" + params[i].second;
            }
        }
    }
    return result;
}

DedupStore::DedupStore(const std::filesystem::path& backing_path)
    : path_(backing_path) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    while (true) {
        char key[32];
        if (!in.read(key, 32)) break;
        uint16_t slen = 0;
        if (!in.read(reinterpret_cast<char*>(&slen), 2)) break;
        std::string snap(slen, '\0');
        if (!in.read(snap.data(), slen)) break;
        entries_.emplace(std::string(key, 32), std::move(snap));
    }
}

bool DedupStore::insert(const std::string& key, const std::string& snapshot_id) {
    std::lock_guard lock(mu_);
    auto [it, inserted] = entries_.emplace(key, snapshot_id);
    if (!inserted) return false;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("dedup store: cannot write " +
                                       path_.string());
    uint16_t slen = static_cast<uint16_t>(snapshot_id.size());
    out.write(key.data(), 32);
    out.write(reinterpret_cast<const char*>(&slen), 2);
    out.write(snapshot_id.data(), slen);
    out.flush();
    if (!out) throw std::runtime_error("dedup store: write failed");
    return true;
}

bool DedupStore::insert_url(const std::string& canonical_url,
                            const std::string& snapshot_id) {
    Sha256Digest d = sha256(canonical_url);
    return insert(std::string(reinterpret_cast<const char*>(d.data()), 32),
                  snapshot_id);
}

bool DedupStore::insert_hash(const Sha256Digest& digest,
                             const std::string& snapshot_id) {
    return insert(std::string(reinterpret_cast<const char*>(digest.data()), 32),
                  snapshot_id);
}

bool DedupStore::contains_url(const std::string& canonical_url) const {
    Sha256Digest d = sha256(canonical_url);
    std::lock_guard lock(mu_);
    return entries_.count(
               std::string(reinterpret_cast<const char*>(d.data()), 32)) > 0;
}

const char* to_string(SafetyReason r) {
    switch (r) {
        case SafetyReason::macro_part: return "macro_part";
        case SafetyReason::embedded_object: return "embedded_object";
        case SafetyReason::encrypted: return "encrypted";
        case SafetyReason::zip_bomb: return "zip_bomb";
        case SafetyReason::oversize: return "oversize";
        case SafetyReason::content_type_mismatch: return "content_type_mismatch";
        case SafetyReason::corrupt_archive: return "corrupt_archive";
    }
    return "?";
}

namespace {
constexpr uint64_t kOversizeCap = 256ull << 20;  // 256 MiB uncompressed
constexpr double kBombRatio = 100.0;

bool has_zip_magic(std::string_view b) {
    return b.size() >= 4 && b[0] == 'P' && b[1] == 'K' &&
           (b[2] == 3 || b[2] == 5) && (b[3] == 4 || b[3] == 6);
}

bool has_ole_magic(std::string_view b) {
    static const unsigned char magic[8] = {0xD0, 0xCF, 0x11, 0xE0,
                                           0xA1, 0xB1, 0x1A, 0xE1};
    return b.size() >= 8 &&
           std::equal(magic, magic + 8,
                      reinterpret_cast<const unsigned char*>(b.data()));
}
}  // namespace

SafetyVerdict safety_check(std::string_view archive_bytes,
                           std::string_view declared_type) {
    SafetyVerdict v;
    auto flag = [&v](SafetyReason r) {
        if (std::find(v.reasons.begin(), v.reasons.end(), r) == v.reasons.end())
            v.reasons.push_back(r);
    };

    std::string type = lower(declared_type);
    bool expect_zip = type == "docx" || type == "xlsx" || type == "pptx" ||
                      type == "zip";
    bool expect_ole = type == "doc" || type == "xls" || type == "ppt";
    if (expect_zip && !has_zip_magic(archive_bytes))
        flag(SafetyReason::content_type_mismatch);
    if (expect_ole && !has_ole_magic(archive_bytes))
        flag(SafetyReason::content_type_mismatch);

    if (has_zip_magic(archive_bytes)) {
        auto zr = ZipReader::open(archive_bytes);
        if (!zr) {
            flag(SafetyReason::corrupt_archive);
        } else {
            uint64_t total_comp = 0, total_unc = 0;
            for (const auto& e : zr->entries()) {
                total_comp += e.compressed_size;
                total_unc += e.uncompressed_size;
                if (e.flags & 0x1 || e.method == 99)
                    flag(SafetyReason::encrypted);
                if (contains_ci(e.name, "vbaproject") ||
                    contains_ci(e.name, "macros"))
                    flag(SafetyReason::macro_part);
                if (contains_ci(e.name, "embeddings/") ||
                    contains_ci(e.name, "oleobject"))
                    flag(SafetyReason::embedded_object);
            }
            if (total_unc > kOversizeCap) flag(SafetyReason::oversize);
            if (total_comp > 0 &&
                double(total_unc) / double(total_comp) > kBombRatio)
                flag(SafetyReason::zip_bomb);
        }
    } else if (expect_zip) {
        flag(SafetyReason::corrupt_archive);
    }

    v.passed = v.reasons.empty();
    return v;
}

Sha256Digest content_hash(std::string_view file_bytes) {
    return sha256(file_bytes);
}

std::vector<CandidateUrl> parse_wat(std::string_view text,
                                    const std::string& snapshot_id,
                                    const std::string& source_name) {
    std::vector<CandidateUrl> out;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos
                                               : eol - pos);
        ++line_no;

        for (size_t i = 0; i + 7 < line.size();) {
            size_t h = line.find("http", i);
            if (h == std::string_view::npos) break;
            size_t start = h;
            size_t end = start;
            while (end < line.size() && !std::isspace((unsigned char)line[end]) &&
                   line[end] != '"' && line[end] != '\'' && line[end] != '>' &&
                   line[end] != ',' && line[end] != ')')
                ++end;
            std::string url(line.substr(start, end - start));
            std::string path = url;
            if (size_t q = path.find_first_of("?#"); q != std::string::npos)
                path.resize(q);
            std::string lp = lower(path);
            bool is_doc = lp.size() > 4 && (lp.ends_with(".doc") ||
                                            lp.ends_with(".docx"));
            if (is_doc && (url.starts_with("http://") ||
                           url.starts_with("https://"))) {
                out.push_back({url, snapshot_id,
                               source_name + ":" + std::to_string(line_no)});
            }
            i = end + 1;
        }

        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return out;
}

}  // namespace docpipe
