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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "docpipe/hash.hpp"
#include "docpipe/ingest.hpp"
#include "docpipe/zip.hpp"

using namespace docpipe;
namespace fs = std::filesystem;

TEST_CASE("url canonicalization applies the three rewrite rules") {
    CHECK(canonicalize_url("HTTP://Example.COM/A/?b=2&a=1") ==
          "http://example.com/A?a=1&b=2");
    CHECK(canonicalize_url("http://x.com/doc.docx") == "http://x.com/doc.docx");
    CHECK(canonicalize_url("http://x.com/dir/") == "http://x.com/dir");
    CHECK(canonicalize_url("https://x.com/p#frag") == "https://x.com/p");
    CHECK(canonicalize_url("http://x.com/") == "http://x.com");
}

TEST_CASE("query parameters sort by key then value, duplicates kept") {
    CHECK(canonicalize_url("http://x.com/p?k=2&k=1") == "http://x.com/p?k=1&k=2");
    CHECK(canonicalize_url("http://x.com/p?b=1&a=2&a=1") ==
          "http://x.com/p?a=1&a=2&b=1");
}

TEST_CASE("malformed urls raise UrlError with the input attached") {
    CHECK_THROWS_AS(canonicalize_url("ftp://x.com/a"), UrlError);
    CHECK_THROWS_AS(canonicalize_url("not a url"), UrlError);
    try {
        canonicalize_url("ftp://x.com/a");
    } catch (const UrlError& e) {
        CHECK(e.input() == "ftp://x.com/a");
    }
}

TEST_CASE("canonicalization is idempotent over generated urls") {
    std::mt19937 rng(11);
    const char* hosts[] = {"A.com", "b.Org", "WWW.c.net"};
    const char* paths[] = {"", "/Dir", "/Dir/", "/a/b.docx"};
    const char* queries[] = {"", "?z=1&a=2", "?k=2&k=1&b=0"};
    const char* frags[] = {"", "#top"};
    for (int i = 0; i < 500; ++i) {
        std::string u = std::string(rng() % 2 ? "http://" : "HTTPS://") +
                        hosts[rng() % 3] + paths[rng() % 4] +
                        queries[rng() % 3] + frags[rng() % 2];
        std::string once = canonicalize_url(u);
        CHECK(canonicalize_url(once) == once);
    }
}

TEST_CASE("dedup store is idempotent and survives reopen") {
    fs::path store_path =
        fs::temp_directory_path() / "docpipe_test_dedup.bin";
    fs::remove(store_path);
    {
        DedupStore store(store_path);
        CHECK(store.insert_url("http://x.com/a.docx", "S1"));
        CHECK_FALSE(store.insert_url("http://x.com/a.docx", "S2"));
        CHECK(store.insert_url("http://x.com/b.docx", "S1"));
        CHECK(store.contains_url("http://x.com/a.docx"));
        CHECK(store.size() == 2);
    }
    {
        DedupStore reopened(store_path);
        CHECK(reopened.size() == 2);
        CHECK(reopened.contains_url("http://x.com/b.docx"));
        CHECK_FALSE(reopened.insert_url("http://x.com/a.docx", "S3"));
    }
    fs::remove(store_path);
}

TEST_CASE("planted duplicate fraction is reported exactly") {
    fs::path store_path =
        fs::temp_directory_path() / "docpipe_test_dedup2.bin";
    fs::remove(store_path);
    DedupStore store(store_path);
    int dup = 0;
    for (int i = 0; i < 100; ++i) {
        // every 4th url repeats the previous one
        std::string u = "http://x.com/f" + std::to_string(i - (i % 4 == 3)) +
                        ".docx";
        if (!store.insert_url(u, "S")) ++dup;
    }
    CHECK(dup == 25);
    fs::remove(store_path);
}

TEST_CASE("content hash matches the published empty-string digest") {
    CHECK(to_hex(content_hash("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(content_hash("abc") == content_hash("abc"));
    CHECK(content_hash("abc") != content_hash("abd"));
}

namespace {

std::string docx_like(std::initializer_list<const char*> names) {
    ZipWriter w;
    for (const char* n : names) w.add(n, "payload payload payload");
    return w.finish();
}

}  // namespace

TEST_CASE("safety check passes a clean archive") {
    auto v = safety_check(docx_like({"[Content_Types].xml", "word/document.xml"}),
                          "docx");
    CHECK(v.passed);
    CHECK(v.reasons.empty());
}

TEST_CASE("safety check flags macro parts and embedded objects") {
    auto macro = safety_check(
        docx_like({"word/document.xml", "word/vbaProject.bin"}), "docx");
    CHECK_FALSE(macro.passed);
    REQUIRE(macro.reasons.size() == 1);
    CHECK(macro.reasons[0] == SafetyReason::macro_part);

    auto embed = safety_check(
        docx_like({"word/document.xml", "word/embeddings/oleObject1.bin"}),
        "docx");
    CHECK_FALSE(embed.passed);
    CHECK(embed.reasons[0] == SafetyReason::embedded_object);
}

TEST_CASE("safety check flags bombs, corruption, and type mismatch") {
    ZipWriter w;
    w.add("word/document.xml", "x");
    std::string small(1000, 'a');
    w.add_forged("word/media/blob.bin", small, 1000ull * 1000);
    auto bomb = safety_check(w.finish(), "docx");
    CHECK_FALSE(bomb.passed);
    CHECK(std::count(bomb.reasons.begin(), bomb.reasons.end(),
                     SafetyReason::zip_bomb) == 1);

    auto corrupt = safety_check("PK\x03\x04 definitely not a zip", "docx");
    CHECK_FALSE(corrupt.passed);
    CHECK(corrupt.reasons[0] == SafetyReason::corrupt_archive);

    auto mismatch = safety_check("%PDF-1.7 not an archive", "docx");
    CHECK_FALSE(mismatch.passed);
    CHECK(std::count(mismatch.reasons.begin(), mismatch.reasons.end(),
                     SafetyReason::content_type_mismatch) == 1);
}

TEST_CASE("safety check is deterministic and non-mutating") {
    std::string bytes = docx_like({"word/document.xml"});
    std::string copy = bytes;
    auto a = safety_check(bytes, "docx");
    auto b = safety_check(bytes, "docx");
    CHECK(bytes == copy);
    CHECK(a.passed == b.passed);
}

TEST_CASE("wat parsing extracts one candidate per matching line") {
    std::string listing =
        "{\"url\": \"http://a.com/x.docx\"}\n"
        "{\"url\": \"http://a.com/page.html\"}\n"
        "{\"url\": \"https://b.org/old.DOC\"}\n"
        "garbage line\n";
    auto found = parse_wat(listing, "SNAP-1", "listing.wat");
    REQUIRE(found.size() == 2);
    CHECK(found[0].raw == "http://a.com/x.docx");
    CHECK(found[0].snapshot_id == "SNAP-1");
    CHECK(found[0].source_record == "listing.wat:1");
    CHECK(found[1].raw == "https://b.org/old.DOC");
    CHECK(found[1].source_record == "listing.wat:3");
}

TEST_CASE("zip round trip stores and inflates members") {
    ZipWriter w;
    std::string big(100000, 'z');
    w.add("stored.txt", "hello", false);
    w.add("packed.txt", big, true);
    std::string bytes = w.finish();

    auto r = ZipReader::open(bytes);
    REQUIRE(r.has_value());
    CHECK(r->has("stored.txt"));
    CHECK(r->extract("stored.txt") == "hello");
    CHECK(r->extract("packed.txt") == big);
    CHECK_FALSE(r->extract("missing.txt").has_value());
}
