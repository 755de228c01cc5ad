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

#include <algorithm>
#include <random>

#include "docpipe/align.hpp"

using namespace docpipe;

namespace {

WordBox word(const char* text, double x1, double y1, double x2, double y2,
             int order) {
    return {text, {x1, y1, x2, y2}, order};
}

RegionPt region(ComponentKind kind, double x1, double y1, double x2, double y2,
                double confidence) {
    RegionPt r;
    r.kind = kind;
    r.bbox_pt = {x1, y1, x2, y2};
    r.confidence = confidence;
    return r;
}

}  // namespace

TEST_CASE("fully contained words assign and concatenate in order") {
    std::vector<WordBox> words = {word("world", 40, 10, 60, 20, 1),
                                  word("hello", 12, 10, 30, 20, 0)};
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 10, 5, 100, 25, 1.0)};
    AnnotatedPage page = assign_words(words, regions, 612, 792);
    REQUIRE(page.components.size() == 1);
    CHECK(page.components[0].text == "hello world");
    CHECK(page.unassigned_words.empty());
}

TEST_CASE("containment below the threshold leaves a word unassigned") {
    // word area 20x10, only half inside the region
    std::vector<WordBox> words = {word("half", 90, 10, 110, 20, 0)};
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 0, 0, 100, 100, 1.0)};
    AnnotatedPage page = assign_words(words, regions, 612, 792);
    CHECK(page.components[0].text.empty());
    REQUIRE(page.unassigned_words.size() == 1);
    CHECK(page.unassigned_words[0].text == "half");
}

TEST_CASE("boundary containment 0.7 assigns") {
    // word 10 wide, 7 units inside: containment exactly 0.7
    std::vector<WordBox> words = {word("edge", 93, 10, 103, 20, 0)};
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 0, 0, 100, 100, 1.0)};
    AnnotatedPage page = assign_words(words, regions, 612, 792);
    CHECK(page.components[0].text == "edge");
}

TEST_CASE("higher confidence wins overlapping claims") {
    std::vector<WordBox> words = {word("caption", 20, 20, 40, 28, 0)};
    std::vector<RegionPt> regions = {
        region(ComponentKind::picture, 0, 0, 200, 200, 0.8),
        region(ComponentKind::text, 10, 10, 60, 40, 1.0)};
    AnnotatedPage page = assign_words(words, regions, 612, 792);
    auto text_it =
        std::find_if(page.components.begin(), page.components.end(),
                     [](const PageComponent& c) {
                         return c.kind == ComponentKind::text;
                     });
    REQUIRE(text_it != page.components.end());
    CHECK(text_it->text == "caption");
}

TEST_CASE("confidence ties break to the smaller region") {
    std::vector<WordBox> words = {word("w", 20, 20, 30, 28, 0)};
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 0, 0, 300, 300, 1.0),
        region(ComponentKind::footnote, 10, 10, 50, 40, 1.0)};
    AnnotatedPage page = assign_words(words, regions, 612, 792);
    auto small =
        std::find_if(page.components.begin(), page.components.end(),
                     [](const PageComponent& c) {
                         return c.kind == ComponentKind::footnote;
                     });
    REQUIRE(small != page.components.end());
    CHECK(small->text == "w");
}

TEST_CASE("assignment is invariant under region permutation") {
    std::vector<WordBox> words;
    std::mt19937 rng(5);
    for (int i = 0; i < 40; ++i) {
        double x = (rng() % 500) + 10;
        double y = (rng() % 700) + 10;
        words.push_back(word("w", x, y, x + 8, y + 4, i));
    }
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 0, 0, 306, 396, 1.0),
        region(ComponentKind::text, 306, 0, 612, 396, 1.0),
        region(ComponentKind::table, 0, 396, 306, 792, 1.0),
        region(ComponentKind::list_item, 306, 396, 612, 792, 0.5)};

    AnnotatedPage first = assign_words(words, regions, 612, 792);
    std::vector<RegionPt> shuffled = regions;
    std::reverse(shuffled.begin(), shuffled.end());
    AnnotatedPage second = assign_words(words, shuffled, 612, 792);

    auto texts = [](const AnnotatedPage& p) {
        std::vector<std::string> out;
        for (const auto& c : p.components) out.push_back(c.text);
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(texts(first) == texts(second));
    CHECK(first.unassigned_words.size() == second.unassigned_words.size());
}

TEST_CASE("assigned plus unassigned equals input count") {
    std::mt19937 rng(9);
    std::vector<WordBox> words;
    for (int i = 0; i < 100; ++i) {
        double x = rng() % 600;
        double y = rng() % 780;
        words.push_back(word("w", x, y, x + 10, y + 6, i));
    }
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 50, 50, 400, 400, 1.0)};
    AnnotatedPage page = assign_words(words, regions, 612, 792);
    size_t assigned = 0;
    for (const auto& c : page.components) {
        if (c.text.empty()) continue;
        assigned += 1 + std::count(c.text.begin(), c.text.end(), ' ');
    }
    CHECK(assigned + page.unassigned_words.size() == words.size());
}

TEST_CASE("raising the threshold never assigns more words") {
    std::mt19937 rng(13);
    std::vector<WordBox> words;
    for (int i = 0; i < 60; ++i) {
        double x = rng() % 580;
        double y = rng() % 760;
        words.push_back(word("w", x, y, x + 20, y + 10, i));
    }
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 100, 100, 400, 500, 1.0)};
    size_t prev_unassigned = 0;
    for (double t : {0.3, 0.5, 0.7, 0.9, 1.0}) {
        AnnotatedPage page = assign_words(words, regions, 612, 792, t);
        CHECK(page.unassigned_words.size() >= prev_unassigned);
        prev_unassigned = page.unassigned_words.size();
    }
}

TEST_CASE("degenerate word boxes are counted and skipped") {
    std::vector<WordBox> words = {word("ok", 10, 10, 30, 20, 0),
                                  word("flat", 50, 50, 90, 50, 1)};
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 0, 0, 200, 200, 1.0)};
    AnnotatedPage page = assign_words(words, regions, 612, 792);
    CHECK(page.components[0].text == "ok");
    CHECK(page.degenerate_word_count == 1);
}

TEST_CASE("no-space languages concatenate without separators") {
    std::vector<WordBox> words = {word("\xE6\x96\x87", 10, 10, 20, 20, 0),
                                  word("\xE5\xAD\x97", 22, 10, 32, 20, 1)};
    std::vector<RegionPt> regions = {
        region(ComponentKind::text, 0, 0, 100, 100, 1.0)};
    AnnotatedPage page =
        assign_words(words, regions, 612, 792, 0.7, std::string("zh"));
    CHECK(page.components[0].text == "\xE6\x96\x87\xE5\xAD\x97");
}

TEST_CASE("source order passes through as reading rank") {
    std::vector<PageComponent> comps(3);
    comps[0].source_order = 0;
    comps[1].source_order = 1;
    comps[2].source_order = 2;
    comps[0].bbox_pt = {0, 500, 100, 600};  // geometry deliberately scrambled
    comps[1].bbox_pt = {0, 0, 100, 100};
    comps[2].bbox_pt = {0, 250, 100, 350};
    CHECK(reading_order(comps) == std::vector<int>{0, 1, 2});
}

TEST_CASE("xy-cut orders two columns left first, top to bottom") {
    std::vector<PageComponent> comps(4);
    comps[0].bbox_pt = {320, 60, 560, 160};   // right top
    comps[1].bbox_pt = {50, 400, 290, 500};   // left bottom
    comps[2].bbox_pt = {50, 60, 290, 160};    // left top
    comps[3].bbox_pt = {320, 400, 560, 500};  // right bottom
    std::vector<int> ranks = reading_order(comps);
    CHECK(ranks[2] == 0);  // left top
    CHECK(ranks[1] == 1);  // left bottom
    CHECK(ranks[0] == 2);  // right top
    CHECK(ranks[3] == 3);  // right bottom
}

TEST_CASE("single component ranks zero") {
    std::vector<PageComponent> one(1);
    one[0].bbox_pt = {10, 10, 50, 50};
    CHECK(reading_order(one) == std::vector<int>{0});
}

TEST_CASE("rank_components sorts the page by rank") {
    AnnotatedPage page;
    page.components.resize(2);
    page.components[0].bbox_pt = {50, 400, 200, 500};
    page.components[0].text = "second";
    page.components[1].bbox_pt = {50, 50, 200, 150};
    page.components[1].text = "first";
    rank_components(page);
    CHECK(page.components[0].text == "first");
    CHECK(page.components[0].reading_rank == 0);
    CHECK(page.components[1].text == "second");
    CHECK(page.components[1].reading_rank == 1);
}
