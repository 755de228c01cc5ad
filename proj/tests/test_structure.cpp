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

#include <cmath>

#include "docpipe/structure.hpp"
#include "docpipe/zip.hpp"

using namespace docpipe;

TEST_CASE("native tags map directly with full confidence") {
    DocumentIR ir = parse_structure(
        "<document><heading>Intro</heading><p>Body text.</p></document>");
    REQUIRE(ir.components.size() == 2);
    CHECK(ir.components[0].kind == ComponentKind::section_header);
    CHECK(ir.components[0].provenance == Provenance::native_tag);
    CHECK(ir.components[1].kind == ComponentKind::text);
    CHECK(ir.components[0].text() == "Intro");
    CHECK(ir.components[0].source_order == 0);
    CHECK(ir.components[1].source_order == 1);
}

TEST_CASE("builtin styles carry 0.8 confidence") {
    DocumentIR ir = parse_structure(
        "<document><p style=\"Heading1\">Top</p>"
        "<p style=\"Caption\">Fig 1</p></document>");
    REQUIRE(ir.components.size() == 2);
    CHECK(ir.components[0].kind == ComponentKind::section_header);
    CHECK(ir.components[0].provenance == Provenance::builtin_style);
    CHECK(confidence(ir.components[0].provenance) == 0.8);
    CHECK(ir.components[1].kind == ComponentKind::figure_caption);
}

TEST_CASE("font size 1.5x median promotes a heading heuristically") {
    DocumentIR ir = parse_structure(
        "<document>"
        "<p><r font_size=\"24\">Big Title</r></p>"
        "<p><r font_size=\"12\">body</r></p>"
        "<p><r font_size=\"12\">body</r></p>"
        "<p><r font_size=\"12\">body</r></p>"
        "</document>");
    CHECK(ir.components[0].kind == ComponentKind::section_header);
    CHECK(ir.components[0].provenance == Provenance::heuristic);
    CHECK(confidence(ir.components[0].provenance) == 0.5);
    CHECK(ir.components[1].kind == ComponentKind::text);
}

TEST_CASE("list markers promote list items heuristically") {
    DocumentIR ir = parse_structure(
        "<document><p>\xE2\x80\xA2 first</p><p>1. second</p>"
        "<p>a) third</p><p>plain</p></document>");
    CHECK(ir.components[0].kind == ComponentKind::list_item);
    CHECK(ir.components[1].kind == ComponentKind::list_item);
    CHECK(ir.components[2].kind == ComponentKind::list_item);
    CHECK(ir.components[3].kind == ComponentKind::text);
    CHECK(ir.components[0].provenance == Provenance::heuristic);
}

TEST_CASE("table grids preserve spans and mark covered cells") {
    DocumentIR ir = parse_structure(
        "<document><table>"
        "<tr><td colspan=\"2\">wide</td></tr>"
        "<tr><td>a</td><td>b</td></tr>"
        "</table></document>");
    REQUIRE(ir.components.size() == 1);
    REQUIRE(ir.components[0].table_grid.has_value());
    const TableGrid& g = *ir.components[0].table_grid;
    CHECK(g.rows == 2);
    CHECK(g.cols == 2);
    CHECK(g.at(0, 0).colspan == 2);
    CHECK(g.at(0, 0).text == "wide");
    CHECK(g.at(0, 1).covered);
    CHECK(g.at(1, 0).text == "a");
    CHECK(g.at(1, 1).text == "b");
}

TEST_CASE("zip-packaged bodies parse like bare markup") {
    std::string body = "<document><p>packed</p></document>";
    ZipWriter w;
    w.add("document.xml", body, true);
    std::string archive = w.finish();
    DocumentIR from_zip = parse_structure(archive);
    DocumentIR from_bare = parse_structure(body);
    REQUIRE(from_zip.components.size() == 1);
    CHECK(from_zip.components[0].text() == from_bare.components[0].text());
}

TEST_CASE("repairable markup parses with the repaired flag") {
    DocumentIR ir =
        parse_structure("<document><p>open<p>next</p></document>");
    CHECK(ir.repaired);
    CHECK_FALSE(ir.repair_actions.empty());
}

TEST_CASE("unreadable input raises ParseError") {
    CHECK_THROWS_AS(parse_structure("<document"), ParseError);
    ZipWriter w;
    w.add("other.xml", "<document/>");
    CHECK_THROWS_AS(parse_structure(w.finish()), ParseError);
}

TEST_CASE("standard palette satisfies its separation invariants") {
    ColorPalette p = ColorPalette::standard();
    auto entries = p.ordered();
    auto far_enough = [](RgbColor a, RgbColor b) {
        return std::abs(a.r - b.r) >= 32 || std::abs(a.g - b.g) >= 32 ||
               std::abs(a.b - b.b) >= 32;
    };
    for (size_t i = 0; i < entries.size(); ++i) {
        for (size_t j = i + 1; j < entries.size(); ++j)
            CHECK(far_enough(entries[i].second, entries[j].second));
        CHECK(far_enough(entries[i].second, RgbColor{255, 255, 255}));
        CHECK(far_enough(entries[i].second, RgbColor{0, 0, 0}));
    }
}

TEST_CASE("color injection is content-preserving and complete") {
    DocumentIR ir = parse_structure(
        "<document><p>a</p><table><tr><td>b</td></tr></table></document>");
    ColorPalette palette = ColorPalette::standard();
    DocumentIR colored = inject_colors(ir, palette);
    REQUIRE(colored.components.size() == ir.components.size());
    for (size_t i = 0; i < colored.components.size(); ++i) {
        CHECK(colored.components[i].fill.has_value());
        CHECK(colored.components[i].text() == ir.components[i].text());
        CHECK_FALSE(ir.components[i].fill.has_value());
    }
}

TEST_CASE("palette gaps raise an error naming the kind") {
    DocumentIR ir =
        parse_structure("<document><table><tr><td>x</td></tr></table></document>");
    ColorPalette empty;
    try {
        inject_colors(ir, empty);
        FAIL("expected PaletteError");
    } catch (const PaletteError& e) {
        CHECK(e.kind == ComponentKind::table);
    }
}

TEST_CASE("ir json round trip is lossless") {
    DocumentIR ir = parse_structure(
        "<document><heading>H</heading><p>\xE2\x80\xA2 item</p>"
        "<table><tr><td colspan=\"2\">w</td></tr><tr><td>a</td><td>b</td></tr>"
        "</table></document>");
    DocumentIR back = ir_from_json(ir_to_json(ir));
    REQUIRE(back.components.size() == ir.components.size());
    for (size_t i = 0; i < ir.components.size(); ++i) {
        CHECK(back.components[i].kind == ir.components[i].kind);
        CHECK(back.components[i].provenance == ir.components[i].provenance);
        CHECK(back.components[i].text() == ir.components[i].text());
    }
    REQUIRE(back.components[2].table_grid.has_value());
    CHECK(back.components[2].table_grid->at(0, 0).colspan == 2);
}
