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
#include <filesystem>
#include <random>

#include "docpipe/diff.hpp"
#include "docpipe/raster.hpp"
#include "docpipe/render.hpp"
#include "docpipe/structure.hpp"

using namespace docpipe;

namespace {

DocumentIR sample_ir() {
    return parse_structure(
        "<document><heading>Sample Page</heading>"
        "<p>The quick brown fox jumps over the lazy dog again and again.</p>"
        "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr>"
        "</table><p>Closing paragraph with several more words here.</p>"
        "</document>");
}

double iou(const PtRect& a, const PtRect& b) {
    double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    double inter = ix * iy;
    double uni = a.area() + b.area() - inter;
    return uni > 0 ? inter / uni : 0;
}

}  // namespace

TEST_CASE("rendering is deterministic") {
    DocumentIR ir = sample_ir();
    RenderResult a = toy_render(ir, 144);
    RenderResult b = toy_render(ir, 144);
    REQUIRE(a.pages.size() == b.pages.size());
    for (size_t p = 0; p < a.pages.size(); ++p)
        CHECK(a.pages[p].rgb == b.pages[p].rgb);
}

TEST_CASE("raster dimensions follow the dpi formula") {
    for (int dpi : {72, 96, 144, 300}) {
        RenderResult r = toy_render(sample_ir(), dpi);
        REQUIRE(r.pages.size() >= 1);
        CHECK(r.pages[0].width_px == std::lround(612.0 * dpi / 72.0));
        CHECK(r.pages[0].height_px == std::lround(792.0 * dpi / 72.0));
    }
}

TEST_CASE("empty ir renders a blank white page") {
    DocumentIR empty;
    RenderResult r = toy_render(empty, 72);
    REQUIRE(r.pages.size() == 1);
    for (uint8_t v : r.pages[0].rgb) CHECK(v == 255);
}

TEST_CASE("base and colorized pair diff only inside component boxes") {
    DocumentIR ir = sample_ir();
    ColorPalette palette = ColorPalette::standard();
    RenderResult base = toy_render(ir, 96);
    RenderResult colorized = toy_render(ir, 96, &palette);
    ChangeMask mask = diff_pages(base.pages[0], colorized.pages[0], palette);

    double px_per_pt = 96.0 / 72.0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.label(x, y) < 0) continue;
            bool inside = false;
            for (const auto& c : base.components) {
                if (c.page != 0) continue;
                if (x >= std::floor(c.box_pt.x1 * px_per_pt) - 1 &&
                    x <= std::ceil(c.box_pt.x2 * px_per_pt) + 1 &&
                    y >= std::floor(c.box_pt.y1 * px_per_pt) - 1 &&
                    y <= std::ceil(c.box_pt.y2 * px_per_pt) + 1)
                    inside = true;
            }
            CHECK(inside);
        }
    }
}

TEST_CASE("identical pages diff to an empty mask") {
    ColorPalette palette = ColorPalette::standard();
    RasterPage page = RasterPage::blank(612, 792, 72);
    ChangeMask mask = diff_pages(page, page, palette);
    for (int32_t l : mask.labels) CHECK(l == -1);
}

TEST_CASE("pre-existing identical colors never get labeled") {
    ColorPalette palette = ColorPalette::standard();
    RasterPage a = RasterPage::blank(612, 792, 72);
    RasterPage b = a;
    a.fill_rect(100, 100, 150, 130, {0, 0, 200});  // same logo both sides
    b.fill_rect(100, 100, 150, 130, {0, 0, 200});
    b.fill_rect(300, 300, 340, 340, palette.ordered()[0].second);
    ChangeMask mask = diff_pages(a, b, palette);
    CHECK(mask.label(110, 110) == -1);
    CHECK(mask.label(310, 310) == 0);
}

TEST_CASE("diff threshold is a strict boundary") {
    ColorPalette palette = ColorPalette::standard();
    RasterPage a = RasterPage::blank(72, 72, 72);
    RasterPage at_threshold = a, above = a;
    at_threshold.fill_rect(10, 10, 18, 18, {255 - 12, 255, 255});
    above.fill_rect(10, 10, 18, 18, {255 - 13, 255, 255});
    ChangeMask m1 = diff_pages(a, at_threshold, palette, 12);
    ChangeMask m2 = diff_pages(a, above, palette, 12);
    CHECK(m1.label(12, 12) == -1);
    CHECK(m2.label(12, 12) != -1);
}

TEST_CASE("diff labeling is symmetric in magnitude") {
    DocumentIR ir = sample_ir();
    ColorPalette palette = ColorPalette::standard();
    RenderResult base = toy_render(ir, 72);
    RenderResult colorized = toy_render(ir, 72, &palette);
    ChangeMask fwd = diff_pages(base.pages[0], colorized.pages[0], palette);
    ChangeMask rev = diff_pages(colorized.pages[0], base.pages[0], palette);
    for (size_t i = 0; i < fwd.labels.size(); ++i)
        CHECK((fwd.labels[i] < 0) == (rev.labels[i] < 0));
}

TEST_CASE("region extraction honors labels, connectivity, and min_area") {
    ColorPalette palette = ColorPalette::standard();
    auto entries = palette.ordered();
    RasterPage a = RasterPage::blank(200, 200, 72);
    RasterPage b = a;
    b.fill_rect(10, 10, 30, 20, entries[0].second);
    b.fill_rect(100, 50, 115, 65, entries[1].second);
    b.fill_rect(150, 150, 152, 152, entries[0].second);  // below min_area

    ChangeMask mask = diff_pages(a, b, palette);
    auto regions = extract_regions(mask, palette);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].kind == entries[0].first);
    CHECK(regions[0].x1 == 10);
    CHECK(regions[0].y1 == 10);
    CHECK(regions[0].x2 == 30);
    CHECK(regions[0].y2 == 20);
    CHECK(regions[0].area_px == 200);
    CHECK(regions[1].kind == entries[1].first);
    // sorted by (y1, x1)
    CHECK(regions[0].y1 <= regions[1].y1);
}

TEST_CASE("diagonal touch is 8-connected") {
    ColorPalette palette = ColorPalette::standard();
    RasterPage a = RasterPage::blank(64, 64, 72);
    RasterPage b = a;
    RgbColor c = palette.ordered()[0].second;
    b.fill_rect(10, 10, 14, 14, c);
    b.fill_rect(14, 14, 18, 18, c);  // touches only at the corner
    ChangeMask mask = diff_pages(a, b, palette);
    auto regions = extract_regions(mask, palette);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].area_px == 32);
}

TEST_CASE("drift detection registers a synthetic translate") {
    DocumentIR ir = sample_ir();
    RenderResult base = toy_render(ir, 72);
    const RasterPage& src = base.pages[0];

    RasterPage shifted = RasterPage::blank(612, 792, 72);
    for (int y = 0; y < src.height_px; ++y)
        for (int x = 0; x + 2 < src.width_px; ++x)
            shifted.set(x + 2, y, src.at(x, y));

    ColorPalette palette = ColorPalette::standard();
    RenderResult colorized = toy_render(ir, 72, &palette);
    ChangeMask mask = diff_pages(src, colorized.pages[0], palette);
    auto regions = extract_regions(mask, palette);

    DriftReport same = detect_drift(src, src, regions);
    CHECK(same.shift_dx == 0);
    CHECK(same.shift_dy == 0);
    CHECK(same.mismatched_component_fraction == 0);
    CHECK_FALSE(same.excluded);

    DriftReport moved = detect_drift(src, shifted, regions);
    CHECK(moved.shift_dx == 2);
    CHECK(moved.shift_dy == 0);
    CHECK_FALSE(moved.excluded);
}

TEST_CASE("corrupting one of ten regions trips the 5% rule") {
    RasterPage a = RasterPage::blank(400, 400, 72);
    RasterPage b = a;
    std::vector<RegionDetection> regions;
    for (int i = 0; i < 10; ++i) {
        RegionDetection r;
        r.x1 = 10 + (i % 5) * 70;
        r.y1 = 10 + (i / 5) * 100;
        r.x2 = r.x1 + 40;
        r.y2 = r.y1 + 40;
        r.area_px = 1600;
        regions.push_back(r);
    }
    b.fill_rect(regions[3].x1, regions[3].y1, regions[3].x2, regions[3].y2, {10, 10, 10});
    DriftReport rep = detect_drift(a, b, regions);
    CHECK(rep.mismatched_component_fraction == doctest::Approx(0.1));
    CHECK(rep.excluded);
}

TEST_CASE("entropy classifier separates the three fixture families") {
    RasterPage constant = RasterPage::blank(100, 100, 72);
    CHECK(page_entropy(constant) == doctest::Approx(0.0));
    CHECK(classify_scanned(constant) == PageClass::rendered_text);

    RasterPage noise = RasterPage::blank(100, 100, 72);
    std::mt19937 rng(3);
    for (int y = 0; y < 100; ++y)
        for (int x = 0; x < 100; ++x) {
            uint8_t v = static_cast<uint8_t>(rng());
            noise.set(x, y, {v, static_cast<uint8_t>(rng()),
                             static_cast<uint8_t>(rng())});
        }
    CHECK(page_entropy(noise) > 6.5);
    CHECK(classify_scanned(noise) == PageClass::scanned);

    RenderResult text = toy_render(sample_ir(), 96);
    CHECK(page_entropy(text.pages[0]) < 4.5);
    CHECK(classify_scanned(text.pages[0]) == PageClass::rendered_text);
}

TEST_CASE("entropy is invariant to integer upscaling") {
    RasterPage small = RasterPage::blank(50, 50, 72);
    for (int y = 0; y < 50; ++y)
        for (int x = 0; x < 50; ++x)
            if ((x / 5 + y / 5) % 2)
                small.set(x, y, {30, 30, 30});
    RasterPage big = RasterPage::blank(100, 100, 72);
    for (int y = 0; y < 100; ++y)
        for (int x = 0; x < 100; ++x) big.set(x, y, small.at(x / 2, y / 2));
    CHECK(page_entropy(small) == doctest::Approx(page_entropy(big)));
}

TEST_CASE("png io round-trips pixels and dpi") {
    namespace fs = std::filesystem;
    RasterPage page = RasterPage::blank(40, 30, 144);
    page.fill_rect(5, 5, 15, 15, {200, 30, 90});
    fs::path p = fs::temp_directory_path() / "docpipe_test_page.png";
    write_png(p, page);
    RasterPage back = read_png(p);
    CHECK(back.width_px == page.width_px);
    CHECK(back.height_px == page.height_px);
    CHECK(back.dpi == page.dpi);
    CHECK(back.rgb == page.rgb);
    fs::remove(p);
}

TEST_CASE("closure: one detection per non-empty component at high iou") {
    DocumentIR ir = sample_ir();
    ColorPalette palette = ColorPalette::standard();
    RenderResult base = toy_render(ir, 144);
    RenderResult colorized = toy_render(ir, 144, &palette);
    double px_to_pt = 72.0 / 144.0;

    for (size_t p = 0; p < base.pages.size(); ++p) {
        ChangeMask mask =
            diff_pages(base.pages[p], colorized.pages[p], palette);
        auto regions = extract_regions(mask, palette);
        std::vector<GtComponent> gt;
        for (const auto& c : base.components)
            if (c.page == (int)p) gt.push_back(c);
        REQUIRE(regions.size() == gt.size());
        for (const auto& g : gt) {
            double best = 0;
            for (const auto& r : regions) {
                PtRect rr{r.x1 * px_to_pt, r.y1 * px_to_pt, r.x2 * px_to_pt,
                          r.y2 * px_to_pt};
                best = std::max(best, iou(rr, g.box_pt));
            }
            CHECK(best >= 0.95);
        }
    }
}
