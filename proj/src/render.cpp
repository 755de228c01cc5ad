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

#include "docpipe/render.hpp"

#include <cmath>
#include <sstream>

#include "docpipe/utf8.hpp"

namespace docpipe {
namespace {

constexpr double kPageW = 612.0;
constexpr double kPageH = 792.0;
constexpr double kMargin = 54.0;
constexpr double kGap = 6.0;
constexpr double kPad = 2.0;
constexpr double kLead = 2.0;
constexpr double kRowH = 18.0;
constexpr double kMediaH = 48.0;  // pictures and charts
constexpr RgbColor kGlyph{60, 60, 60};
constexpr RgbColor kRule{0, 0, 0};

double char_w(double fs) { return 0.5 * fs; }

struct LaidWord {
    std::string text;
    PtRect box;
};

struct LaidComponent {
    int page = 0;
    int component_index = 0;
    ComponentKind kind = ComponentKind::text;
    PtRect box;
    std::vector<LaidWord> words;
    // table rule segments in pt, drawn in both renders
    std::vector<PtRect> rules;
};

size_t cp_len(const std::string& s) { return utf8::decode(s).size(); }

// Greedy word wrap of a run sequence into lines within width cw.
std::vector<std::vector<std::pair<std::string, double>>> wrap_runs(
    const std::vector<TextRun>& runs, double cw) {
    std::vector<std::vector<std::pair<std::string, double>>> lines;
    std::vector<std::pair<std::string, double>> cur;
    double x = 0;
    for (const auto& run : runs) {
        std::istringstream ss(run.text);
        std::string w;
        while (ss >> w) {
            double ww = char_w(run.font_size_pt) * cp_len(w);
            double adv = ww + char_w(run.font_size_pt);
            if (x > 0 && x + ww > cw) {
                lines.push_back(std::move(cur));
                cur.clear();
                x = 0;
            }
            cur.emplace_back(w, run.font_size_pt);
            x += adv;
        }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

struct Layout {
    std::vector<LaidComponent> components;
    int page_count = 1;
};

Layout lay_out(const DocumentIR& ir) {
    Layout out;
    const double content_w = kPageW - 2 * kMargin;
    const double inner_w = content_w - 2 * kPad;
    double y = kMargin;
    int page = 0;

    for (size_t ci = 0; ci < ir.components.size(); ++ci) {
        for (int brk : ir.page_breaks) {
            if (brk == (int)ci && ci > 0) {
                ++page;
                y = kMargin;
            }
        }
        const Component& c = ir.components[ci];
        LaidComponent lc;
        lc.component_index = static_cast<int>(ci);
        lc.kind = c.kind;

        double h = 0;
        std::vector<std::vector<std::pair<std::string, double>>> lines;
        if (c.kind == ComponentKind::table && c.table_grid) {
            h = c.table_grid->rows * kRowH + 2 * kPad;
        } else if (c.kind == ComponentKind::picture ||
                   c.kind == ComponentKind::chart) {
            h = kMediaH + 2 * kPad;
        } else {
            lines = wrap_runs(c.runs, inner_w);
            h = 2 * kPad;
            for (const auto& line : lines) {
                double fs = 0;
                for (const auto& [w, s] : line) fs = std::max(fs, s);
                h += fs + kLead;
            }
            if (lines.empty()) h += 12.0 + kLead;  // background-only stub
        }

        if (y + h > kPageH - kMargin && y > kMargin) {
            ++page;
            y = kMargin;
        }
        lc.page = page;
        lc.box = {kMargin, y, kMargin + content_w, std::min(y + h,
                                                            kPageH - kMargin)};

        // word placement
        if (c.kind == ComponentKind::table && c.table_grid) {
            const TableGrid& g = *c.table_grid;
            double ix1 = lc.box.x1 + kPad, iy1 = lc.box.y1 + kPad;
            double ix2 = lc.box.x2 - kPad, iy2 = lc.box.y2 - kPad;
            double cell_w = g.cols ? (ix2 - ix1) / g.cols : 0;
            for (int r = 1; r < g.rows; ++r)
                lc.rules.push_back({ix1, iy1 + r * kRowH, ix2,
                                    iy1 + r * kRowH});
            for (int col = 1; col < g.cols; ++col)
                lc.rules.push_back({ix1 + col * cell_w, iy1,
                                    ix1 + col * cell_w, iy2});
            const double fs = 10.0;
            for (int r = 0; r < g.rows; ++r) {
                for (int col = 0; col < g.cols; ++col) {
                    const TableCell& cell = g.at(r, col);
                    if (cell.covered || cell.text.empty()) continue;
                    double cx = ix1 + col * cell_w + 3;
                    double cy = iy1 + r * kRowH + 3;
                    double limit = ix1 + (col + cell.colspan) * cell_w - 3;
                    std::istringstream ss(cell.text);
                    std::string w;
                    while (ss >> w) {
                        double ww = char_w(fs) * cp_len(w);
                        if (cx + ww > limit) break;
                        if (cy + fs <= iy2)
                            lc.words.push_back({w, {cx, cy, cx + ww, cy + fs}});
                        cx += ww + char_w(fs);
                    }
                }
            }
        } else if (!lines.empty()) {
            double ly = lc.box.y1 + kPad;
            for (const auto& line : lines) {
                double fs_line = 0;
                for (const auto& [w, s] : line) fs_line = std::max(fs_line, s);
                double x = lc.box.x1 + kPad;
                for (const auto& [w, fs] : line) {
                    double ww = char_w(fs) * cp_len(w);
                    // baseline-aligned at the bottom of the line box
                    double wy1 = ly + (fs_line - fs);
                    if (wy1 + fs <= lc.box.y2 - kPad + 0.01)
                        lc.words.push_back({w, {x, wy1, x + ww, wy1 + fs}});
                    x += ww + char_w(fs);
                }
                ly += fs_line + kLead;
            }
        }

        y = lc.box.y2 + kGap;
        out.components.push_back(std::move(lc));
    }
    out.page_count = page + 1;
    return out;
}

}  // namespace

RenderResult toy_render(const DocumentIR& ir, int dpi,
                        const ColorPalette* colorize) {
    if (dpi != 72 && dpi != 96 && dpi != 144 && dpi != 300)
        throw std::runtime_error("unsupported dpi");

    Layout layout = lay_out(ir);
    RenderResult res;
    for (int p = 0; p < layout.page_count; ++p)
        res.pages.push_back(RasterPage::blank(kPageW, kPageH, dpi));

    const double s = dpi / 72.0;
    auto px = [s](double v) { return static_cast<int>(std::lround(v * s)); };

    std::vector<int> word_order(layout.page_count, 0);
    for (const auto& lc : layout.components) {
        RasterPage& pg = res.pages[lc.page];
        if (colorize) {
            auto color = colorize->get(lc.kind);
            if (color)
                pg.fill_rect(px(lc.box.x1), px(lc.box.y1), px(lc.box.x2),
                             px(lc.box.y2), *color);
        }
        for (const auto& rule : lc.rules) {
            if (rule.y1 == rule.y2)  // horizontal, 1px
                pg.fill_rect(px(rule.x1), px(rule.y1), px(rule.x2),
                             px(rule.y1) + 1, kRule);
            else
                pg.fill_rect(px(rule.x1), px(rule.y1), px(rule.x1) + 1,
                             px(rule.y2), kRule);
        }
        for (const auto& w : lc.words)
            pg.fill_rect(px(w.box.x1), px(w.box.y1), px(w.box.x2),
                         px(w.box.y2), kGlyph);

        res.components.push_back(
            {lc.page, lc.component_index, lc.kind, lc.box});
        for (const auto& w : lc.words)
            res.words.push_back({lc.page, w.text, w.box,
                                 word_order[lc.page]++, lc.component_index});
    }
    return res;
}

}  // namespace docpipe
