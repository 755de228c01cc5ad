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

#include "docpipe/structure.hpp"

#include <algorithm>
#include <regex>

#include "docpipe/xml.hpp"
#include "docpipe/zip.hpp"

namespace docpipe {
namespace {

std::optional<ComponentKind> native_kind(const std::string& tag) {
    if (auto k = kind_from_string(tag)) return k;
    if (tag == "heading") return ComponentKind::section_header;
    if (tag == "header") return ComponentKind::page_header;
    if (tag == "footer") return ComponentKind::page_footer;
    if (tag == "caption") return ComponentKind::figure_caption;
    if (tag == "figure" || tag == "image") return ComponentKind::picture;
    if (tag == "equation") return ComponentKind::formula;
    return std::nullopt;
}

std::optional<ComponentKind> style_kind(const std::string& style) {
    if (style.rfind("Heading", 0) == 0) return ComponentKind::section_header;
    if (style == "Title") return ComponentKind::title;
    if (style.rfind("List", 0) == 0) return ComponentKind::list_item;
    if (style == "Caption") return ComponentKind::figure_caption;
    if (style == "TableCaption") return ComponentKind::table_caption;
    if (style == "Code" || style == "HTMLPreformatted")
        return ComponentKind::code;
    if (style == "Header") return ComponentKind::page_header;
    if (style == "Footer") return ComponentKind::page_footer;
    if (style == "FootnoteText") return ComponentKind::footnote;
    if (style == "Bibliography") return ComponentKind::bibliography;
    return std::nullopt;
}

const std::regex kListMarker(R"(^\s*(•|-|\d+\.|[a-z]\))\s+)");

std::vector<TextRun> collect_runs(const xml::Node& el) {
    std::vector<TextRun> runs;
    for (const auto& child : el.children) {
        if (child.name.empty()) {
            if (!child.text.empty()) runs.push_back({child.text, 12.0, false, {}});
        } else if (child.name == "r" || child.name == "run") {
            TextRun r;
            r.text = child.inner_text();
            if (const auto* fs = child.attr("font_size"))
                r.font_size_pt = std::stod(*fs);
            if (const auto* b = child.attr("bold")) r.bold = *b == "true";
            runs.push_back(std::move(r));
        }
    }
    return runs;
}

TableGrid build_grid(const xml::Node& table_el) {
    struct RawCell {
        std::string text;
        int colspan, rowspan;
    };
    std::vector<std::vector<RawCell>> rows;
    for (const auto& tr : table_el.children) {
        if (tr.name != "tr" && tr.name != "row") continue;
        std::vector<RawCell> row;
        for (const auto& tc : tr.children) {
            if (tc.name != "tc" && tc.name != "cell" && tc.name != "td")
                continue;
            RawCell c{tc.inner_text(), 1, 1};
            if (const auto* s = tc.attr("colspan"))
                c.colspan = std::max(1, std::stoi(*s));
            if (const auto* s = tc.attr("rowspan"))
                c.rowspan = std::max(1, std::stoi(*s));
            row.push_back(std::move(c));
        }
        rows.push_back(std::move(row));
    }

    TableGrid g;
    g.rows = static_cast<int>(rows.size());
    // column count from span-aware placement
    int cols = 0;
    {
        std::vector<int> pending;  // rowspan carry per column
        for (const auto& row : rows) {
            int c = 0, width = 0;
            for (const auto& cell : row) {
                while (c < (int)pending.size() && pending[c] > 0) ++c;
                c += cell.colspan;
                width = c;
            }
            cols = std::max(cols, width);
            if ((int)pending.size() < cols) pending.resize(cols, 0);
            for (auto& p : pending)
                if (p > 0) --p;
            c = 0;
            for (const auto& cell : row) {
                while (c < (int)pending.size() && pending[c] > 0) ++c;
                for (int k = 0; k < cell.colspan && c + k < cols; ++k)
                    pending[c + k] = cell.rowspan - 1;
                c += cell.colspan;
            }
        }
    }
    g.cols = cols;
    g.cells.assign(size_t(g.rows) * g.cols, {});
    std::vector<std::vector<bool>> occupied(g.rows,
                                            std::vector<bool>(g.cols, false));
    for (int r = 0; r < g.rows; ++r) {
        int c = 0;
        for (const auto& cell : rows[r]) {
            while (c < g.cols && occupied[r][c]) ++c;
            if (c >= g.cols) break;
            g.at(r, c) = {cell.text, cell.colspan, cell.rowspan, false};
            for (int dr = 0; dr < cell.rowspan && r + dr < g.rows; ++dr)
                for (int dc = 0; dc < cell.colspan && c + dc < g.cols; ++dc) {
                    occupied[r + dr][c + dc] = true;
                    if (dr || dc) g.at(r + dr, c + dc).covered = true;
                }
            c += cell.colspan;
        }
    }
    return g;
}

bool has_list_marker(const std::string& text) {
    return std::regex_search(text, kListMarker);
}

}  // namespace

DocumentIR parse_structure(std::string_view markup) {
    std::string body;
    if (markup.size() >= 2 && markup[0] == 'P' && markup[1] == 'K') {
        auto zr = ZipReader::open(markup);
        if (!zr) throw ParseError("unreadable archive");
        std::optional<std::string> x = zr->extract("document.xml");
        if (!x) x = zr->extract("word/document.xml");
        if (!x) throw ParseError("archive has no document.xml");
        body = std::move(*x);
    } else {
        body.assign(markup);
    }

    xml::RepairResult rep;
    xml::Node root;
    try {
        rep = xml::repair_markup(body);
        root = xml::parse_dom(rep.repaired_xml);
    } catch (const xml::RepairError& e) {
        throw ParseError(e.what());
    }

    DocumentIR ir;
    ir.repaired = !rep.actions.empty();
    ir.repair_actions = rep.actions;

    int order = 0;
    for (const auto& el : root.children) {
        if (el.name.empty()) continue;
        if (el.name == "pagebreak") {
            ir.page_breaks.push_back(static_cast<int>(ir.components.size()));
            continue;
        }
        Component c;
        c.source_order = order;
        if (el.name == "table") {
            c.kind = ComponentKind::table;
            c.provenance = Provenance::native_tag;
            c.table_grid = build_grid(el);
        } else if (auto nk = native_kind(el.name); nk && el.name != "p") {
            c.kind = *nk;
            c.provenance = Provenance::native_tag;
            c.runs = collect_runs(el);
            if (c.runs.empty() && !el.inner_text().empty())
                c.runs.push_back({el.inner_text(), 12.0, false, {}});
        } else if (el.name == "p" || el.name == "para") {
            c.kind = ComponentKind::text;
            c.provenance = Provenance::native_tag;
            c.runs = collect_runs(el);
            if (const auto* style = el.attr("style")) {
                if (auto sk = style_kind(*style)) {
                    c.kind = *sk;
                    c.provenance = Provenance::builtin_style;
                }
            }
        } else {
            // unknown markup maps to text
            c.kind = ComponentKind::text;
            c.provenance = Provenance::heuristic;
            if (!el.inner_text().empty())
                c.runs.push_back({el.inner_text(), 12.0, false, {}});
        }
        ir.components.push_back(std::move(c));
        ++order;
    }

    // Heuristic refinement for plain text paragraphs: needs the body median.
    std::vector<double> sizes;
    for (const auto& c : ir.components)
        for (const auto& r : c.runs) sizes.push_back(r.font_size_pt);
    double median = 12.0;
    if (!sizes.empty()) {
        std::sort(sizes.begin(), sizes.end());
        median = sizes[sizes.size() / 2];
    }
    for (auto& c : ir.components) {
        if (c.kind != ComponentKind::text ||
            c.provenance != Provenance::native_tag || c.runs.empty())
            continue;
        double max_fs = 0;
        for (const auto& r : c.runs) max_fs = std::max(max_fs, r.font_size_pt);
        if (max_fs >= 1.5 * median) {
            c.kind = ComponentKind::section_header;
            c.provenance = Provenance::heuristic;
        } else if (has_list_marker(c.runs.front().text)) {
            c.kind = ComponentKind::list_item;
            c.provenance = Provenance::heuristic;
        }
    }
    return ir;
}

DocumentIR inject_colors(const DocumentIR& ir, const ColorPalette& palette) {
    DocumentIR out = ir;
    for (auto& c : out.components) {
        auto color = palette.get(c.kind);
        if (!color) throw PaletteError(c.kind);
        c.fill = *color;
    }
    return out;
}

}  // namespace docpipe
