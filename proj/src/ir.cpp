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

#include "docpipe/ir.hpp"

#include <json.hpp>

namespace docpipe {

using nlohmann::json;

namespace {
constexpr std::pair<ComponentKind, const char*> kKindNames[] = {
    {ComponentKind::text, "text"},
    {ComponentKind::title, "title"},
    {ComponentKind::section_header, "section_header"},
    {ComponentKind::list_item, "list_item"},
    {ComponentKind::table, "table"},
    {ComponentKind::table_cell, "table_cell"},
    {ComponentKind::picture, "picture"},
    {ComponentKind::chart, "chart"},
    {ComponentKind::figure_caption, "figure_caption"},
    {ComponentKind::table_caption, "table_caption"},
    {ComponentKind::formula, "formula"},
    {ComponentKind::code, "code"},
    {ComponentKind::page_header, "page_header"},
    {ComponentKind::page_footer, "page_footer"},
    {ComponentKind::footnote, "footnote"},
    {ComponentKind::bibliography, "bibliography"},
    {ComponentKind::form_tag, "form_tag"},
};
}  // namespace

const char* to_string(ComponentKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "text";
}

std::optional<ComponentKind> kind_from_string(std::string_view s) {
    for (const auto& [kind, name] : kKindNames)
        if (s == name) return kind;
    return std::nullopt;
}

std::string Component::text() const {
    std::string out;
    if (table_grid) {
        for (const auto& c : table_grid->cells) {
            if (c.covered) continue;
            if (!out.empty() && !c.text.empty()) out += ' ';
            out += c.text;
        }
        return out;
    }
    for (const auto& r : runs) out += r.text;
    return out;
}

ColorPalette ColorPalette::standard() {
    // Grid of channel values spaced 48 apart, away from white and black.
    static const uint8_t lv[4] = {48, 96, 160, 208};
    ColorPalette p;
    size_t i = 0;
    for (const auto& [kind, name] : kKindNames) {
        uint8_t r = lv[i % 4], g = lv[(i / 4) % 4], b = lv[(i / 16) % 4];
        p.set(kind, {r, g, b});
        ++i;
    }
    return p;
}

std::optional<RgbColor> ColorPalette::get(ComponentKind k) const {
    auto it = map_.find(k);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<ComponentKind, RgbColor>> ColorPalette::ordered() const {
    return {map_.begin(), map_.end()};
}

std::optional<size_t> ColorPalette::nearest_index(RgbColor c) const {
    std::optional<size_t> best;
    long best_d2 = 0;
    size_t i = 0;
    for (const auto& [kind, pc] : map_) {
        long dr = long(c.r) - pc.r, dg = long(c.g) - pc.g, db = long(c.b) - pc.b;
        long d2 = dr * dr + dg * dg + db * db;
        if (!best || d2 < best_d2) {
            best = i;
            best_d2 = d2;
        }
        ++i;
    }
    return best;
}

namespace {

json run_to_json(const TextRun& r) {
    json j{{"text", r.text}, {"font_size_pt", r.font_size_pt}, {"bold", r.bold}};
    if (r.list_marker) j["list_marker"] = *r.list_marker;
    return j;
}

json component_to_json(const Component& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["provenance"] = c.provenance == Provenance::native_tag ? "native_tag"
                      : c.provenance == Provenance::builtin_style
                          ? "builtin_style"
                          : "heuristic";
    j["source_order"] = c.source_order;
    j["runs"] = json::array();
    for (const auto& r : c.runs) j["runs"].push_back(run_to_json(r));
    if (c.table_grid) {
        json g;
        g["rows"] = c.table_grid->rows;
        g["cols"] = c.table_grid->cols;
        g["cells"] = json::array();
        for (const auto& cell : c.table_grid->cells)
            g["cells"].push_back({{"text", cell.text},
                                  {"colspan", cell.colspan},
                                  {"rowspan", cell.rowspan},
                                  {"covered", cell.covered}});
        j["table_grid"] = g;
    }
    if (c.fill)
        j["fill"] = {c.fill->r, c.fill->g, c.fill->b};
    return j;
}

}  // namespace

std::string ir_to_json(const DocumentIR& ir) {
    json j;
    j["ir_version"] = 1;
    j["components"] = json::array();
    for (const auto& c : ir.components)
        j["components"].push_back(component_to_json(c));
    j["page_breaks"] = ir.page_breaks;
    if (ir.language_hint) j["language_hint"] = *ir.language_hint;
    j["repaired"] = ir.repaired;
    j["repair_actions"] = ir.repair_actions;
    return j.dump(2);
}

DocumentIR ir_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (j.value("ir_version", 0) != 1)
        throw std::runtime_error("unsupported ir_version");
    DocumentIR ir;
    for (const auto& jc : j["components"]) {
        Component c;
        c.kind = kind_from_string(jc.value("kind", "text"))
                     .value_or(ComponentKind::text);
        std::string prov = jc.value("provenance", "native_tag");
        c.provenance = prov == "builtin_style" ? Provenance::builtin_style
                       : prov == "heuristic"   ? Provenance::heuristic
                                               : Provenance::native_tag;
        c.source_order = jc.value("source_order", 0);
        for (const auto& jr : jc["runs"]) {
            TextRun r;
            r.text = jr.value("text", "");
            r.font_size_pt = jr.value("font_size_pt", 12.0);
            r.bold = jr.value("bold", false);
            if (jr.contains("list_marker"))
                r.list_marker = jr["list_marker"].get<std::string>();
            c.runs.push_back(std::move(r));
        }
        if (jc.contains("table_grid")) {
            TableGrid g;
            g.rows = jc["table_grid"].value("rows", 0);
            g.cols = jc["table_grid"].value("cols", 0);
            for (const auto& jcell : jc["table_grid"]["cells"]) {
                TableCell cell;
                cell.text = jcell.value("text", "");
                cell.colspan = jcell.value("colspan", 1);
                cell.rowspan = jcell.value("rowspan", 1);
                cell.covered = jcell.value("covered", false);
                g.cells.push_back(std::move(cell));
            }
            c.table_grid = std::move(g);
        }
        if (jc.contains("fill")) {
            auto f = jc["fill"];
            c.fill = RgbColor{f[0].get<uint8_t>(), f[1].get<uint8_t>(),
                              f[2].get<uint8_t>()};
        }
        ir.components.push_back(std::move(c));
    }
    if (j.contains("page_breaks"))
        ir.page_breaks = j["page_breaks"].get<std::vector<int>>();
    if (j.contains("language_hint"))
        ir.language_hint = j["language_hint"].get<std::string>();
    ir.repaired = j.value("repaired", false);
    if (j.contains("repair_actions"))
        ir.repair_actions = j["repair_actions"].get<std::vector<std::string>>();
    return ir;
}

}  // namespace docpipe
