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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace docpipe {

// Structural taxonomy. Core set; the string round-trip keeps room for the
// longer tail of kinds without code changes.
enum class ComponentKind {
    text,
    title,
    section_header,
    list_item,
    table,
    table_cell,
    picture,
    chart,
    figure_caption,
    table_caption,
    formula,
    code,
    page_header,
    page_footer,
    footnote,
    bibliography,
    form_tag,
};

const char* to_string(ComponentKind k);
std::optional<ComponentKind> kind_from_string(std::string_view s);

enum class Provenance { native_tag, builtin_style, heuristic };

// Fixed confidences; quality-filter's reliability split depends on them.
inline double confidence(Provenance p) {
    switch (p) {
        case Provenance::native_tag: return 1.0;
        case Provenance::builtin_style: return 0.8;
        case Provenance::heuristic: return 0.5;
    }
    return 0.0;
}

struct TextRun {
    std::string text;
    double font_size_pt = 12.0;
    bool bold = false;
    std::optional<std::string> list_marker;
};

struct TableCell {
    std::string text;
    int colspan = 1;
    int rowspan = 1;
    bool covered = false;  // shadowed by a span from another cell
};

struct TableGrid {
    int rows = 0;
    int cols = 0;
    std::vector<TableCell> cells;  // row-major, rows*cols

    TableCell& at(int r, int c) { return cells[r * cols + c]; }
    const TableCell& at(int r, int c) const { return cells[r * cols + c]; }
};

struct RgbColor {
    uint8_t r = 0, g = 0, b = 0;
    bool operator==(const RgbColor&) const = default;
};

struct Component {
    ComponentKind kind = ComponentKind::text;
    Provenance provenance = Provenance::native_tag;
    std::vector<TextRun> runs;
    std::optional<TableGrid> table_grid;  // present iff kind == table
    int source_order = 0;
    std::optional<RgbColor> fill;  // set by inject_colors

    std::string text() const;
};

struct DocumentIR {
    std::vector<Component> components;
    std::vector<int> page_breaks;  // component indices after which a break occurs
    std::optional<std::string> language_hint;
    bool repaired = false;
    std::vector<std::string> repair_actions;
};

class ColorPalette {
public:
    // Default palette covering every core kind; injective, >=32 channel
    // separation pairwise and against pure white/black.
    static ColorPalette standard();

    void set(ComponentKind k, RgbColor c) { map_[k] = c; }
    std::optional<RgbColor> get(ComponentKind k) const;
    const std::map<ComponentKind, RgbColor>& colors() const { return map_; }

    // Nearest palette entry by Euclidean RGB distance; ties by lowest index.
    std::optional<size_t> nearest_index(RgbColor c) const;
    std::vector<std::pair<ComponentKind, RgbColor>> ordered() const;

private:
    std::map<ComponentKind, RgbColor> map_;
};

std::string ir_to_json(const DocumentIR& ir);
DocumentIR ir_from_json(const std::string& json_text);

}  // namespace docpipe
