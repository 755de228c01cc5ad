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

#include <string>
#include <vector>

#include "docpipe/raster.hpp"

namespace docpipe {

struct PtRect {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // top-left origin, points

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() > 0 && height() > 0
                                     ? width() * height()
                                     : 0.0; }
};

struct GtComponent {
    int page = 0;
    int component_index = 0;  // index into the source IR
    ComponentKind kind = ComponentKind::text;
    PtRect box_pt;
};

struct GtWord {
    int page = 0;
    std::string text;
    PtRect box_pt;
    int order = 0;            // extraction order within the page
    int component_index = 0;
};

struct RenderResult {
    std::vector<RasterPage> pages;
    std::vector<GtComponent> components;
    std::vector<GtWord> words;
};

// Deterministic vertical-flow layout on US-Letter pages: 54pt margins, 6pt
// gaps, words drawn as solid dark-gray blocks of height = font size, tables
// as grids with interior rules. With a palette, each component's background
// is filled with palette[kind]. Identical inputs give byte-identical
// rasters; ground-truth component and word boxes are emitted alongside.
RenderResult toy_render(const DocumentIR& ir, int dpi,
                        const ColorPalette* colorize = nullptr);

}  // namespace docpipe
