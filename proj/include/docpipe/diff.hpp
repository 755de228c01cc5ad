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

#include <vector>

#include "docpipe/raster.hpp"

namespace docpipe {

struct ChangeMask {
    int width = 0;
    int height = 0;
    std::vector<int32_t> labels;       // -1 = none, else palette index
    std::vector<float> color_error;    // RGB distance to assigned palette color

    int32_t label(int x, int y) const { return labels[size_t(y) * width + x]; }
};

struct RegionDetection {
    ComponentKind kind = ComponentKind::text;
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // pixel bbox, top-left origin
    int area_px = 0;
    double mean_color_error = 0;
};

struct DriftReport {
    int shift_dx = 0;
    int shift_dy = 0;
    double mismatched_component_fraction = 0;
    bool excluded = false;
};

enum class PageClass { scanned, rendered_text, indeterminate };

// Pixel-wise subtraction: a pixel is labeled iff the max-channel difference
// exceeds the threshold; labels are the nearest palette entry to the
// colorized pixel. Identically colored pixels are never labeled.
ChangeMask diff_pages(const RasterPage& base, const RasterPage& colorized,
                      const ColorPalette& palette, int threshold = 12);

// 8-connected components per label; components below min_area are dropped.
// Output sorted by (y1, x1).
std::vector<RegionDetection> extract_regions(const ChangeMask& mask,
                                             const ColorPalette& palette,
                                             int min_area = 9);

// Exhaustive integer registration over dx,dy in [-3,3], then per-region
// agreement; a region mismatches when under 90% of its pixels agree.
// Excluded when more than 5% of regions mismatch.
DriftReport detect_drift(const RasterPage& base_a, const RasterPage& base_b,
                         const std::vector<RegionDetection>& regions);

// Shannon entropy of the 256-bin grayscale histogram, in bits.
double page_entropy(const RasterPage& page);

PageClass classify_scanned(const RasterPage& page,
                           double scanned_threshold = 6.5,
                           double rendered_threshold = 4.5);

}  // namespace docpipe
