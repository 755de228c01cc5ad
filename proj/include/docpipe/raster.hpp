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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "docpipe/ir.hpp"

namespace docpipe {

struct RasterPage {
    int width_px = 0;
    int height_px = 0;
    int dpi = 72;
    double page_w_pt = 0;
    double page_h_pt = 0;
    std::vector<uint8_t> rgb;  // row-major, 3 bytes per pixel

    static RasterPage blank(double w_pt, double h_pt, int dpi);

    RgbColor at(int x, int y) const {
        size_t i = (size_t(y) * width_px + x) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
    void set(int x, int y, RgbColor c) {
        if (x < 0 || y < 0 || x >= width_px || y >= height_px) return;
        size_t i = (size_t(y) * width_px + x) * 3;
        rgb[i] = c.r;
        rgb[i + 1] = c.g;
        rgb[i + 2] = c.b;
    }
    void fill_rect(int x1, int y1, int x2, int y2, RgbColor c);
};

// Lossless PNG round trip; the dpi is carried in the pHYs chunk.
void write_png(const std::filesystem::path& path, const RasterPage& page);
RasterPage read_png(const std::filesystem::path& path);

}  // namespace docpipe
