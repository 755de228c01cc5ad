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

#include "docpipe/raster.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace docpipe {

RasterPage RasterPage::blank(double w_pt, double h_pt, int dpi) {
    if (w_pt <= 0 || h_pt <= 0) throw std::runtime_error("zero-size page");
    RasterPage p;
    p.page_w_pt = w_pt;
    p.page_h_pt = h_pt;
    p.dpi = dpi;
    p.width_px = static_cast<int>(std::lround(w_pt * dpi / 72.0));
    p.height_px = static_cast<int>(std::lround(h_pt * dpi / 72.0));
    p.rgb.assign(size_t(p.width_px) * p.height_px * 3, 255);
    return p;
}

void RasterPage::fill_rect(int x1, int y1, int x2, int y2, RgbColor c) {
    x1 = std::max(0, x1);
    y1 = std::max(0, y1);
    x2 = std::min(width_px, x2);
    y2 = std::min(height_px, y2);
    for (int y = y1; y < y2; ++y)
        for (int x = x1; x < x2; ++x) set(x, y, c);
}

void write_png(const std::filesystem::path& path, const RasterPage& page) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path.string());
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("png write failed: " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, page.width_px, page.height_px, 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_uint_32 ppm = static_cast<png_uint_32>(page.dpi / 0.0254);
    png_set_pHYs(png, info, ppm, ppm, PNG_RESOLUTION_METER);
    png_write_info(png, info);
    for (int y = 0; y < page.height_px; ++y)
        png_write_row(png, const_cast<png_bytep>(
                               page.rgb.data() + size_t(y) * page.width_px * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

RasterPage read_png(const std::filesystem::path& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open " + path.string());
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw std::runtime_error("png read failed: " + path.string());
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    RasterPage page;
    page.width_px = png_get_image_width(png, info);
    page.height_px = png_get_image_height(png, info);
    png_uint_32 resx = 0, resy = 0;
    int unit = 0;
    if (png_get_pHYs(png, info, &resx, &resy, &unit) &&
        unit == PNG_RESOLUTION_METER && resx > 0)
        page.dpi = static_cast<int>(std::lround(resx * 0.0254));
    page.page_w_pt = page.width_px * 72.0 / page.dpi;
    page.page_h_pt = page.height_px * 72.0 / page.dpi;
    page.rgb.resize(size_t(page.width_px) * page.height_px * 3);
    for (int y = 0; y < page.height_px; ++y)
        png_read_row(png, page.rgb.data() + size_t(y) * page.width_px * 3,
                     nullptr);
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return page;
}

}  // namespace docpipe
