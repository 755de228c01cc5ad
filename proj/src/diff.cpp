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

#include "docpipe/diff.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace docpipe {

ChangeMask diff_pages(const RasterPage& base, const RasterPage& colorized,
                      const ColorPalette& palette, int threshold) {
    if (base.width_px != colorized.width_px ||
        base.height_px != colorized.height_px || base.dpi != colorized.dpi)
        throw std::runtime_error("diff_pages: dimension mismatch");

    auto entries = palette.ordered();
    ChangeMask m;
    m.width = base.width_px;
    m.height = base.height_px;
    m.labels.assign(size_t(m.width) * m.height, -1);
    m.color_error.assign(size_t(m.width) * m.height, 0.f);

    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            RgbColor a = base.at(x, y), b = colorized.at(x, y);
            int d = std::max({std::abs(int(a.r) - b.r), std::abs(int(a.g) - b.g),
                              std::abs(int(a.b) - b.b)});
            if (d <= threshold) continue;
            auto idx = palette.nearest_index(b);
            if (!idx) continue;
            size_t i = size_t(y) * m.width + x;
            m.labels[i] = static_cast<int32_t>(*idx);
            const RgbColor pc = entries[*idx].second;
            double dr = double(b.r) - pc.r, dg = double(b.g) - pc.g,
                   db = double(b.b) - pc.b;
            m.color_error[i] =
                static_cast<float>(std::sqrt(dr * dr + dg * dg + db * db));
        }
    }
    return m;
}

std::vector<RegionDetection> extract_regions(const ChangeMask& mask,
                                             const ColorPalette& palette,
                                             int min_area) {
    auto entries = palette.ordered();
    std::vector<RegionDetection> out;
    std::vector<bool> seen(mask.labels.size(), false);

    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            size_t start = size_t(y) * mask.width + x;
            if (seen[start] || mask.labels[start] < 0) continue;
            int32_t label = mask.labels[start];

            RegionDetection det;
            det.x1 = det.x2 = x;
            det.y1 = det.y2 = y;
            double err_sum = 0;
            std::deque<std::pair<int, int>> queue{{x, y}};
            seen[start] = true;
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                det.x1 = std::min(det.x1, cx);
                det.y1 = std::min(det.y1, cy);
                det.x2 = std::max(det.x2, cx);
                det.y2 = std::max(det.y2, cy);
                ++det.area_px;
                err_sum += mask.color_error[size_t(cy) * mask.width + cx];
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= mask.width ||
                            ny >= mask.height)
                            continue;
                        size_t ni = size_t(ny) * mask.width + nx;
                        if (seen[ni] || mask.labels[ni] != label) continue;
                        seen[ni] = true;
                        queue.emplace_back(nx, ny);
                    }
                }
            }
            if (det.area_px < min_area) continue;
            det.kind = entries[label].first;
            det.mean_color_error = err_sum / det.area_px;
            ++det.x2;  // half-open bbox
            ++det.y2;
            out.push_back(det);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.y1, a.x1) < std::tie(b.y1, b.x1);
    });
    return out;
}

namespace {
bool same_px(const RasterPage& a, const RasterPage& b, int ax, int ay, int bx,
             int by) {
    RgbColor ca = a.at(ax, ay), cb = b.at(bx, by);
    return ca == cb;
}
}  // namespace

DriftReport detect_drift(const RasterPage& base_a, const RasterPage& base_b,
                         const std::vector<RegionDetection>& regions) {
    if (base_a.width_px != base_b.width_px ||
        base_a.height_px != base_b.height_px)
        throw std::runtime_error("detect_drift: dimension mismatch");

    DriftReport rep;
    const int W = base_a.width_px, H = base_a.height_px;
    // coarse sampling keeps the exhaustive search cheap on large pages
    const int step = std::max(1, std::min(W, H) / 256);
    double best = -1;
    for (int dy = -3; dy <= 3; ++dy) {
        for (int dx = -3; dx <= 3; ++dx) {
            long agree = 0, total = 0;
            for (int y = std::max(0, -dy); y < H - std::max(0, dy); y += step) {
                for (int x = std::max(0, -dx); x < W - std::max(0, dx);
                     x += step) {
                    ++total;
                    if (same_px(base_a, base_b, x, y, x + dx, y + dy)) ++agree;
                }
            }
            // fraction, not count: the comparable domain shrinks with |d|
            double frac = total ? double(agree) / total : 0;
            if (frac > best + 1e-12 ||
                (frac > best - 1e-12 && std::abs(dx) + std::abs(dy) <
                                            std::abs(rep.shift_dx) +
                                                std::abs(rep.shift_dy))) {
                best = frac;
                rep.shift_dx = dx;
                rep.shift_dy = dy;
            }
        }
    }

    int mismatched = 0;
    for (const auto& r : regions) {
        long total = 0, agree = 0;
        for (int y = r.y1; y < r.y2; ++y) {
            for (int x = r.x1; x < r.x2; ++x) {
                int bx = x + rep.shift_dx, by = y + rep.shift_dy;
                if (bx < 0 || by < 0 || bx >= W || by >= H) continue;
                ++total;
                if (same_px(base_a, base_b, x, y, bx, by)) ++agree;
            }
        }
        if (total == 0 || double(agree) / total < 0.90) ++mismatched;
    }
    if (!regions.empty())
        rep.mismatched_component_fraction = double(mismatched) / regions.size();
    rep.excluded = rep.mismatched_component_fraction > 0.05;
    return rep;
}

double page_entropy(const RasterPage& page) {
    std::array<uint64_t, 256> hist{};
    for (int y = 0; y < page.height_px; ++y) {
        for (int x = 0; x < page.width_px; ++x) {
            RgbColor c = page.at(x, y);
            int gray = static_cast<int>(
                std::lround(0.299 * c.r + 0.587 * c.g + 0.114 * c.b));
            ++hist[std::clamp(gray, 0, 255)];
        }
    }
    double total = double(page.width_px) * page.height_px;
    double h = 0;
    for (uint64_t n : hist) {
        if (!n) continue;
        double p = n / total;
        h -= p * std::log2(p);
    }
    return h;
}

PageClass classify_scanned(const RasterPage& page, double scanned_threshold,
                           double rendered_threshold) {
    double h = page_entropy(page);
    if (h > scanned_threshold) return PageClass::scanned;
    if (h < rendered_threshold) return PageClass::rendered_text;
    return PageClass::indeterminate;
}

}  // namespace docpipe
