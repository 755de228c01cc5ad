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

#include "docpipe/align.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace docpipe {
namespace {

// scripts written without word separators
const std::set<std::string> kNoSpaceLanguages{"zh", "ja", "th", "km", "my"};

double intersection_area(const PtRect& a, const PtRect& b) {
    double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    return w > 0 && h > 0 ? w * h : 0.0;
}

}  // namespace

AnnotatedPage assign_words(const std::vector<WordBox>& words,
                           const std::vector<RegionPt>& regions,
                           double page_w_pt, double page_h_pt,
                           double containment_min,
                           const std::optional<std::string>& language) {
    AnnotatedPage page;
    page.page_w_pt = page_w_pt;
    page.page_h_pt = page_h_pt;
    page.language = language;

    // stable component order independent of the regions input permutation
    std::vector<size_t> region_order(regions.size());
    std::iota(region_order.begin(), region_order.end(), 0);
    std::stable_sort(region_order.begin(), region_order.end(),
                     [&](size_t a, size_t b) {
                         const auto& ra = regions[a].bbox_pt;
                         const auto& rb = regions[b].bbox_pt;
                         return std::tie(ra.y1, ra.x1, ra.y2, ra.x2) <
                                std::tie(rb.y1, rb.x1, rb.y2, rb.x2);
                     });

    std::vector<std::vector<const WordBox*>> assigned(regions.size());
    for (const auto& w : words) {
        if (w.bbox_pt.area() <= 0) {
            ++page.degenerate_word_count;
            continue;
        }
        std::optional<size_t> best;
        for (size_t oi = 0; oi < region_order.size(); ++oi) {
            size_t ri = region_order[oi];
            double containment =
                intersection_area(w.bbox_pt, regions[ri].bbox_pt) /
                w.bbox_pt.area();
            if (containment < containment_min) continue;
            if (!best) {
                best = ri;
                continue;
            }
            const RegionPt& cur = regions[*best];
            const RegionPt& cand = regions[ri];
            if (cand.confidence > cur.confidence ||
                (cand.confidence == cur.confidence &&
                 cand.bbox_pt.area() < cur.bbox_pt.area()))
                best = ri;
        }
        if (best)
            assigned[*best].push_back(&w);
        else
            page.unassigned_words.push_back(w);
    }

    const char* sep =
        language && kNoSpaceLanguages.count(*language) ? "" : " ";
    for (size_t oi = 0; oi < region_order.size(); ++oi) {
        size_t ri = region_order[oi];
        auto& ws = assigned[ri];
        std::sort(ws.begin(), ws.end(), [](const WordBox* a, const WordBox* b) {
            return a->extraction_order < b->extraction_order;
        });
        PageComponent pc;
        pc.kind = regions[ri].kind;
        pc.bbox_pt = regions[ri].bbox_pt;
        pc.provenance_confidence = regions[ri].confidence;
        pc.source_order = regions[ri].source_order;
        pc.table_grid = regions[ri].table_grid;
        for (size_t i = 0; i < ws.size(); ++i) {
            if (i) pc.text += sep;
            pc.text += ws[i]->text;
        }
        page.components.push_back(std::move(pc));
    }
    rank_components(page);
    return page;
}

namespace {

void xy_cut(const std::vector<PageComponent>& comps, std::vector<size_t> idx,
            bool horizontal, std::vector<size_t>& out) {
    if (idx.size() <= 1) {
        out.insert(out.end(), idx.begin(), idx.end());
        return;
    }
    // find the widest full-width whitespace gap along the cut axis
    struct Span {
        double lo, hi;
        size_t i;
    };
    std::vector<Span> spans;
    for (size_t i : idx) {
        const PtRect& b = comps[i].bbox_pt;
        spans.push_back(horizontal ? Span{b.y1, b.y2, i} : Span{b.x1, b.x2, i});
    }
    std::sort(spans.begin(), spans.end(),
              [](const Span& a, const Span& b) { return a.lo < b.lo; });
    double best_gap = 0, cut_at = 0;
    double reach = spans.front().hi;
    for (size_t i = 1; i < spans.size(); ++i) {
        if (spans[i].lo > reach && spans[i].lo - reach > best_gap) {
            best_gap = spans[i].lo - reach;
            cut_at = (reach + spans[i].lo) / 2;
        }
        reach = std::max(reach, spans[i].hi);
    }
    if (best_gap <= 0) {
        if (!horizontal) {
            // no column gap; fall through to row splitting
            xy_cut(comps, std::move(idx), true, out);
        } else {
            // atomic block: top-to-bottom, then left-to-right
            std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
                const auto& ba = comps[a].bbox_pt;
                const auto& bb = comps[b].bbox_pt;
                return std::tie(ba.y1, ba.x1) < std::tie(bb.y1, bb.x1);
            });
            out.insert(out.end(), idx.begin(), idx.end());
        }
        return;
    }
    std::vector<size_t> first, second;
    for (size_t i : idx) {
        double mid = horizontal
                         ? (comps[i].bbox_pt.y1 + comps[i].bbox_pt.y2) / 2
                         : (comps[i].bbox_pt.x1 + comps[i].bbox_pt.x2) / 2;
        (mid < cut_at ? first : second).push_back(i);
    }
    xy_cut(comps, std::move(first), !horizontal, out);
    xy_cut(comps, std::move(second), !horizontal, out);
}

}  // namespace

std::vector<int> reading_order(const std::vector<PageComponent>& components) {
    std::vector<int> ranks(components.size(), 0);
    bool have_source = !components.empty();
    for (const auto& c : components)
        if (!c.source_order) have_source = false;

    if (have_source) {
        std::vector<size_t> idx(components.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            return *components[a].source_order < *components[b].source_order;
        });
        for (size_t r = 0; r < idx.size(); ++r) ranks[idx[r]] = int(r);
        return ranks;
    }

    // column gaps cut before row gaps so multi-column pages read in
    // column-major order
    std::vector<size_t> idx(components.size()), ordered;
    std::iota(idx.begin(), idx.end(), 0);
    xy_cut(components, std::move(idx), false, ordered);
    for (size_t r = 0; r < ordered.size(); ++r) ranks[ordered[r]] = int(r);
    return ranks;
}

void rank_components(AnnotatedPage& page) {
    std::vector<int> ranks = reading_order(page.components);
    for (size_t i = 0; i < ranks.size(); ++i)
        page.components[i].reading_rank = ranks[i];
    std::sort(page.components.begin(), page.components.end(),
              [](const PageComponent& a, const PageComponent& b) {
                  return a.reading_rank < b.reading_rank;
              });
}

}  // namespace docpipe
