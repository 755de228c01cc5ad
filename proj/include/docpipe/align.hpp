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

#include <optional>
#include <string>
#include <vector>

#include "docpipe/render.hpp"

namespace docpipe {

struct WordBox {
    std::string text;
    PtRect bbox_pt;
    int extraction_order = 0;
};

struct PageComponent {
    ComponentKind kind = ComponentKind::text;
    PtRect bbox_pt;
    std::string text;
    double provenance_confidence = 1.0;
    int reading_rank = 0;
    std::optional<int> source_order;
    std::optional<TableGrid> table_grid;
};

struct AnnotatedPage {
    std::vector<PageComponent> components;  // ordered by reading_rank
    double page_w_pt = 612;
    double page_h_pt = 792;
    std::optional<std::string> language;
    std::vector<WordBox> unassigned_words;
    int degenerate_word_count = 0;
};

struct RegionPt {
    ComponentKind kind = ComponentKind::text;
    PtRect bbox_pt;
    double confidence = 1.0;
    std::optional<int> source_order;
    std::optional<TableGrid> table_grid;
};

// Containment assignment: a word is a candidate for a region when
// area(word ∩ region) / area(word) >= containment_min; the highest
// provenance confidence wins, ties by smaller region area. Words inside a
// component concatenate in extraction order.
AnnotatedPage assign_words(const std::vector<WordBox>& words,
                           const std::vector<RegionPt>& regions,
                           double page_w_pt, double page_h_pt,
                           double containment_min = 0.7,
                           const std::optional<std::string>& language = {});

// Ranks from source order when available, otherwise recursive XY-cut on the
// widest full-width whitespace gap (horizontal first).
std::vector<int> reading_order(const std::vector<PageComponent>& components);

// Applies reading_order and re-sorts the page's components by rank.
void rank_components(AnnotatedPage& page);

}  // namespace docpipe
