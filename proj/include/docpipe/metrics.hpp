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

namespace docpipe {

// Unit-cost edit distance over Unicode codepoints.
int levenshtein(const std::string& a, const std::string& b);

// 1 - levenshtein/max(|a|,|b|); both empty -> 1.0.
double ned(const std::string& a, const std::string& b);

// Ordered labelled tree for table similarity scoring.
struct DomTree {
    std::string tag;
    std::string text;  // leaf cell text
    std::vector<DomTree> children;

    int size() const;
};

// Lenient reader: markup is repaired before parsing. nullopt when the
// input has no usable table structure.
std::optional<DomTree> parse_table_html(const std::string& html);

// Tree-edit similarity in [0,100]. Relabel costs 1 when tags differ;
// equal-tag leaves cost 1-NED of their texts unless structure_only.
// Unparseable markup scores 0.
double teds(const std::string& pred_html, const std::string& gt_html,
            bool structure_only = false);
double teds_trees(const DomTree& pred, const DomTree& gt,
                  bool structure_only = false);

struct CharSample {
    char32_t codepoint = 0;
    std::optional<std::pair<double, double>> center;
};

// Character detection F1 in [0,100]. Pairs must agree on codepoint and,
// when both sides carry positions, lie within epsilon of each other.
double cdm(const std::vector<CharSample>& pred,
           const std::vector<CharSample>& gt, double epsilon = 0.0);

double chart_score(const std::string& pred_html, const std::string& gt_html);

struct SegmentMatch {
    std::vector<int> gt_indices;  // adjacent, ascending
    int pred_index = -1;
    double ned = 0;
};

// Two-stage fuzzy alignment of prediction segments to GT segments:
// high-confidence 1:1 pairs first, then windows of adjacent unmatched GT
// segments (up to 5) merged to recover split predictions.
std::vector<SegmentMatch> adjacency_match(
    const std::vector<std::string>& pred_segments,
    const std::vector<std::string>& gt_segments,
    double direct_threshold = 0.9);

// ((1 - text_edit) * 100 + table_teds) / 2; throws on out-of-range input.
double overall_score(double text_edit, double table_teds);

// Replaces common LaTeX commands with their Unicode equivalents and
// collapses whitespace. The substitution table is in docs.
std::string latex_to_unicode(const std::string& s);

}  // namespace docpipe
