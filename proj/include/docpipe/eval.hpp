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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "docpipe/doctag.hpp"

namespace docpipe {

struct PageScores {
    std::string page_id;
    double text_edit = 1.0;        // [0,1], lower is better
    double read_order_edit = 0.0;  // [0,1]
    std::optional<double> table_teds;    // [0,100], absent when no tables
    std::optional<double> formula_edit;  // [0,1], absent when no formulas
    std::optional<double> chart_score;   // [0,100]
    std::optional<double> cdm;           // [0,100]
    std::map<std::string, std::string> attributes;
};

struct Aggregate {
    int pages = 0;
    double text_edit = 0;
    double read_order_edit = 0;
    std::optional<double> table_teds;
    std::optional<double> formula_edit;
    double overall = 0;
};

struct EvalReport {
    std::vector<PageScores> per_page;
    Aggregate total;
    std::map<std::string, Aggregate> by_attribute;  // "key=value" slices
};

// Prediction segments pulled out of model Markdown: pipe tables, $...$
// formulas, and plain paragraphs split on blank lines.
struct PredSegments {
    std::vector<std::string> paragraphs;
    std::vector<std::string> tables;    // markdown pipe tables, verbatim
    std::vector<std::string> formulas;  // without delimiters
};

PredSegments split_prediction(const std::string& markdown);

// Markdown pipe table to the HTML form the tree scorer reads.
std::string markdown_table_to_html(const std::string& md_table);

PageScores evaluate_page(const std::string& pred_markdown,
                         const DocTagPage& gt,
                         const std::string& page_id = {});

EvalReport build_report(std::vector<PageScores> pages);

std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

}  // namespace docpipe
