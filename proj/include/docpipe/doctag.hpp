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
#include <stdexcept>
#include <string>
#include <vector>

#include "docpipe/align.hpp"

namespace docpipe {

struct DocTagElement {
    std::string tag;               // ComponentKind name
    std::array<int, 4> loc{};      // x1,y1,x2,y2 in thousandths of page size
    std::string content;

    bool operator==(const DocTagElement&) const = default;
};

struct DocTagPage {
    std::vector<DocTagElement> elements;  // ordered by reading rank
    double page_w_pt = 612;
    double page_h_pt = 792;
    std::vector<std::string> warnings;
};

class DocTagParseError : public std::runtime_error {
public:
    DocTagParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
          line(line) {}
    int line;
};

// floor(1000 * v / page_dim), clamped to [0, 999].
int quantize_loc(double v_pt, double page_dim_pt);

DocTagPage to_doctag(const AnnotatedPage& page);

std::string serialize_doctag(const DocTagPage& page);
std::string serialize_doctag(const AnnotatedPage& page);

// Inverse of serialize up to quantization. Unknown tags map to text with a
// warning; structural problems raise DocTagParseError with a line number.
DocTagPage parse_doctag(const std::string& s);

enum class ExportFormat { json, markdown, html };

std::string export_page(const DocTagPage& page, ExportFormat format);

// Table cell grammar used inside table element content:
//   row (' || ' row)*, row = cell (' | ' cell)*, cell = ['{RxC}'] text,
//   covered cells are '{void}'.
std::string table_content(const TableGrid& grid);
TableGrid parse_table_content(const std::string& content);

std::string escape_content(std::string_view s);
std::string unescape_content(std::string_view s);

}  // namespace docpipe
