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

#include <stdexcept>
#include <string_view>

#include "docpipe/ir.hpp"

namespace docpipe {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PaletteError : public std::runtime_error {
public:
    explicit PaletteError(ComponentKind k)
        : std::runtime_error(std::string("palette missing kind: ") +
                             to_string(k)),
          kind(k) {}
    ComponentKind kind;
};

// Recovers a DocumentIR from a ZIP-packaged document body (or bare markup).
// Kind assignment: native element tags, then built-in style names, then
// heuristics (font size >= 1.5x body median -> section_header; list-marker
// prefix -> list_item). Malformed markup goes through repair first and the
// IR is flagged as repaired.
DocumentIR parse_structure(std::string_view markup);

// Copy of ir where every component carries palette[kind] as background fill.
// Text content untouched. Throws PaletteError when a kind is not covered.
DocumentIR inject_colors(const DocumentIR& ir, const ColorPalette& palette);

}  // namespace docpipe
