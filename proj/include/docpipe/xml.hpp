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

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace docpipe::xml {

struct Attr {
    std::string name;
    std::string value;
};

struct Token {
    enum class Kind { start, end, text } kind;
    std::string name;         // start/end
    std::vector<Attr> attrs;  // start
    bool self_closing = false;
    std::string text;         // text
};

class RepairError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lexes markup into tags and text, decoding entities. nullopt when the
// input cannot be tokenized at all (dangling '<', malformed tag).
std::optional<std::vector<Token>> tokenize(const std::string& markup);

struct RepairResult {
    std::string repaired_xml;
    std::vector<std::string> actions;
};

// Tag balancing, ID deduplication, namespace normalization. Output is
// well-formed; repairing repaired output yields no actions. Throws
// RepairError when the input does not tokenize.
RepairResult repair_markup(const std::string& markup);

struct Node {
    std::string name;  // empty for text nodes
    std::string text;
    std::vector<Attr> attrs;
    std::vector<Node> children;

    const std::string* attr(std::string_view n) const;
    // Concatenated text of this subtree.
    std::string inner_text() const;
};

// Parses well-formed markup (run repair_markup first if unsure) into a
// single-rooted tree. Throws RepairError on failure.
Node parse_dom(const std::string& markup);

std::string escape_text(std::string_view s);

}  // namespace docpipe::xml
