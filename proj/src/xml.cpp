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

#include "docpipe/xml.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "docpipe/utf8.hpp"

namespace docpipe::xml {
namespace {

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}
bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '-' || c == '.';
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '&') {
            size_t semi = s.find(';', i);
            if (semi != std::string_view::npos && semi - i <= 10) {
                std::string_view ent = s.substr(i + 1, semi - i - 1);
                if (ent == "lt") out += '<';
                else if (ent == "gt") out += '>';
                else if (ent == "amp") out += '&';
                else if (ent == "quot") out += '"';
                else if (ent == "apos") out += '\'';
                else if (ent.size() > 1 && ent[0] == '#') {
                    char32_t cp = 0;
                    bool hex = ent[1] == 'x' || ent[1] == 'X';
                    for (size_t k = hex ? 2 : 1; k < ent.size(); ++k) {
                        char c = ent[k];
                        int d = std::isdigit((unsigned char)c) ? c - '0'
                                : std::isxdigit((unsigned char)c)
                                    ? std::tolower(c) - 'a' + 10
                                    : -1;
                        if (d < 0 || (!hex && d > 9)) { cp = 0xFFFD; break; }
                        cp = cp * (hex ? 16 : 10) + d;
                    }
                    utf8::append(out, cp);
                } else {
                    out += s.substr(i, semi - i + 1);
                }
                i = semi + 1;
                continue;
            }
        }
        out += s[i++];
    }
    return out;
}

}  // namespace

std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

static std::string escape_attr(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

std::optional<std::vector<Token>> tokenize(const std::string& markup) {
    std::vector<Token> out;
    size_t i = 0;
    const size_t n = markup.size();
    while (i < n) {
        if (markup[i] != '<') {
            size_t lt = markup.find('<', i);
            if (lt == std::string::npos) lt = n;
            std::string raw = markup.substr(i, lt - i);
            Token t;
            t.kind = Token::Kind::text;
            t.text = decode_entities(raw);
            out.push_back(std::move(t));
            i = lt;
            continue;
        }
        // comments and processing instructions are skipped
        if (markup.compare(i, 4, "<!--") == 0) {
            size_t end = markup.find("-->", i + 4);
            if (end == std::string::npos) return std::nullopt;
            i = end + 3;
            continue;
        }
        if (i + 1 < n && markup[i + 1] == '?') {
            size_t end = markup.find("?>", i + 2);
            if (end == std::string::npos) return std::nullopt;
            i = end + 2;
            continue;
        }
        if (i + 1 < n && markup[i + 1] == '!') {  // doctype etc.
            size_t end = markup.find('>', i);
            if (end == std::string::npos) return std::nullopt;
            i = end + 1;
            continue;
        }
        size_t gt = markup.find('>', i);
        if (gt == std::string::npos) return std::nullopt;
        std::string inner = markup.substr(i + 1, gt - i - 1);
        i = gt + 1;

        Token t;
        if (!inner.empty() && inner[0] == '/') {
            t.kind = Token::Kind::end;
            size_t p = 1;
            while (p < inner.size() && std::isspace((unsigned char)inner[p])) ++p;
            size_t s = p;
            while (p < inner.size() && is_name_char(inner[p])) ++p;
            if (p == s) return std::nullopt;
            t.name = inner.substr(s, p - s);
            out.push_back(std::move(t));
            continue;
        }
        t.kind = Token::Kind::start;
        if (!inner.empty() && inner.back() == '/') {
            t.self_closing = true;
            inner.pop_back();
        }
        size_t p = 0;
        if (p >= inner.size() || !is_name_start(inner[p])) return std::nullopt;
        size_t s = p;
        while (p < inner.size() && is_name_char(inner[p])) ++p;
        t.name = inner.substr(s, p - s);
        // attributes
        while (p < inner.size()) {
            while (p < inner.size() && std::isspace((unsigned char)inner[p])) ++p;
            if (p >= inner.size()) break;
            if (!is_name_start(inner[p])) return std::nullopt;
            size_t as = p;
            while (p < inner.size() && is_name_char(inner[p])) ++p;
            Attr a;
            a.name = inner.substr(as, p - as);
            while (p < inner.size() && std::isspace((unsigned char)inner[p])) ++p;
            if (p < inner.size() && inner[p] == '=') {
                ++p;
                while (p < inner.size() && std::isspace((unsigned char)inner[p]))
                    ++p;
                if (p < inner.size() && (inner[p] == '"' || inner[p] == '\'')) {
                    char q = inner[p++];
                    size_t vs = p;
                    size_t ve = inner.find(q, vs);
                    if (ve == std::string::npos) return std::nullopt;
                    a.value = decode_entities(inner.substr(vs, ve - vs));
                    p = ve + 1;
                } else {
                    size_t vs = p;
                    while (p < inner.size() &&
                           !std::isspace((unsigned char)inner[p]))
                        ++p;
                    a.value = decode_entities(inner.substr(vs, p - vs));
                }
            }
            t.attrs.push_back(std::move(a));
        }
        out.push_back(std::move(t));
    }
    return out;
}

namespace {

std::string serialize(const std::vector<Token>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        switch (t.kind) {
            case Token::Kind::text:
                out += escape_text(t.text);
                break;
            case Token::Kind::start:
                out += '<';
                out += t.name;
                for (const auto& a : t.attrs) {
                    out += ' ';
                    out += a.name;
                    out += "=\"";
                    out += escape_attr(a.value);
                    out += '"';
                }
                out += t.self_closing ? "/>" : ">";
                break;
            case Token::Kind::end:
                out += "</";
                out += t.name;
                out += '>';
                break;
        }
    }
    return out;
}

}  // namespace

RepairResult repair_markup(const std::string& markup) {
    auto toks = tokenize(markup);
    if (!toks) throw RepairError("untokenizable markup");
    RepairResult res;
    std::vector<Token> balanced;
    std::vector<std::string> stack;

    auto close_top = [&](const char* action_prefix) {
        Token t;
        t.kind = Token::Kind::end;
        t.name = stack.back();
        balanced.push_back(t);
        res.actions.push_back(std::string(action_prefix) + stack.back());
        stack.pop_back();
    };

    for (auto& t : *toks) {
        if (t.kind == Token::Kind::start) {
            balanced.push_back(t);
            if (!t.self_closing) stack.push_back(t.name);
        } else if (t.kind == Token::Kind::end) {
            auto it = std::find(stack.rbegin(), stack.rend(), t.name);
            if (it == stack.rend()) {
                res.actions.push_back("dropped_end:" + t.name);
                continue;
            }
            // close unclosed children at enclosing-scope end
            while (stack.back() != t.name) close_top("balanced:");
            stack.pop_back();
            balanced.push_back(t);
        } else {
            balanced.push_back(std::move(t));
        }
    }
    while (!stack.empty()) close_top("balanced:");

    // ID deduplication: later duplicates get deterministic -2, -3 suffixes.
    std::map<std::string, int> id_count;
    for (auto& t : balanced) {
        if (t.kind != Token::Kind::start) continue;
        for (auto& a : t.attrs) {
            if (a.name != "id") continue;
            int n = ++id_count[a.value];
            if (n > 1) {
                std::string fresh = a.value + "-" + std::to_string(n);
                res.actions.push_back("id_dedup:" + fresh);
                a.value = fresh;
            }
        }
    }

    // Namespace normalization: bind undeclared prefixes on the root element.
    std::set<std::string> declared, used;
    for (const auto& t : balanced) {
        if (t.kind != Token::Kind::start) continue;
        auto note_prefix = [&used](const std::string& n) {
            size_t c = n.find(':');
            if (c != std::string::npos && c > 0) used.insert(n.substr(0, c));
        };
        note_prefix(t.name);
        for (const auto& a : t.attrs) {
            if (a.name.rfind("xmlns:", 0) == 0)
                declared.insert(a.name.substr(6));
            else if (a.name != "xmlns")
                note_prefix(a.name);
        }
    }
    used.erase("xml");
    for (const auto& prefix : used) {
        if (declared.count(prefix)) continue;
        for (auto& t : balanced) {
            if (t.kind != Token::Kind::start) continue;
            t.attrs.push_back({"xmlns:" + prefix, "urn:repair:" + prefix});
            break;
        }
        res.actions.push_back("ns_bound:" + prefix);
    }

    res.repaired_xml = serialize(balanced);
    return res;
}

const std::string* Node::attr(std::string_view n) const {
    for (const auto& a : attrs)
        if (a.name == n) return &a.value;
    return nullptr;
}

std::string Node::inner_text() const {
    std::string out = text;
    for (const auto& c : children) out += c.inner_text();
    return out;
}

Node parse_dom(const std::string& markup) {
    auto toks = tokenize(markup);
    if (!toks) throw RepairError("untokenizable markup");
    Node root;
    root.name = "#root";
    std::vector<Node*> stack{&root};
    for (auto& t : *toks) {
        switch (t.kind) {
            case Token::Kind::text: {
                if (t.text.find_first_not_of(" \t\r\n") == std::string::npos)
                    break;
                Node n;
                n.text = std::move(t.text);
                stack.back()->children.push_back(std::move(n));
                break;
            }
            case Token::Kind::start: {
                Node n;
                n.name = std::move(t.name);
                n.attrs = std::move(t.attrs);
                stack.back()->children.push_back(std::move(n));
                if (!t.self_closing)
                    stack.push_back(&stack.back()->children.back());
                break;
            }
            case Token::Kind::end: {
                if (stack.size() <= 1 || stack.back()->name != t.name)
                    throw RepairError("unbalanced markup: " + t.name);
                stack.pop_back();
                break;
            }
        }
    }
    if (stack.size() != 1) throw RepairError("unclosed elements at EOF");
    if (root.children.size() == 1 && !root.children[0].name.empty())
        return std::move(root.children[0]);
    return root;
}

}  // namespace docpipe::xml
