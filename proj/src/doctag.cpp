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

#include "docpipe/doctag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "docpipe/xml.hpp"

namespace docpipe {

int quantize_loc(double v_pt, double page_dim_pt) {
    if (page_dim_pt <= 0) return 0;
    int q = static_cast<int>(std::floor(1000.0 * v_pt / page_dim_pt));
    return std::clamp(q, 0, 999);
}

std::string escape_content(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else out += c;
    }
    return out;
}

std::string unescape_content(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s.compare(i, 4, "&lt;") == 0) {
            out += '<';
            i += 4;
        } else if (s.compare(i, 5, "&amp;") == 0) {
            out += '&';
            i += 5;
        } else {
            out += s[i++];
        }
    }
    return out;
}

std::string table_content(const TableGrid& grid) {
    std::string out;
    for (int r = 0; r < grid.rows; ++r) {
        if (r) out += " || ";
        for (int c = 0; c < grid.cols; ++c) {
            if (c) out += " | ";
            const TableCell& cell = grid.at(r, c);
            if (cell.covered) {
                out += "{void}";
                continue;
            }
            if (cell.rowspan > 1 || cell.colspan > 1)
                out += "{" + std::to_string(cell.rowspan) + "x" +
                       std::to_string(cell.colspan) + "}";
            out += cell.text;
        }
    }
    return out;
}

TableGrid parse_table_content(const std::string& content) {
    std::vector<std::vector<TableCell>> rows;
    size_t pos = 0;
    while (pos <= content.size()) {
        size_t row_end = content.find(" || ", pos);
        std::string row = content.substr(
            pos, row_end == std::string::npos ? std::string::npos
                                              : row_end - pos);
        std::vector<TableCell> cells;
        size_t cpos = 0;
        while (cpos <= row.size()) {
            size_t cell_end = row.find(" | ", cpos);
            std::string cell_text = row.substr(
                cpos, cell_end == std::string::npos ? std::string::npos
                                                    : cell_end - cpos);
            TableCell cell;
            if (cell_text == "{void}") {
                cell.covered = true;
            } else {
                if (cell_text.size() > 2 && cell_text[0] == '{') {
                    size_t close = cell_text.find('}');
                    size_t x = cell_text.find('x');
                    if (close != std::string::npos && x != std::string::npos &&
                        x < close) {
                        try {
                            cell.rowspan = std::stoi(cell_text.substr(1, x - 1));
                            cell.colspan = std::stoi(
                                cell_text.substr(x + 1, close - x - 1));
                            cell_text = cell_text.substr(close + 1);
                        } catch (const std::exception&) {
                            // not a span prefix; keep text as-is
                        }
                    }
                }
                cell.text = cell_text;
            }
            cells.push_back(std::move(cell));
            if (cell_end == std::string::npos) break;
            cpos = cell_end + 3;
        }
        rows.push_back(std::move(cells));
        if (row_end == std::string::npos) break;
        pos = row_end + 4;
    }

    TableGrid g;
    g.rows = static_cast<int>(rows.size());
    for (const auto& r : rows) g.cols = std::max(g.cols, (int)r.size());
    g.cells.assign(size_t(g.rows) * g.cols, {});
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < (int)rows[r].size(); ++c) g.at(r, c) = rows[r][c];
    return g;
}

DocTagPage to_doctag(const AnnotatedPage& page) {
    DocTagPage out;
    out.page_w_pt = page.page_w_pt;
    out.page_h_pt = page.page_h_pt;
    for (const auto& c : page.components) {
        DocTagElement e;
        e.tag = to_string(c.kind);
        e.loc = {quantize_loc(c.bbox_pt.x1, page.page_w_pt),
                 quantize_loc(c.bbox_pt.y1, page.page_h_pt),
                 quantize_loc(c.bbox_pt.x2, page.page_w_pt),
                 quantize_loc(c.bbox_pt.y2, page.page_h_pt)};
        if (c.kind == ComponentKind::table && c.table_grid)
            e.content = table_content(*c.table_grid);
        else
            e.content = c.text;
        out.elements.push_back(std::move(e));
    }
    return out;
}

std::string serialize_doctag(const DocTagPage& page) {
    std::string out = "<doctag>";
    for (size_t i = 0; i < page.elements.size(); ++i) {
        const auto& e = page.elements[i];
        if (i) out += '\n';
        out += '<' + e.tag + '>';
        for (int v : e.loc) out += "<loc_" + std::to_string(v) + ">";
        out += escape_content(e.content);
        out += "</" + e.tag + '>';
    }
    out += "</doctag>";
    return out;
}

std::string serialize_doctag(const AnnotatedPage& page) {
    return serialize_doctag(to_doctag(page));
}

namespace {
int line_of(const std::string& s, size_t pos) {
    return 1 + static_cast<int>(std::count(s.begin(), s.begin() + pos, '\n'));
}
}  // namespace

DocTagPage parse_doctag(const std::string& s) {
    size_t open = s.find("<doctag>");
    size_t close = s.rfind("</doctag>");
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw DocTagParseError("missing <doctag> wrapper", 1);

    DocTagPage page;
    size_t pos = open + 8;
    while (pos < close) {
        while (pos < close && (s[pos] == '\n' || s[pos] == ' ')) ++pos;
        if (pos >= close) break;
        if (s[pos] != '<')
            throw DocTagParseError("expected element tag", line_of(s, pos));
        size_t tag_end = s.find('>', pos);
        if (tag_end == std::string::npos || tag_end > close)
            throw DocTagParseError("unterminated tag", line_of(s, pos));
        std::string tag = s.substr(pos + 1, tag_end - pos - 1);
        if (tag.empty() || tag[0] == '/')
            throw DocTagParseError("unexpected close tag", line_of(s, pos));

        DocTagElement e;
        size_t p = tag_end + 1;
        for (int i = 0; i < 4; ++i) {
            if (s.compare(p, 5, "<loc_") != 0)
                throw DocTagParseError("expected 4 loc tokens after <" + tag +
                                           ">",
                                       line_of(s, pos));
            size_t num_end = s.find('>', p);
            if (num_end == std::string::npos)
                throw DocTagParseError("unterminated loc token",
                                       line_of(s, pos));
            int v;
            try {
                v = std::stoi(s.substr(p + 5, num_end - p - 5));
            } catch (const std::exception&) {
                throw DocTagParseError("bad loc token", line_of(s, pos));
            }
            if (v < 0 || v > 999)
                throw DocTagParseError("loc out of range: " +
                                           std::to_string(v),
                                       line_of(s, pos));
            e.loc[i] = v;
            p = num_end + 1;
        }
        std::string close_tag = "</" + tag + ">";
        size_t content_end = s.find(close_tag, p);
        if (content_end == std::string::npos || content_end > close)
            throw DocTagParseError("unbalanced element <" + tag + ">",
                                   line_of(s, pos));
        e.content = unescape_content(s.substr(p, content_end - p));
        if (kind_from_string(tag)) {
            e.tag = tag;
        } else {
            page.warnings.push_back("unknown tag '" + tag + "' mapped to text");
            e.tag = "text";
        }
        page.elements.push_back(std::move(e));
        pos = content_end + close_tag.size();
    }
    return page;
}

namespace {

std::string markdown_table(const TableGrid& g) {
    std::string out;
    for (int r = 0; r < g.rows; ++r) {
        out += '|';
        for (int c = 0; c < g.cols; ++c) {
            const TableCell& cell = g.at(r, c);
            out += ' ' + (cell.covered ? std::string() : cell.text) + " |";
        }
        out += '\n';
        if (r == 0) {
            out += '|';
            for (int c = 0; c < g.cols; ++c) out += " --- |";
            out += '\n';
        }
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string html_table(const TableGrid& g) {
    std::string out = "<table>";
    for (int r = 0; r < g.rows; ++r) {
        out += "<tr>";
        for (int c = 0; c < g.cols; ++c) {
            const TableCell& cell = g.at(r, c);
            if (cell.covered) continue;
            out += "<td";
            if (cell.colspan > 1)
                out += " colspan=\"" + std::to_string(cell.colspan) + "\"";
            if (cell.rowspan > 1)
                out += " rowspan=\"" + std::to_string(cell.rowspan) + "\"";
            out += ">" + xml::escape_text(cell.text) + "</td>";
        }
        out += "</tr>";
    }
    out += "</table>";
    return out;
}

bool skipped_in_markdown(const std::string& tag) {
    return tag == "page_header" || tag == "page_footer" ||
           tag == "figure_caption" || tag == "table_caption";
}

}  // namespace

std::string export_page(const DocTagPage& page, ExportFormat format) {
    using nlohmann::json;
    switch (format) {
        case ExportFormat::json: {
            json j;
            j["page_size_pt"] = {page.page_w_pt, page.page_h_pt};
            j["elements"] = json::array();
            for (const auto& e : page.elements)
                j["elements"].push_back(
                    {{"tag", e.tag},
                     {"loc", {e.loc[0], e.loc[1], e.loc[2], e.loc[3]}},
                     {"content", e.content}});
            return j.dump(2);
        }
        case ExportFormat::markdown: {
            std::vector<std::string> blocks;
            for (const auto& e : page.elements) {
                if (skipped_in_markdown(e.tag)) continue;
                if (e.tag == "table") {
                    blocks.push_back(markdown_table(parse_table_content(
                        e.content)));
                } else if (e.tag == "section_header" || e.tag == "title") {
                    if (!e.content.empty()) blocks.push_back("# " + e.content);
                } else if (e.tag == "formula") {
                    if (!e.content.empty())
                        blocks.push_back("$" + e.content + "$");
                } else if (e.tag == "code") {
                    if (!e.content.empty())
                        blocks.push_back("```\n" + e.content + "\n```");
                } else if (e.tag == "list_item") {
                    if (!e.content.empty()) blocks.push_back("- " + e.content);
                } else {
                    if (!e.content.empty()) blocks.push_back(e.content);
                }
            }
            std::string out;
            for (size_t i = 0; i < blocks.size(); ++i) {
                if (i) out += "\n\n";
                out += blocks[i];
            }
            return out;
        }
        case ExportFormat::html: {
            std::string out;
            for (const auto& e : page.elements) {
                if (!out.empty()) out += '\n';
                if (e.tag == "table") {
                    out += html_table(parse_table_content(e.content));
                } else if (e.tag == "section_header" || e.tag == "title") {
                    out += "<h1>" + xml::escape_text(e.content) + "</h1>";
                } else if (e.tag == "list_item") {
                    out += "<li>" + xml::escape_text(e.content) + "</li>";
                } else {
                    out += "<p>" + xml::escape_text(e.content) + "</p>";
                }
            }
            return out;
        }
    }
    return {};
}

}  // namespace docpipe
