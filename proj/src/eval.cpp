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

#include "docpipe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "docpipe/metrics.hpp"
#include "docpipe/utf8.hpp"
#include "docpipe/xml.hpp"

namespace docpipe {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool is_separator_row(const std::string& line) {
    bool any_dash = false;
    for (char c : line) {
        if (c == '-') any_dash = true;
        else if (c != '|' && c != ':' && c != ' ' && c != '\t') return false;
    }
    return any_dash;
}

std::string strip_paragraph_markers(std::string s) {
    s = trim(s);
    while (!s.empty() && s[0] == '#') s.erase(0, 1);
    if (s.rfind("- ", 0) == 0) s.erase(0, 2);
    return trim(s);
}

size_t cp_len(const std::string& s) { return utf8::decode(s).size(); }

}  // namespace

PredSegments split_prediction(const std::string& markdown) {
    PredSegments out;
    std::vector<std::string> block;
    bool in_fence = false;

    auto flush = [&]() {
        if (block.empty()) return;
        std::string joined;
        for (size_t i = 0; i < block.size(); ++i) {
            if (i) joined += '\n';
            joined += block[i];
        }
        std::string t = trim(joined);
        block.clear();
        if (t.empty()) return;
        if (t[0] == '|') {
            out.tables.push_back(t);
            return;
        }
        if (t.size() >= 2 && t.front() == '$' && t.back() == '$') {
            out.formulas.push_back(trim(t.substr(1, t.size() - 2)));
            return;
        }
        if (t.rfind("```", 0) == 0) {
            size_t nl = t.find('\n');
            size_t end = t.rfind("```");
            if (nl != std::string::npos && end > nl)
                t = trim(t.substr(nl + 1, end - nl - 1));
            if (!t.empty()) out.paragraphs.push_back(t);
            return;
        }
        std::string para;
        std::istringstream bs(joined);
        std::string ln;
        while (std::getline(bs, ln)) {
            ln = strip_paragraph_markers(ln);
            if (ln.empty()) continue;
            if (!para.empty()) para += ' ';
            para += ln;
        }
        if (!para.empty()) out.paragraphs.push_back(para);
    };

    std::istringstream in(markdown);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("```", 0) == 0) in_fence = !in_fence;
        if (trim(line).empty() && !in_fence) {
            flush();
        } else {
            block.push_back(line);
        }
    }
    flush();
    return out;
}

std::string markdown_table_to_html(const std::string& md_table) {
    std::string html = "<table>";
    std::istringstream in(md_table);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] != '|') continue;
        if (is_separator_row(line)) continue;
        // strip outer pipes, split on '|'
        std::string body = line.substr(1);
        if (!body.empty() && body.back() == '|') body.pop_back();
        html += "<tr>";
        size_t pos = 0;
        while (pos <= body.size()) {
            size_t next = body.find('|', pos);
            std::string cell = body.substr(
                pos, next == std::string::npos ? std::string::npos
                                               : next - pos);
            html += "<td>" + xml::escape_text(trim(cell)) + "</td>";
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        html += "</tr>";
    }
    html += "</table>";
    return html;
}

namespace {

bool gt_excluded(const std::string& tag) {
    return tag == "page_header" || tag == "page_footer" ||
           tag == "figure_caption" || tag == "table_caption";
}

std::string grid_element_to_html(const DocTagElement& e) {
    DocTagPage tmp;
    tmp.elements.push_back(e);
    return export_page(tmp, ExportFormat::html);
}

}  // namespace

PageScores evaluate_page(const std::string& pred_markdown,
                         const DocTagPage& gt, const std::string& page_id) {
    PageScores row;
    row.page_id = page_id;

    PredSegments pred = split_prediction(pred_markdown);

    std::vector<std::string> gt_paragraphs;
    std::vector<std::string> gt_tables_html;
    std::vector<std::string> gt_charts_html;
    std::vector<std::string> gt_formulas;
    for (const auto& e : gt.elements) {
        if (gt_excluded(e.tag)) continue;
        if (e.tag == "table") {
            gt_tables_html.push_back(grid_element_to_html(e));
        } else if (e.tag == "chart") {
            if (!e.content.empty())
                gt_charts_html.push_back(grid_element_to_html(e));
        } else if (e.tag == "formula") {
            gt_formulas.push_back(e.content);
        } else if (e.tag == "picture") {
            // no textual contribution
        } else {
            if (!e.content.empty()) gt_paragraphs.push_back(e.content);
        }
    }

    auto matches = adjacency_match(pred.paragraphs, gt_paragraphs);

    double gained = 0;
    size_t gt_total = 0;
    for (const auto& g : gt_paragraphs) gt_total += cp_len(g);
    std::vector<bool> pred_matched(pred.paragraphs.size(), false);
    for (const auto& m : matches) {
        pred_matched[m.pred_index] = true;
        size_t wlen = 0;
        for (int g : m.gt_indices) wlen += cp_len(gt_paragraphs[g]);
        gained += m.ned * wlen;
    }
    size_t extra = 0;
    for (size_t p = 0; p < pred.paragraphs.size(); ++p)
        if (!pred_matched[p]) extra += cp_len(pred.paragraphs[p]);
    size_t denom = gt_total + extra;
    row.text_edit = denom == 0 ? 0.0 : 1.0 - gained / denom;
    row.text_edit = std::clamp(row.text_edit, 0.0, 1.0);

    // Reading order: matched GT indices in prediction order vs sorted.
    std::vector<char32_t> seq;
    for (const auto& m : matches)
        seq.push_back(static_cast<char32_t>(m.gt_indices.front() + 1));
    std::vector<char32_t> sorted_seq = seq;
    std::sort(sorted_seq.begin(), sorted_seq.end());
    if (!seq.empty()) {
        std::string a = utf8::encode(seq);
        std::string b = utf8::encode(sorted_seq);
        row.read_order_edit = 1.0 - ned(a, b);
    }

    // Prediction tables pair with GT tables index-wise; any surplus beyond
    // the GT table and chart counts is an unmatched table scoring 0.
    size_t pred_surplus =
        pred.tables.size() > gt_tables_html.size() + gt_charts_html.size()
            ? pred.tables.size() - gt_tables_html.size() -
                  gt_charts_html.size()
            : 0;
    size_t table_count = gt_tables_html.size() + pred_surplus;
    if (table_count > 0) {
        double sum = 0;
        for (size_t i = 0; i < gt_tables_html.size(); ++i) {
            if (i < pred.tables.size())
                sum += teds(markdown_table_to_html(pred.tables[i]),
                            gt_tables_html[i]);
        }
        row.table_teds = sum / table_count;
    }

    if (!gt_charts_html.empty()) {
        // Charts are scored from the prediction tables left over after the
        // GT tables are consumed, in order.
        double sum = 0;
        for (size_t i = 0; i < gt_charts_html.size(); ++i) {
            size_t pi = gt_tables_html.size() + i;
            if (pi < pred.tables.size())
                sum += chart_score(markdown_table_to_html(pred.tables[pi]),
                                   gt_charts_html[i]);
        }
        row.chart_score = sum / gt_charts_html.size();
    }

    if (!gt_formulas.empty() || !pred.formulas.empty()) {
        size_t count = std::max(gt_formulas.size(), pred.formulas.size());
        double sum = 0;
        for (size_t i = 0; i < count; ++i) {
            std::string p = i < pred.formulas.size()
                                ? latex_to_unicode(pred.formulas[i])
                                : std::string();
            std::string g = i < gt_formulas.size()
                                ? latex_to_unicode(gt_formulas[i])
                                : std::string();
            sum += 1.0 - ned(p, g);
        }
        row.formula_edit = sum / count;
    }

    {
        std::vector<CharSample> pc, gc;
        for (const auto& s : pred.paragraphs)
            for (char32_t c : utf8::decode(s)) pc.push_back({c, {}});
        for (const auto& s : gt_paragraphs)
            for (char32_t c : utf8::decode(s)) gc.push_back({c, {}});
        row.cdm = cdm(pc, gc);
    }

    return row;
}

namespace {

Aggregate aggregate_rows(const std::vector<const PageScores*>& rows) {
    Aggregate a;
    a.pages = static_cast<int>(rows.size());
    if (rows.empty()) return a;
    double teds_sum = 0, formula_sum = 0;
    int teds_n = 0, formula_n = 0;
    for (const auto* r : rows) {
        a.text_edit += r->text_edit;
        a.read_order_edit += r->read_order_edit;
        if (r->table_teds) {
            teds_sum += *r->table_teds;
            ++teds_n;
        }
        if (r->formula_edit) {
            formula_sum += *r->formula_edit;
            ++formula_n;
        }
    }
    a.text_edit /= a.pages;
    a.read_order_edit /= a.pages;
    if (teds_n) a.table_teds = teds_sum / teds_n;
    if (formula_n) a.formula_edit = formula_sum / formula_n;
    a.overall = overall_score(a.text_edit,
                              a.table_teds ? *a.table_teds : 100.0);
    return a;
}

}  // namespace

EvalReport build_report(std::vector<PageScores> pages) {
    EvalReport report;
    report.per_page = std::move(pages);
    std::vector<const PageScores*> all;
    std::map<std::string, std::vector<const PageScores*>> slices;
    for (const auto& p : report.per_page) {
        all.push_back(&p);
        for (const auto& [k, v] : p.attributes)
            slices[k + "=" + v].push_back(&p);
    }
    report.total = aggregate_rows(all);
    for (auto& [key, rows] : slices)
        report.by_attribute[key] = aggregate_rows(rows);
    return report;
}

std::string report_to_json(const EvalReport& report) {
    using nlohmann::json;
    auto agg_json = [](const Aggregate& a) {
        json j = {{"pages", a.pages},
                  {"text_edit", a.text_edit},
                  {"read_order_edit", a.read_order_edit},
                  {"overall", a.overall}};
        if (a.table_teds) j["table_teds"] = *a.table_teds;
        if (a.formula_edit) j["formula_edit"] = *a.formula_edit;
        return j;
    };
    json j;
    j["per_page"] = json::array();
    for (const auto& p : report.per_page) {
        json r = {{"page_id", p.page_id},
                  {"text_edit", p.text_edit},
                  {"read_order_edit", p.read_order_edit}};
        if (p.table_teds) r["table_teds"] = *p.table_teds;
        if (p.formula_edit) r["formula_edit"] = *p.formula_edit;
        if (p.chart_score) r["chart_score"] = *p.chart_score;
        if (p.cdm) r["cdm"] = *p.cdm;
        if (!p.attributes.empty()) r["attributes"] = p.attributes;
        j["per_page"].push_back(std::move(r));
    }
    j["total"] = agg_json(report.total);
    for (const auto& [key, a] : report.by_attribute)
        j["by_attribute"][key] = agg_json(a);
    return j.dump(2);
}

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "page_id,text_edit,read_order_edit,table_teds,formula_edit,"
           "chart_score,cdm\n";
    auto cell = [&](const std::optional<double>& v) {
        if (v) out << *v;
        out << ',';
    };
    for (const auto& p : report.per_page) {
        out << p.page_id << ',' << p.text_edit << ',' << p.read_order_edit
            << ',';
        cell(p.table_teds);
        cell(p.formula_edit);
        cell(p.chart_score);
        if (p.cdm) out << *p.cdm;
        out << '\n';
    }
    return out.str();
}

}  // namespace docpipe
