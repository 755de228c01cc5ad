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

#include "docpipe/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include "docpipe/utf8.hpp"
#include "docpipe/xml.hpp"

namespace docpipe {

int levenshtein(const std::string& a, const std::string& b) {
    std::vector<char32_t> ua = utf8::decode(a);
    std::vector<char32_t> ub = utf8::decode(b);
    size_t n = ua.size(), m = ub.size();
    std::vector<int> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= m; ++j) {
            int sub = prev[j - 1] + (ua[i - 1] == ub[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double ned(const std::string& a, const std::string& b) {
    size_t la = utf8::decode(a).size();
    size_t lb = utf8::decode(b).size();
    size_t denom = std::max(la, lb);
    if (denom == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(a, b)) / denom;
}

int DomTree::size() const {
    int n = 1;
    for (const auto& c : children) n += c.size();
    return n;
}

namespace {

const xml::Node* find_element(const xml::Node& node, const std::string& name) {
    if (node.name == name) return &node;
    for (const auto& c : node.children)
        if (const xml::Node* hit = find_element(c, name)) return hit;
    return nullptr;
}

DomTree convert(const xml::Node& node) {
    DomTree t;
    t.tag = node.name;
    bool has_elements = false;
    for (const auto& c : node.children)
        if (!c.name.empty()) has_elements = true;
    if (has_elements) {
        for (const auto& c : node.children)
            if (!c.name.empty()) t.children.push_back(convert(c));
    } else {
        t.text = node.inner_text();
    }
    return t;
}

}  // namespace

std::optional<DomTree> parse_table_html(const std::string& html) {
    xml::Node root;
    try {
        auto repaired = xml::repair_markup("<root>" + html + "</root>");
        root = xml::parse_dom(repaired.repaired_xml);
    } catch (const xml::RepairError&) {
        return std::nullopt;
    }
    const xml::Node* table = find_element(root, "table");
    if (!table) return std::nullopt;
    return convert(*table);
}

namespace {

// Zhang-Shasha ordered tree edit distance over postorder arrays.
struct FlatTree {
    std::vector<const DomTree*> post;  // postorder
    std::vector<int> lml;              // leftmost leaf index per node

    void build(const DomTree& t) {
        post.clear();
        lml.clear();
        walk(t);
    }

    int walk(const DomTree& t) {
        int first = -1;
        for (const auto& c : t.children) {
            int f = walk(c);
            if (first < 0) first = f;
        }
        post.push_back(&t);
        int idx = static_cast<int>(post.size()) - 1;
        lml.push_back(first < 0 ? idx : first);
        return lml.back();
    }

    std::vector<int> keyroots() const {
        std::vector<int> ks;
        std::map<int, int> last_for_lml;
        for (int i = 0; i < (int)post.size(); ++i) last_for_lml[lml[i]] = i;
        for (auto& [l, i] : last_for_lml) ks.push_back(i);
        std::sort(ks.begin(), ks.end());
        return ks;
    }
};

double relabel_cost(const DomTree& a, const DomTree& b, bool structure_only) {
    if (a.tag != b.tag) return 1.0;
    if (!structure_only && a.children.empty() && b.children.empty())
        return 1.0 - ned(a.text, b.text);
    return 0.0;
}

double tree_edit_distance(const DomTree& a, const DomTree& b,
                          bool structure_only) {
    FlatTree ta, tb;
    ta.build(a);
    tb.build(b);
    int n = static_cast<int>(ta.post.size());
    int m = static_cast<int>(tb.post.size());
    std::vector<std::vector<double>> td(n, std::vector<double>(m, 0));
    std::vector<std::vector<double>> fd(n + 1, std::vector<double>(m + 1, 0));

    for (int ki : ta.keyroots()) {
        for (int kj : tb.keyroots()) {
            int li = ta.lml[ki], lj = tb.lml[kj];
            fd[li][lj] = 0;
            for (int i = li; i <= ki; ++i) fd[i + 1][lj] = fd[i][lj] + 1;
            for (int j = lj; j <= kj; ++j) fd[li][j + 1] = fd[li][j] + 1;
            for (int i = li; i <= ki; ++i) {
                for (int j = lj; j <= kj; ++j) {
                    if (ta.lml[i] == li && tb.lml[j] == lj) {
                        double rel = relabel_cost(*ta.post[i], *tb.post[j],
                                                 structure_only);
                        fd[i + 1][j + 1] = std::min(
                            {fd[i][j + 1] + 1, fd[i + 1][j] + 1,
                             fd[i][j] + rel});
                        td[i][j] = fd[i + 1][j + 1];
                    } else {
                        fd[i + 1][j + 1] = std::min(
                            {fd[i][j + 1] + 1, fd[i + 1][j] + 1,
                             fd[ta.lml[i]][tb.lml[j]] + td[i][j]});
                    }
                }
            }
        }
    }
    return td[n - 1][m - 1];
}

}  // namespace

double teds_trees(const DomTree& pred, const DomTree& gt,
                  bool structure_only) {
    double d = tree_edit_distance(pred, gt, structure_only);
    int denom = std::max(pred.size(), gt.size());
    if (denom == 0) return 100.0;
    return 100.0 * (1.0 - d / denom);
}

double teds(const std::string& pred_html, const std::string& gt_html,
            bool structure_only) {
    auto pred = parse_table_html(pred_html);
    auto gt = parse_table_html(gt_html);
    if (!pred || !gt) return 0.0;
    return teds_trees(*pred, *gt, structure_only);
}

double cdm(const std::vector<CharSample>& pred,
           const std::vector<CharSample>& gt, double epsilon) {
    if (pred.empty() && gt.empty()) return 100.0;
    if (pred.empty() || gt.empty()) return 0.0;

    std::vector<bool> used(gt.size(), false);
    int matched = 0;
    for (const auto& p : pred) {
        int best = -1;
        double best_d = 0;
        for (size_t j = 0; j < gt.size(); ++j) {
            if (used[j] || gt[j].codepoint != p.codepoint) continue;
            if (p.center && gt[j].center) {
                double dx = p.center->first - gt[j].center->first;
                double dy = p.center->second - gt[j].center->second;
                double d = std::hypot(dx, dy);
                if (d > epsilon) continue;
                if (best < 0 || d < best_d) {
                    best = static_cast<int>(j);
                    best_d = d;
                }
            } else if (best < 0) {
                best = static_cast<int>(j);
            }
        }
        if (best >= 0) {
            used[best] = true;
            ++matched;
        }
    }
    double p = static_cast<double>(matched) / pred.size();
    double r = static_cast<double>(matched) / gt.size();
    if (p + r == 0) return 0.0;
    return 100.0 * 2.0 * p * r / (p + r);
}

double chart_score(const std::string& pred_html, const std::string& gt_html) {
    return teds(pred_html, gt_html, false);
}

std::vector<SegmentMatch> adjacency_match(
    const std::vector<std::string>& pred_segments,
    const std::vector<std::string>& gt_segments, double direct_threshold) {
    std::vector<SegmentMatch> out;
    std::vector<bool> pred_used(pred_segments.size(), false);
    std::vector<bool> gt_used(gt_segments.size(), false);

    struct Pair {
        double ned;
        int p, g;
    };
    std::vector<Pair> pairs;
    for (size_t p = 0; p < pred_segments.size(); ++p)
        for (size_t g = 0; g < gt_segments.size(); ++g) {
            double v = ned(pred_segments[p], gt_segments[g]);
            if (v >= direct_threshold)
                pairs.push_back({v, (int)p, (int)g});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.ned != b.ned) return a.ned > b.ned;
        if (a.p != b.p) return a.p < b.p;
        return a.g < b.g;
    });
    for (const auto& pr : pairs) {
        if (pred_used[pr.p] || gt_used[pr.g]) continue;
        pred_used[pr.p] = true;
        gt_used[pr.g] = true;
        out.push_back({{pr.g}, pr.p, pr.ned});
    }

    // Stage 2: recover predictions that span several GT segments.
    constexpr int kMaxWindow = 5;
    for (size_t p = 0; p < pred_segments.size(); ++p) {
        if (pred_used[p]) continue;
        double best_ned = 0;
        std::vector<int> best_window;
        for (size_t start = 0; start < gt_segments.size(); ++start) {
            if (gt_used[start]) continue;
            std::string merged;
            std::vector<int> window;
            for (size_t g = start;
                 g < gt_segments.size() && window.size() < kMaxWindow; ++g) {
                if (gt_used[g]) break;
                if (!merged.empty()) merged += ' ';
                merged += gt_segments[g];
                window.push_back((int)g);
                if (window.size() < 2) continue;
                double v = ned(pred_segments[p], merged);
                if (v >= direct_threshold && v > best_ned) {
                    best_ned = v;
                    best_window = window;
                }
            }
        }
        if (!best_window.empty()) {
            pred_used[p] = true;
            for (int g : best_window) gt_used[g] = true;
            out.push_back({best_window, (int)p, best_ned});
        }
    }

    std::sort(out.begin(), out.end(),
              [](const SegmentMatch& a, const SegmentMatch& b) {
                  return a.pred_index < b.pred_index;
              });
    return out;
}

double overall_score(double text_edit, double table_teds) {
    if (text_edit < 0 || text_edit > 1)
        throw std::invalid_argument("text_edit outside [0,1]");
    if (table_teds < 0 || table_teds > 100)
        throw std::invalid_argument("table_teds outside [0,100]");
    return ((1.0 - text_edit) * 100.0 + table_teds) / 2.0;
}

namespace {

const std::map<std::string, std::string>& latex_table() {
    static const std::map<std::string, std::string> t = {
        {"alpha", "α"},   {"beta", "β"},     {"gamma", "γ"},
        {"delta", "δ"},   {"epsilon", "ε"},  {"zeta", "ζ"},
        {"eta", "η"},     {"theta", "θ"},    {"kappa", "κ"},
        {"lambda", "λ"},  {"mu", "μ"},       {"nu", "ν"},
        {"xi", "ξ"},      {"pi", "π"},       {"rho", "ρ"},
        {"sigma", "σ"},   {"tau", "τ"},      {"phi", "φ"},
        {"chi", "χ"},     {"psi", "ψ"},      {"omega", "ω"},
        {"Gamma", "Γ"},   {"Delta", "Δ"},    {"Theta", "Θ"},
        {"Lambda", "Λ"},  {"Xi", "Ξ"},       {"Pi", "Π"},
        {"Sigma", "Σ"},   {"Phi", "Φ"},      {"Psi", "Ψ"},
        {"Omega", "Ω"},   {"times", "×"},    {"pm", "±"},
        {"mp", "∓"},      {"leq", "≤"},      {"geq", "≥"},
        {"neq", "≠"},     {"approx", "≈"},   {"infty", "∞"},
        {"cdot", "⋅"},    {"sum", "∑"},      {"prod", "∏"},
        {"int", "∫"},     {"sqrt", "√"},     {"partial", "∂"},
        {"nabla", "∇"},   {"rightarrow", "→"}, {"leftarrow", "←"},
        {"in", "∈"},      {"subset", "⊂"},   {"supset", "⊃"},
        {"cup", "∪"},     {"cap", "∩"},      {"forall", "∀"},
        {"exists", "∃"},  {"div", "÷"},      {"propto", "∝"},
        {"equiv", "≡"},   {"sim", "∼"},      {"circ", "∘"},
        {"degree", "°"},  {"ell", "ℓ"},      {"hbar", "ℏ"},
    };
    return t;
}

}  // namespace

std::string latex_to_unicode(const std::string& s) {
    std::string out;
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '\\') {
            size_t j = i + 1;
            while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j])))
                ++j;
            std::string cmd = s.substr(i + 1, j - i - 1);
            auto it = latex_table().find(cmd);
            if (it != latex_table().end()) {
                out += it->second;
                i = j;
                continue;
            }
        }
        out += s[i++];
    }

    std::string collapsed;
    bool in_space = false;
    for (char c : out) {
        bool sp = (c == ' ' || c == '\t' || c == '\n' || c == '\r');
        if (sp) {
            in_space = true;
        } else {
            if (in_space && !collapsed.empty()) collapsed += ' ';
            in_space = false;
            collapsed += c;
        }
    }
    return collapsed;
}

}  // namespace docpipe
