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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "docpipe/metrics.hpp"

using namespace docpipe;

namespace {

// Plain quadratic DP, kept independent of the library implementation.
int lev_oracle(const std::string& a, const std::string& b) {
    size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
    for (size_t i = 0; i <= n; ++i) d[i][0] = (int)i;
    for (size_t j = 0; j <= m; ++j) d[0][j] = (int)j;
    for (size_t i = 1; i <= n; ++i)
        for (size_t j = 1; j <= m; ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    return d[n][m];
}

}  // namespace

TEST_CASE("levenshtein basics") {
    CHECK(levenshtein("", "abc") == 3);
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("same", "same") == 0);
    // codepoints, not bytes
    CHECK(levenshtein("\xCE\xB1\xCE\xB2", "\xCE\xB1\xCE\xB3") == 1);
}

TEST_CASE("levenshtein matches the oracle on all short pairs") {
    std::vector<std::string> all;
    const char sym[] = {'a', 'b', 'c'};
    for (int len = 0; len <= 5; ++len) {
        int count = 1;
        for (int i = 0; i < len; ++i) count *= 3;
        for (int v = 0; v < count; ++v) {
            std::string s;
            int x = v;
            for (int i = 0; i < len; ++i) {
                s += sym[x % 3];
                x /= 3;
            }
            all.push_back(s);
        }
    }
    for (const auto& a : all)
        for (const auto& b : all)
            CHECK(levenshtein(a, b) == lev_oracle(a, b));
}

TEST_CASE("levenshtein is symmetric and triangular on random strings") {
    std::mt19937 rng(2);
    auto rand_str = [&]() {
        std::string s;
        int len = rng() % 12;
        for (int i = 0; i < len; ++i) s += char('a' + rng() % 4);
        return s;
    };
    for (int t = 0; t < 300; ++t) {
        std::string a = rand_str(), b = rand_str(), c = rand_str();
        CHECK(levenshtein(a, b) == levenshtein(b, a));
        CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
    }
}

TEST_CASE("ned normalizes over the longer string") {
    CHECK(ned("x", "x") == 1.0);
    CHECK(ned("abcd", "abcf") == doctest::Approx(0.75));
    CHECK(ned("", "") == 1.0);
    CHECK(ned("", "abcd") == 0.0);
}

TEST_CASE("teds scores identity and simple edits") {
    std::string table =
        "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr>"
        "</table>";
    CHECK(teds(table, table) == doctest::Approx(100.0));

    // prediction missing one of three cells under a common root:
    // one delete; 6 nodes on the larger side
    std::string gt =
        "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td></tr></table>";
    std::string pred =
        "<table><tr><td>a</td><td>b</td></tr><tr></tr></table>";
    CHECK(teds(pred, gt) == doctest::Approx(100.0 * (1.0 - 1.0 / 6)));
}

TEST_CASE("teds penalizes cell text by ned at leaves") {
    std::string gt = "<table><tr><td>abcd</td></tr></table>";
    std::string pred = "<table><tr><td>abcf</td></tr></table>";
    // 3 nodes; one leaf relabel costing 1-0.75
    CHECK(teds(pred, gt) == doctest::Approx(100.0 * (1.0 - 0.25 / 3)));
    CHECK(teds(pred, gt, true) == doctest::Approx(100.0));
}

TEST_CASE("unparseable markup scores zero") {
    CHECK(teds("", "<table><tr><td>a</td></tr></table>") == 0.0);
    CHECK(teds("just text", "<table><tr><td>a</td></tr></table>") == 0.0);
}

TEST_CASE("cdm follows the f1 formula") {
    auto chars = [](const std::string& s) {
        std::vector<CharSample> out;
        for (char c : s) out.push_back({(char32_t)c, {}});
        return out;
    };
    CHECK(cdm(chars("abcd"), chars("abcd")) == doctest::Approx(100.0));
    CHECK(cdm(chars("ab"), chars("abcd")) == doctest::Approx(200.0 / 3));
    CHECK(cdm(chars("xy"), chars("ab")) == 0.0);
    CHECK(cdm({}, {}) == 100.0);
}

TEST_CASE("cdm applies spatial tolerance when positions exist") {
    std::vector<CharSample> gt = {{U'a', {{10.0, 10.0}}}};
    std::vector<CharSample> close = {{U'a', {{10.3, 10.0}}}};
    std::vector<CharSample> far = {{U'a', {{30.0, 10.0}}}};
    CHECK(cdm(close, gt, 0.5) == doctest::Approx(100.0));
    CHECK(cdm(far, gt, 0.5) == 0.0);
}

TEST_CASE("direct segment matching pairs identical lists") {
    std::vector<std::string> segs = {"alpha beta", "gamma delta", "epsilon"};
    auto matches = adjacency_match(segs, segs);
    REQUIRE(matches.size() == 3);
    for (const auto& m : matches) {
        REQUIRE(m.gt_indices.size() == 1);
        CHECK(m.gt_indices[0] == m.pred_index);
        CHECK(m.ned == doctest::Approx(1.0));
    }
}

TEST_CASE("merge stage recovers a prediction spanning two gt segments") {
    std::vector<std::string> gt = {"Hello", "world"};
    std::vector<std::string> pred = {"Hello world"};
    auto matches = adjacency_match(pred, gt);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].pred_index == 0);
    CHECK(matches[0].gt_indices == std::vector<int>{0, 1});
    CHECK(matches[0].ned == doctest::Approx(1.0));
}

TEST_CASE("unrelated segments stay unmatched") {
    CHECK(adjacency_match({"xxxxxxxx"}, {"qqqqqq", "zzzzzz"}).empty());
}

TEST_CASE("matched gt indices are disjoint") {
    std::vector<std::string> gt = {"one two", "three four", "five six",
                                   "seven"};
    std::vector<std::string> pred = {"one two three four", "five six",
                                     "seven"};
    auto matches = adjacency_match(pred, gt);
    std::vector<int> used;
    for (const auto& m : matches)
        for (int g : m.gt_indices) used.push_back(g);
    std::sort(used.begin(), used.end());
    CHECK(std::adjacent_find(used.begin(), used.end()) == used.end());
}

TEST_CASE("overall score reproduces the published aggregation") {
    CHECK(overall_score(0.055, 72.24) == doctest::Approx(83.37).epsilon(1e-4));
    CHECK(overall_score(0.174, 50.59) == doctest::Approx(66.595));
    CHECK(overall_score(0.0, 100.0) == 100.0);
    CHECK_THROWS(overall_score(-0.1, 50));
    CHECK_THROWS(overall_score(0.5, 101));
}

TEST_CASE("latex commands convert to unicode symbols") {
    CHECK(latex_to_unicode("\\alpha + \\beta") == "α + β");
    CHECK(latex_to_unicode("x \\leq   y") == "x ≤ y");
    CHECK(latex_to_unicode("\\unknowncmd{x}") == "\\unknowncmd{x}");
}
