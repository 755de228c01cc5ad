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

#include "docpipe/bench.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "docpipe/utf8.hpp"

namespace docpipe {

namespace {

constexpr int kKindCount = static_cast<int>(ComponentKind::form_tag) + 1;

}  // namespace

std::vector<std::string> PageFeatures::names() {
    std::vector<std::string> n;
    for (int i = 0; i < kKindCount; ++i)
        n.push_back(to_string(static_cast<ComponentKind>(i)));
    n.push_back("density");
    n.push_back("font_variety");
    n.push_back("image_ratio");
    n.push_back("text_ratio");
    return n;
}

DifficultyWeights DifficultyWeights::defaults() {
    DifficultyWeights w;
    w.weights = {{"table", 3.0},        {"formula", 4.0},
                 {"chart", 4.0},        {"density", 2.0},
                 {"font_variety", 1.0}, {"image_ratio", 1.0}};
    return w;
}

double DifficultyWeights::weight_for(const std::string& feature) const {
    auto it = weights.find(feature);
    return it == weights.end() ? 0.5 : it->second;
}

PageFeatures page_features(const AnnotatedPage& page) {
    PageFeatures f;
    f.v.assign(kKindCount + 4, 0.0);

    double page_area = page.page_w_pt * page.page_h_pt;
    double image_area = 0;
    double total_area = 0;
    size_t text_len = 0;
    std::set<long> font_buckets;

    for (const auto& c : page.components) {
        f.v[static_cast<int>(c.kind)] += 1.0;
        double area = std::max(0.0, c.bbox_pt.x2 - c.bbox_pt.x1) *
                      std::max(0.0, c.bbox_pt.y2 - c.bbox_pt.y1);
        total_area += area;
        if (c.kind == ComponentKind::picture || c.kind == ComponentKind::chart)
            image_area += area;
        text_len += utf8::decode(c.text).size();
        // Box height is the only size cue at this layer; quantize to pt.
        font_buckets.insert(
            std::lround(c.bbox_pt.y2 - c.bbox_pt.y1));
    }

    if (page_area > 0) {
        f.v[kKindCount + 0] =
            1000.0 * page.components.size() / page_area;  // density
        f.v[kKindCount + 2] = image_area / page_area;
    }
    f.v[kKindCount + 1] = page.components.empty()
                              ? 0.0
                              : static_cast<double>(font_buckets.size());
    if (total_area > 0)
        f.v[kKindCount + 3] = std::min(1.0, text_len / (total_area / 100.0));
    return f;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

}  // namespace

std::vector<int> kmeans(const std::vector<PageFeatures>& features, int k,
                        std::uint64_t seed) {
    int n = static_cast<int>(features.size());
    if (k < 1 || k > n) throw std::invalid_argument("k out of range");

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> centers;
    std::uniform_int_distribution<int> pick(0, n - 1);
    centers.push_back(features[pick(rng)].v);
    while ((int)centers.size() < k) {
        // farthest-first: next center is the point most distant from the
        // nearest existing center
        int best = 0;
        double best_d = -1;
        for (int i = 0; i < n; ++i) {
            double d = sq_dist(features[i].v, centers[0]);
            for (const auto& c : centers)
                d = std::min(d, sq_dist(features[i].v, c));
            if (d > best_d) {
                best_d = d;
                best = i;
            }
        }
        centers.push_back(features[best].v);
    }

    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(features[i].v, centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(features[i].v, centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        std::vector<std::vector<double>> sums(
            k, std::vector<double>(features[0].v.size(), 0.0));
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            for (size_t d = 0; d < features[i].v.size(); ++d)
                sums[assign[i]][d] += features[i].v[d];
            ++counts[assign[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its center
            for (double& s : sums[c]) s /= counts[c];
            centers[c] = sums[c];
        }
    }
    return assign;
}

double difficulty_raw(const PageFeatures& features,
                      const DifficultyWeights& weights) {
    auto names = PageFeatures::names();
    double score = 0;
    for (size_t i = 0; i < features.v.size() && i < names.size(); ++i)
        score += features.v[i] * weights.weight_for(names[i]);
    return score;
}

std::vector<double> normalize_difficulty(const std::vector<double>& raw) {
    if (raw.empty()) return {};
    double lo = *std::min_element(raw.begin(), raw.end());
    double hi = *std::max_element(raw.begin(), raw.end());
    std::vector<double> out(raw.size(), 0.0);
    if (hi > lo)
        for (size_t i = 0; i < raw.size(); ++i)
            out[i] = (raw[i] - lo) / (hi - lo);
    return out;
}

std::vector<ManifestEntry> stratified_sample(
    const std::vector<BenchCandidate>& pages, int per_lang_cap,
    std::uint64_t seed, int k_clusters, const DifficultyWeights& weights) {
    std::map<std::string, std::vector<int>> by_lang;
    for (int i = 0; i < (int)pages.size(); ++i)
        by_lang[pages[i].language].push_back(i);

    std::vector<ManifestEntry> manifest;
    for (auto& [lang, pool] : by_lang) {
        int n = static_cast<int>(pool.size());

        std::vector<PageFeatures> feats;
        std::vector<double> raw;
        for (int i : pool) {
            feats.push_back(pages[i].features);
            raw.push_back(difficulty_raw(pages[i].features, weights));
        }
        std::vector<double> norm = normalize_difficulty(raw);
        int k = std::min(k_clusters, n);
        std::vector<int> clusters = kmeans(feats, k, seed);

        // ascending difficulty; stable on page order for determinism
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return norm[a] < norm[b]; });

        int t1 = n / 3, t2 = 2 * n / 3;
        std::vector<int> tercile(n, 0);
        for (int r = 0; r < n; ++r)
            tercile[order[r]] = r < t1 ? 0 : (r < t2 ? 1 : 2);

        auto emit = [&](int local_idx) {
            const BenchCandidate& c = pages[pool[local_idx]];
            manifest.push_back({c.page_id, lang, tercile[local_idx],
                                clusters[local_idx], norm[local_idx]});
        };

        if (n <= per_lang_cap) {
            for (int r : order) emit(r);
            continue;
        }

        std::mt19937_64 rng(seed ^ std::hash<std::string>{}(lang));
        int base = per_lang_cap / 3;
        int want[3] = {base, base, per_lang_cap - 2 * base};
        for (int t = 0; t < 3; ++t) {
            // bucket members by cluster, shuffled, then round-robin
            std::map<int, std::vector<int>> by_cluster;
            for (int i = 0; i < n; ++i)
                if (tercile[i] == t) by_cluster[clusters[i]].push_back(i);
            std::vector<std::vector<int>> buckets;
            for (auto& [c, members] : by_cluster) {
                std::shuffle(members.begin(), members.end(), rng);
                buckets.push_back(members);
            }
            int taken = 0;
            size_t pos = 0;
            while (taken < want[t]) {
                bool any = false;
                for (auto& b : buckets) {
                    if (pos < b.size() && taken < want[t]) {
                        emit(b[pos]);
                        ++taken;
                        any = true;
                    }
                }
                if (!any) break;  // tercile exhausted
                ++pos;
            }
        }
    }
    return manifest;
}

std::string manifest_to_jsonl(const std::vector<ManifestEntry>& manifest) {
    std::ostringstream out;
    for (const auto& e : manifest) {
        nlohmann::json j = {{"page_id", e.page_id},
                            {"language", e.language},
                            {"tercile", e.tercile},
                            {"cluster", e.cluster},
                            {"difficulty", e.difficulty}};
        out << j.dump() << '\n';
    }
    return out.str();
}

}  // namespace docpipe
