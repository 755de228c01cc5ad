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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "docpipe/align.hpp"

namespace docpipe {

// Structural page descriptor: one count per component kind, then density,
// font variety, image-area ratio, and text-length ratio.
struct PageFeatures {
    std::vector<double> v;

    static std::vector<std::string> names();
    bool operator==(const PageFeatures&) const = default;
};

struct DifficultyWeights {
    std::map<std::string, double> weights;

    static DifficultyWeights defaults();
    double weight_for(const std::string& feature) const;
};

PageFeatures page_features(const AnnotatedPage& page);

// Seeded farthest-first initialization followed by Lloyd iteration,
// capped at 100 rounds. Throws std::invalid_argument when k is out of
// range.
std::vector<int> kmeans(const std::vector<PageFeatures>& features, int k,
                        std::uint64_t seed);

// Weighted dot product; normalization to [0,1] happens over the pool.
double difficulty_raw(const PageFeatures& features,
                      const DifficultyWeights& weights);

// Min-max normalizes raw scores; a constant pool maps to all zeros.
std::vector<double> normalize_difficulty(const std::vector<double>& raw);

struct BenchCandidate {
    std::string page_id;
    std::string language;
    PageFeatures features;
};

struct ManifestEntry {
    std::string page_id;
    std::string language;
    int tercile = 0;  // 0 easy, 1 medium, 2 hard
    int cluster = 0;
    double difficulty = 0;
};

// Per-language difficulty terciles, cap/3 from each with the remainder
// going to hard, round-robin across clusters inside a tercile. Pools at or
// under the cap are taken whole.
std::vector<ManifestEntry> stratified_sample(
    const std::vector<BenchCandidate>& pages, int per_lang_cap,
    std::uint64_t seed, int k_clusters = 8,
    const DifficultyWeights& weights = DifficultyWeights::defaults());

std::string manifest_to_jsonl(const std::vector<ManifestEntry>& manifest);

}  // namespace docpipe
