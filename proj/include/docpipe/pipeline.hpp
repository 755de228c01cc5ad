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

#include <optional>
#include <string>
#include <vector>

#include "docpipe/diff.hpp"
#include "docpipe/eval.hpp"
#include "docpipe/lm.hpp"
#include "docpipe/quality.hpp"
#include "docpipe/render.hpp"
#include "docpipe/structure.hpp"

namespace docpipe {

struct PipelineConfig {
    int dpi = 144;
    int diff_threshold = 12;
    int min_region_area = 9;
    double containment_min = 0.7;
    double tau = 120.0;
    double rho = 0.6;
    double drift_tolerance_pt = 2.0;
    double entropy_scanned = 6.5;
    double entropy_rendered = 4.5;
    std::uint64_t seed = 7;
    int parallelism = 0;  // 0 = core count
    const LanguageModel* quality_model = nullptr;  // perplexity gate off when null
    const LanguageIdentifier* lang_id = nullptr;

    void validate() const;  // throws std::invalid_argument on bad thresholds
};

struct AnnotateInput {
    std::string id;
    std::string markup;
    // Fixture hook: classify this raster instead of the rendered page.
    std::optional<RasterPage> scan_probe;
};

struct AuditEvent {
    std::string id;
    std::string stage;   // parse, render, diff, drift, scan, gate, emit
    std::string status;  // ok or a drop reason
};

struct AnnotateOutput {
    std::string id;
    std::vector<std::string> doctag_pages;  // one serialized page each
    std::vector<std::string> markdown_pages;
};

struct AnnotateRun {
    std::vector<AnnotateOutput> outputs;  // sorted by id
    std::vector<AuditEvent> audit;
    int dropped = 0;
};

// Full differential-rendering pipeline per document. Failures isolate:
// a document that fails any stage is dropped with an audit reason and the
// batch continues. inputs = outputs + drops always holds.
AnnotateRun run_annotate(const PipelineConfig& config,
                         const std::vector<AnnotateInput>& inputs);

std::string audit_to_jsonl(const std::vector<AuditEvent>& audit);

struct EvalRunResult {
    EvalReport report;
    std::vector<std::string> unpaired;  // stems present on one side only
};

// Pairs "<stem>.md" predictions with "<stem>.doctag" ground truth.
EvalRunResult run_eval(const PipelineConfig& config,
                       const std::string& pred_dir, const std::string& gt_dir);

}  // namespace docpipe
