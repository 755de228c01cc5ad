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

#include "docpipe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "docpipe/align.hpp"
#include "docpipe/doctag.hpp"

namespace docpipe {

void PipelineConfig::validate() const {
    if (dpi != 72 && dpi != 96 && dpi != 144 && dpi != 300)
        throw std::invalid_argument("dpi must be one of 72, 96, 144, 300");
    if (diff_threshold < 1 || diff_threshold > 255)
        throw std::invalid_argument("diff_threshold outside [1,255]");
    if (containment_min <= 0 || containment_min > 1)
        throw std::invalid_argument("containment_min outside (0,1]");
    if (tau <= 0) throw std::invalid_argument("tau must be positive");
    if (rho < 0 || rho > 1) throw std::invalid_argument("rho outside [0,1]");
    if (drift_tolerance_pt < 0)
        throw std::invalid_argument("drift tolerance must be non-negative");
    if (entropy_rendered >= entropy_scanned)
        throw std::invalid_argument("entropy bounds out of order");
}

namespace {

struct DocResult {
    std::optional<AnnotateOutput> output;
    std::vector<AuditEvent> audit;
};

DocResult annotate_one(const PipelineConfig& config,
                       const AnnotateInput& input) {
    DocResult res;
    auto ok = [&](const std::string& stage) {
        res.audit.push_back({input.id, stage, "ok"});
    };
    auto drop = [&](const std::string& stage, const std::string& reason) {
        res.audit.push_back({input.id, stage, reason});
    };

    DocumentIR ir;
    try {
        ir = parse_structure(input.markup);
    } catch (const ParseError&) {
        drop("parse", "parse_error");
        return res;
    }
    ok("parse");

    ColorPalette palette = ColorPalette::standard();
    try {
        inject_colors(ir, palette);
    } catch (const PaletteError&) {
        drop("render", "palette_gap");
        return res;
    }

    RenderResult base = toy_render(ir, config.dpi);
    RenderResult colorized = toy_render(ir, config.dpi, &palette);
    // Second uncolorized pass; layout is deterministic so drift should be 0.
    RenderResult base_b = toy_render(ir, config.dpi);
    ok("render");

    if (input.scan_probe) {
        if (classify_scanned(*input.scan_probe, config.entropy_scanned,
                             config.entropy_rendered) == PageClass::scanned) {
            drop("scan", "scanned");
            return res;
        }
    }
    ok("scan");

    AnnotateOutput out;
    out.id = input.id;
    double px_to_pt = 72.0 / config.dpi;

    for (size_t p = 0; p < base.pages.size(); ++p) {
        ChangeMask mask = diff_pages(base.pages[p], colorized.pages[p],
                                     palette, config.diff_threshold);
        std::vector<RegionDetection> regions =
            extract_regions(mask, palette, config.min_region_area);

        DriftReport drift =
            detect_drift(base.pages[p], base_b.pages[p], regions);
        if (drift.excluded) {
            drop("drift", "drift_excluded");
            return res;
        }

        std::vector<RegionPt> regions_pt;
        for (const auto& r : regions) {
            RegionPt rp;
            rp.kind = r.kind;
            rp.bbox_pt = {r.x1 * px_to_pt, r.y1 * px_to_pt, r.x2 * px_to_pt,
                          r.y2 * px_to_pt};
            regions_pt.push_back(rp);
        }
        // Pair each region with the GT component whose box contains its
        // center; source order then survives word assignment.
        {
            for (auto& rp : regions_pt) {
                double cx = (rp.bbox_pt.x1 + rp.bbox_pt.x2) / 2;
                double cy = (rp.bbox_pt.y1 + rp.bbox_pt.y2) / 2;
                for (const auto& gc : base.components) {
                    if (gc.page != (int)p || gc.kind != rp.kind) continue;
                    if (cx >= gc.box_pt.x1 && cx <= gc.box_pt.x2 &&
                        cy >= gc.box_pt.y1 && cy <= gc.box_pt.y2) {
                        rp.source_order = gc.component_index;
                        if (gc.component_index >= 0 &&
                            gc.component_index < (int)ir.components.size()) {
                            const auto& comp =
                                ir.components[gc.component_index];
                            if (comp.table_grid)
                                rp.table_grid = comp.table_grid;
                        }
                        break;
                    }
                }
            }
        }

        std::vector<WordBox> words;
        for (const auto& w : base.words) {
            if (w.page != (int)p) continue;
            words.push_back({w.text, w.box_pt, w.order});
        }

        AnnotatedPage page =
            assign_words(words, regions_pt, 612, 792, config.containment_min,
                         ir.language_hint);
        rank_components(page);

        if (config.quality_model) {
            PageQuality q = gate_page(page, *config.quality_model, config.tau,
                                      config.rho, config.lang_id);
            if (q.verdict != Verdict::keep) {
                drop("gate", to_string(q.verdict));
                return res;
            }
        }

        DocTagPage dt = to_doctag(page);
        out.doctag_pages.push_back(serialize_doctag(dt));
        out.markdown_pages.push_back(export_page(dt, ExportFormat::markdown));
    }
    ok("gate");
    ok("emit");
    res.output = std::move(out);
    return res;
}

}  // namespace

AnnotateRun run_annotate(const PipelineConfig& config,
                         const std::vector<AnnotateInput>& inputs) {
    config.validate();
    AnnotateRun run;

    unsigned threads = config.parallelism > 0
                           ? config.parallelism
                           : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<size_t>(1, inputs.size()));

    std::vector<DocResult> results(inputs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= inputs.size()) return;
            try {
                results[i] = annotate_one(config, inputs[i]);
            } catch (const std::exception& e) {
                results[i].output.reset();
                results[i].audit.push_back(
                    {inputs[i].id, "internal", std::string("error:") + e.what()});
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (auto& r : results) {
        for (auto& e : r.audit) run.audit.push_back(std::move(e));
        if (r.output)
            run.outputs.push_back(std::move(*r.output));
        else
            ++run.dropped;
    }
    std::sort(run.outputs.begin(), run.outputs.end(),
              [](const AnnotateOutput& a, const AnnotateOutput& b) {
                  return a.id < b.id;
              });
    return run;
}

std::string audit_to_jsonl(const std::vector<AuditEvent>& audit) {
    std::ostringstream out;
    for (const auto& e : audit) {
        nlohmann::json j = {
            {"id", e.id}, {"stage", e.stage}, {"status", e.status}};
        out << j.dump() << '\n';
    }
    return out.str();
}

EvalRunResult run_eval(const PipelineConfig& config,
                       const std::string& pred_dir,
                       const std::string& gt_dir) {
    namespace fs = std::filesystem;
    config.validate();
    EvalRunResult res;

    std::map<std::string, fs::path> preds, gts;
    if (fs::exists(pred_dir))
        for (const auto& f : fs::directory_iterator(pred_dir))
            if (f.path().extension() == ".md")
                preds[f.path().stem().string()] = f.path();
    if (fs::exists(gt_dir))
        for (const auto& f : fs::directory_iterator(gt_dir))
            if (f.path().extension() == ".doctag")
                gts[f.path().stem().string()] = f.path();

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    std::vector<PageScores> rows;
    for (const auto& [stem, gt_path] : gts) {
        auto it = preds.find(stem);
        if (it == preds.end()) {
            res.unpaired.push_back(stem + ".doctag");
            continue;
        }
        DocTagPage gt = parse_doctag(slurp(gt_path));
        rows.push_back(evaluate_page(slurp(it->second), gt, stem));
    }
    for (const auto& [stem, p] : preds)
        if (!gts.count(stem)) res.unpaired.push_back(stem + ".md");
    std::sort(res.unpaired.begin(), res.unpaired.end());

    res.report = build_report(std::move(rows));
    return res;
}

}  // namespace docpipe
