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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "docpipe/bench.hpp"
#include "docpipe/doctag.hpp"
#include "docpipe/ingest.hpp"
#include "docpipe/pipeline.hpp"
#include "docpipe/poslog.hpp"
#include "docpipe/quality.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersions =
    "ir 1\ndoctag-grammar 1\nknlm 1\npos-log 1\n";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& data) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << data;
}

void apply_config(docpipe::PipelineConfig& cfg, const fs::path& path) {
    json j = json::parse(slurp(path));
    if (j.contains("dpi")) cfg.dpi = j["dpi"];
    if (j.contains("diff_threshold")) cfg.diff_threshold = j["diff_threshold"];
    if (j.contains("min_region_area"))
        cfg.min_region_area = j["min_region_area"];
    if (j.contains("containment_min"))
        cfg.containment_min = j["containment_min"];
    if (j.contains("tau")) cfg.tau = j["tau"];
    if (j.contains("rho")) cfg.rho = j["rho"];
    if (j.contains("drift_tolerance_pt"))
        cfg.drift_tolerance_pt = j["drift_tolerance_pt"];
    if (j.contains("seed")) cfg.seed = j["seed"];
    if (j.contains("parallelism")) cfg.parallelism = j["parallelism"];
    cfg.validate();
}

int cmd_ingest(const std::string& wat_path, const std::string& store_path) {
    std::string listing = slurp(wat_path);
    std::string name = fs::path(wat_path).filename().string();
    auto candidates = docpipe::parse_wat(listing, name, name);
    docpipe::DedupStore store(store_path);
    int kept = 0, dups = 0;
    for (const auto& c : candidates) {
        std::string canon;
        try {
            canon = docpipe::canonicalize_url(c.raw);
        } catch (const docpipe::UrlError&) {
            continue;
        }
        if (store.insert_url(canon, c.snapshot_id))
            ++kept;
        else
            ++dups;
    }
    json out = {{"candidates", candidates.size()},
                {"new", kept},
                {"duplicates", dups}};
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_annotate(const docpipe::PipelineConfig& cfg,
                 const std::vector<std::string>& files,
                 const std::string& out_dir, const std::string& audit_path) {
    std::vector<docpipe::AnnotateInput> inputs;
    for (const auto& f : files)
        inputs.push_back({fs::path(f).stem().string(), slurp(f), {}});

    docpipe::AnnotateRun run = docpipe::run_annotate(cfg, inputs);
    for (const auto& o : run.outputs) {
        for (size_t p = 0; p < o.doctag_pages.size(); ++p) {
            std::string stem = o.id + "_p" + std::to_string(p);
            spit(fs::path(out_dir) / (stem + ".doctag"), o.doctag_pages[p]);
            spit(fs::path(out_dir) / (stem + ".md"), o.markdown_pages[p]);
        }
    }
    std::string audit = docpipe::audit_to_jsonl(run.audit);
    if (audit_path.empty())
        std::cerr << audit;
    else
        spit(audit_path, audit);
    std::cout << json({{"inputs", inputs.size()},
                       {"outputs", run.outputs.size()},
                       {"dropped", run.dropped}})
                     .dump()
              << "\n";
    return 0;
}

int cmd_synth(const std::string& pos_path, const std::string& texts_path,
              const std::string& geo_str, const std::string& out_path) {
    double w = 612, h = 792;
    int dpi = 144;
    if (std::sscanf(geo_str.c_str(), "%lfx%lf@%d", &w, &h, &dpi) != 3)
        throw std::runtime_error("bad --geo, expected WxH@DPI");
    docpipe::PageGeometry geo{w, h, dpi};

    docpipe::PosLog log = docpipe::parse_pos_log(slurp(pos_path));
    for (const auto& e : log.errors)
        std::cerr << "pos line " << e.line << ": " << e.message << "\n";

    docpipe::StabilityReport stab =
        docpipe::validate_passes(log.records);
    if (!stab.stable) {
        std::cerr << "unstable passes, max drift " << stab.max_drift_pt
                  << "pt\n";
        return 2;
    }

    std::map<std::string, std::string> texts;
    if (!texts_path.empty())
        for (auto& [k, v] : json::parse(slurp(texts_path)).items())
            texts[k] = v.get<std::string>();

    docpipe::SyntheticPage page =
        docpipe::assemble_synthetic_page(log.records, texts, geo);
    for (const auto& wmsg : page.warnings) std::cerr << wmsg << "\n";
    spit(out_path, docpipe::serialize_doctag(page.page));
    return 0;
}

int cmd_filter(const docpipe::PipelineConfig& cfg,
               const std::string& model_path,
               const std::vector<std::string>& files) {
    docpipe::KneserNeyModel model = docpipe::KneserNeyModel::load(model_path);
    for (const auto& f : files) {
        docpipe::DocTagPage dt = docpipe::parse_doctag(slurp(f));
        docpipe::AnnotatedPage page;
        page.page_w_pt = dt.page_w_pt;
        page.page_h_pt = dt.page_h_pt;
        for (const auto& e : dt.elements) {
            docpipe::PageComponent c;
            if (auto k = docpipe::kind_from_string(e.tag)) c.kind = *k;
            c.text = e.content;
            page.components.push_back(std::move(c));
        }
        docpipe::PageQuality q =
            docpipe::gate_page(page, model, cfg.tau, cfg.rho);
        std::cout << json({{"file", f},
                           {"verdict", docpipe::to_string(q.verdict)},
                           {"perplexity", q.perplexity},
                           {"reliability", q.reliability}})
                         .dump()
                  << "\n";
    }
    return 0;
}

int cmd_eval(const docpipe::PipelineConfig& cfg, const std::string& pred_dir,
             const std::string& gt_dir, const std::string& out_path) {
    docpipe::EvalRunResult res = docpipe::run_eval(cfg, pred_dir, gt_dir);
    for (const auto& u : res.unpaired) std::cerr << "unpaired: " << u << "\n";
    spit(out_path, docpipe::report_to_json(res.report));
    fs::path csv = fs::path(out_path).replace_extension(".csv");
    spit(csv, docpipe::report_to_csv(res.report));
    std::cout << json({{"pages", res.report.total.pages},
                       {"overall", res.report.total.overall}})
                     .dump()
              << "\n";
    return 0;
}

int cmd_bench(const std::string& pages_path, int cap, int k,
              std::uint64_t seed, const std::string& out_path) {
    json j = json::parse(slurp(pages_path));
    std::vector<docpipe::BenchCandidate> candidates;
    for (const auto& row : j) {
        docpipe::BenchCandidate c;
        c.page_id = row.at("page_id");
        c.language = row.value("language", "und");
        docpipe::DocTagPage dt =
            docpipe::parse_doctag(row.at("doctag").get<std::string>());
        docpipe::AnnotatedPage page;
        for (const auto& e : dt.elements) {
            docpipe::PageComponent pc;
            if (auto kk = docpipe::kind_from_string(e.tag)) pc.kind = *kk;
            pc.text = e.content;
            pc.bbox_pt = {e.loc[0] * dt.page_w_pt / 1000.0,
                          e.loc[1] * dt.page_h_pt / 1000.0,
                          e.loc[2] * dt.page_w_pt / 1000.0,
                          e.loc[3] * dt.page_h_pt / 1000.0};
            page.components.push_back(std::move(pc));
        }
        c.features = docpipe::page_features(page);
        candidates.push_back(std::move(c));
    }
    auto manifest = docpipe::stratified_sample(candidates, cap, seed, k);
    spit(out_path, docpipe::manifest_to_jsonl(manifest));
    std::cout << json({{"pages", candidates.size()},
                       {"sampled", manifest.size()}})
                     .dump()
              << "\n";
    return 0;
}

int cmd_render(const std::string& in_path, int dpi,
               const std::string& palette_path, const std::string& out_pattern) {
    docpipe::DocumentIR ir = docpipe::ir_from_json(slurp(in_path));
    docpipe::ColorPalette palette = docpipe::ColorPalette::standard();
    const docpipe::ColorPalette* colorize = nullptr;
    if (!palette_path.empty()) colorize = &palette;
    docpipe::RenderResult r = docpipe::toy_render(ir, dpi, colorize);
    for (size_t p = 0; p < r.pages.size(); ++p) {
        char buf[512];
        std::snprintf(buf, sizeof buf, out_pattern.c_str(), (int)p);
        docpipe::write_png(buf, r.pages[p]);
    }
    std::cout << json({{"pages", r.pages.size()}}).dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"document annotation and evaluation pipeline"};
    app.set_version_flag("--version", std::string(kVersions));

    std::string config_path;
    app.add_option("--config", config_path, "JSON config overriding defaults")
        ->check(CLI::ExistingFile);

    docpipe::PipelineConfig cfg;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "scan URL listings into the dedup store");
    std::string wat_path, store_path = "dedup.bin";
    ingest->add_option("--wat", wat_path, "listing file")->required();
    ingest->add_option("--store", store_path, "dedup store path");

    // annotate
    auto* annotate = app.add_subcommand("annotate", "differential-rendering annotation");
    std::vector<std::string> annotate_files;
    std::string annotate_out = "out", audit_path;
    annotate->add_option("files", annotate_files, "IR markup documents")
        ->required();
    annotate->add_option("--out", annotate_out, "output directory");
    annotate->add_option("--audit", audit_path, "audit JSONL path");

    // synth-annotate
    auto* synth = app.add_subcommand("synth-annotate", "position-log annotation");
    std::string pos_path, texts_path, geo_str = "612x792@144",
                           synth_out = "page.doctag";
    synth->add_option("--pos", pos_path, "position log")->required();
    synth->add_option("--texts", texts_path, "element text JSON");
    synth->add_option("--geo", geo_str, "WxH@DPI page geometry");
    synth->add_option("--out", synth_out, "output path");

    // filter
    auto* filter = app.add_subcommand("filter", "quality gate over annotated pages");
    std::string model_path;
    std::vector<std::string> filter_files;
    filter->add_option("--model", model_path, "language model file")->required();
    filter->add_option("files", filter_files, "doctag pages")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
    std::string pred_dir, gt_dir, report_path = "report.json";
    eval->add_option("--pred-dir", pred_dir)->required();
    eval->add_option("--gt-dir", gt_dir)->required();
    eval->add_option("--out", report_path);

    // bench
    auto* bench = app.add_subcommand("bench", "difficulty-stratified sampling");
    std::string pages_path, manifest_path = "manifest.jsonl";
    int cap = 100, k = 8;
    std::uint64_t seed = 7;
    bench->add_option("--pages", pages_path, "page index JSON")->required();
    bench->add_option("--cap", cap, "per-language cap");
    bench->add_option("--k", k, "cluster count");
    bench->add_option("--seed", seed, "sampling seed");
    bench->add_option("--out", manifest_path);

    // render
    auto* render = app.add_subcommand("render", "rasterize an IR document");
    std::string render_in, render_palette, render_out = "page_%d.png";
    int render_dpi = 144;
    render->add_option("--in", render_in, "IR JSON")->required();
    render->add_option("--dpi", render_dpi)->check(CLI::IsMember({72, 96, 144, 300}));
    render->add_option("--palette", render_palette, "palette JSON (enables colorize)");
    render->add_option("--out", render_out, "printf-style page pattern");

    app.require_subcommand(0, 1);
    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) apply_config(cfg, config_path);
        if (*ingest) return cmd_ingest(wat_path, store_path);
        if (*annotate)
            return cmd_annotate(cfg, annotate_files, annotate_out, audit_path);
        if (*synth) return cmd_synth(pos_path, texts_path, geo_str, synth_out);
        if (*filter) return cmd_filter(cfg, model_path, filter_files);
        if (*eval) return cmd_eval(cfg, pred_dir, gt_dir, report_path);
        if (*bench)
            return cmd_bench(pages_path, cap, k, seed, manifest_path);
        if (*render)
            return cmd_render(render_in, render_dpi, render_palette,
                              render_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout << app.help();
    return 0;
}
