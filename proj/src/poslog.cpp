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

#include "docpipe/poslog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace docpipe {

PosLog parse_pos_log(const std::string& text) {
    PosLog out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::istringstream ls(line);
        std::string marker, id, kind_name;
        PosRecord rec;
        if (!(ls >> marker) || marker != "POS") {
            out.errors.push_back({lineno, "missing POS marker"});
            continue;
        }
        if (!(ls >> rec.pass >> rec.page >> id >> kind_name >> rec.x_sp >>
              rec.y_sp >> rec.w_sp >> rec.h_sp)) {
            out.errors.push_back({lineno, "expected 8 fields after POS"});
            continue;
        }
        std::string extra;
        if (ls >> extra) {
            out.errors.push_back({lineno, "trailing fields"});
            continue;
        }
        auto kind = kind_from_string(kind_name);
        if (!kind) {
            out.errors.push_back({lineno, "unknown kind '" + kind_name + "'"});
            continue;
        }
        if (rec.pass < 1 || rec.pass > 3) {
            out.errors.push_back({lineno, "pass out of range"});
            continue;
        }
        if (rec.w_sp <= 0 || rec.h_sp <= 0) {
            out.errors.push_back({lineno, "non-positive box size"});
            continue;
        }
        rec.element_id = id;
        rec.kind = *kind;
        out.records.push_back(std::move(rec));
    }
    return out;
}

double sp_to_pt(std::int64_t v_sp) { return static_cast<double>(v_sp) / 65536.0; }

PxPoint to_image_px(double x_pt, double y_pt_bottom_left,
                    const PageGeometry& geo) {
    double s = geo.dpi / 72.0;
    return {x_pt * s, (geo.page_h_pt - y_pt_bottom_left) * s};
}

StabilityReport validate_passes(const std::vector<PosRecord>& records,
                                double tolerance_pt) {
    struct Coords {
        double v[4];
    };
    std::unordered_map<std::string, Coords> pass2;
    StabilityReport report;

    for (const auto& r : records) {
        if (r.pass == 2)
            pass2[r.element_id] = {{sp_to_pt(r.x_sp), sp_to_pt(r.y_sp),
                                    sp_to_pt(r.w_sp), sp_to_pt(r.h_sp)}};
    }
    for (const auto& r : records) {
        if (r.pass != 3) continue;
        auto it = pass2.find(r.element_id);
        if (it == pass2.end()) {
            report.offenders.push_back(
                {r.element_id, std::numeric_limits<double>::infinity()});
            report.max_drift_pt = std::numeric_limits<double>::infinity();
            report.stable = false;
            continue;
        }
        double c3[4] = {sp_to_pt(r.x_sp), sp_to_pt(r.y_sp), sp_to_pt(r.w_sp),
                        sp_to_pt(r.h_sp)};
        double drift = 0;
        for (int i = 0; i < 4; ++i)
            drift = std::max(drift, std::abs(c3[i] - it->second.v[i]));
        report.max_drift_pt = std::max(report.max_drift_pt, drift);
        if (drift > tolerance_pt) {
            report.offenders.push_back({r.element_id, drift});
            report.stable = false;
        }
    }
    return report;
}

SyntheticPage assemble_synthetic_page(
    const std::vector<PosRecord>& records,
    const std::map<std::string, std::string>& texts, const PageGeometry& geo) {
    SyntheticPage out;
    out.page.page_w_pt = geo.page_w_pt;
    out.page.page_h_pt = geo.page_h_pt;

    int rank = 0;
    for (const auto& r : records) {
        if (r.pass != 3) continue;
        PageComponent c;
        c.kind = r.kind;
        double x = sp_to_pt(r.x_sp);
        double y_bottom = sp_to_pt(r.y_sp);
        double w = sp_to_pt(r.w_sp);
        double h = sp_to_pt(r.h_sp);
        c.bbox_pt = {x, geo.page_h_pt - (y_bottom + h), x + w,
                     geo.page_h_pt - y_bottom};
        auto it = texts.find(r.element_id);
        if (it != texts.end()) {
            c.text = it->second;
        } else {
            out.warnings.push_back("no text for element '" + r.element_id +
                                   "'");
        }
        c.provenance_confidence = 1.0;
        c.reading_rank = rank;
        c.source_order = rank;
        ++rank;
        out.page.components.push_back(std::move(c));
    }
    return out;
}

}  // namespace docpipe
