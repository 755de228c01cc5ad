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

// One line of a typesetting position log. Coordinates are scaled points
// (65536 sp per pt) with a bottom-left page origin; (x_sp, y_sp) is the
// box's bottom-left corner.
struct PosRecord {
    std::string element_id;
    ComponentKind kind = ComponentKind::text;
    std::int64_t x_sp = 0;
    std::int64_t y_sp = 0;
    std::int64_t w_sp = 0;
    std::int64_t h_sp = 0;
    int pass = 0;  // 1..3
    int page = 0;

    bool operator==(const PosRecord&) const = default;
};

struct PageGeometry {
    double page_w_pt = 612;
    double page_h_pt = 792;
    int dpi = 144;
};

struct PosLogError {
    int line = 0;
    std::string message;
};

struct PosLog {
    std::vector<PosRecord> records;
    std::vector<PosLogError> errors;
};

// Line format: POS <pass> <page> <id> <kind> <x_sp> <y_sp> <w_sp> <h_sp>.
// Malformed lines land in errors; parsing never throws.
PosLog parse_pos_log(const std::string& text);

double sp_to_pt(std::int64_t v_sp);

// Bottom-left-origin pt point to top-left-origin pixel coordinates.
struct PxPoint {
    double x = 0;
    double y = 0;
};
PxPoint to_image_px(double x_pt, double y_pt_bottom_left,
                    const PageGeometry& geo);

struct PassDrift {
    std::string element_id;
    double drift_pt = 0;  // infinity when missing from pass 2
};

struct StabilityReport {
    bool stable = true;
    double max_drift_pt = 0;
    std::vector<PassDrift> offenders;
};

// Compares pass-2 and pass-3 coordinates per element; drift is the max
// absolute delta across x, y, w, h in pt. Pass-1 records are ignored.
StabilityReport validate_passes(const std::vector<PosRecord>& records,
                                double tolerance_pt = 2.0);

struct SyntheticPage {
    AnnotatedPage page;
    std::vector<std::string> warnings;
};

// Builds a page from pass-3 records. Components are ordered by declaration
// order (record order in the log), which is the logical reading order.
SyntheticPage assemble_synthetic_page(
    const std::vector<PosRecord>& records,
    const std::map<std::string, std::string>& texts, const PageGeometry& geo);

}  // namespace docpipe
