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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "docpipe/align.hpp"
#include "docpipe/lm.hpp"

namespace docpipe {

// Pluggable language identification contract.
class LanguageIdentifier {
public:
    virtual ~LanguageIdentifier() = default;
    struct Result {
        std::string language;
        double confidence = 0;
    };
    virtual Result identify(const std::string& text) const = 0;
};

// Built-in default: cosine similarity of character-trigram frequency
// profiles against per-language reference profiles.
class TrigramLangId : public LanguageIdentifier {
public:
    void add_profile(const std::string& language, const std::string& sample);
    Result identify(const std::string& text) const override;

private:
    std::map<std::string, std::map<std::u32string, double>> profiles_;
};

enum class PiiCategory { email, phone, government_id, financial_id };
const char* to_string(PiiCategory c);

struct PiiFinding {
    PiiCategory category;
    size_t begin = 0;  // byte span
    size_t end = 0;
};

std::vector<PiiFinding> pii_scan(const std::string& text);

// Fraction of characters tagged via markup signals (confidence >= 0.8)
// rather than heuristics. Empty page scores 0 and fails closed.
double reliability_score(const AnnotatedPage& page);

enum class Verdict { keep, drop_perplexity, drop_reliability, drop_pii };
const char* to_string(Verdict v);

struct PageQuality {
    std::string language;
    double lang_confidence = 0;
    double perplexity = 0;
    double reliability = 0;
    std::vector<PiiFinding> pii_findings;
    Verdict verdict = Verdict::keep;
};

// Boundary rule: perplexity exactly tau keeps, reliability exactly rho keeps.
// A page with >= 3 PII findings or any government-ID finding drops.
PageQuality gate_page(const AnnotatedPage& page, const LanguageModel& model,
                      double tau = 120.0, double rho = 0.6,
                      const LanguageIdentifier* lang_id = nullptr);

// Hook for anomalous visual signals: blank-area fraction above the cutoff.
bool anomalous_blank_page(double blank_area_fraction, double cutoff = 0.98);

}  // namespace docpipe
