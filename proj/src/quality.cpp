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

#include "docpipe/quality.hpp"

#include <cmath>
#include <regex>

#include "docpipe/utf8.hpp"

namespace docpipe {

void TrigramLangId::add_profile(const std::string& language,
                                const std::string& sample) {
    auto cps = utf8::decode(sample);
    auto& prof = profiles_[language];
    for (size_t i = 0; i + 3 <= cps.size(); ++i)
        prof[std::u32string(cps.begin() + i, cps.begin() + i + 3)] += 1;
    double norm = 0;
    for (const auto& [k, v] : prof) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0)
        for (auto& [k, v] : prof) v /= norm;
}

LanguageIdentifier::Result TrigramLangId::identify(
    const std::string& text) const {
    auto cps = utf8::decode(text);
    std::map<std::u32string, double> tf;
    for (size_t i = 0; i + 3 <= cps.size(); ++i)
        tf[std::u32string(cps.begin() + i, cps.begin() + i + 3)] += 1;
    double norm = 0;
    for (const auto& [k, v] : tf) norm += v * v;
    norm = std::sqrt(norm);

    Result best;
    for (const auto& [lang, prof] : profiles_) {
        double dot = 0;
        for (const auto& [gram, w] : tf) {
            auto it = prof.find(gram);
            if (it != prof.end()) dot += w * it->second;
        }
        double cos = norm > 0 ? dot / norm : 0;
        if (cos > best.confidence) best = {lang, cos};
    }
    return best;
}

const char* to_string(PiiCategory c) {
    switch (c) {
        case PiiCategory::email: return "email";
        case PiiCategory::phone: return "phone";
        case PiiCategory::government_id: return "government_id";
        case PiiCategory::financial_id: return "financial_id";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::keep: return "keep";
        case Verdict::drop_perplexity: return "drop_perplexity";
        case Verdict::drop_reliability: return "drop_reliability";
        case Verdict::drop_pii: return "drop_pii";
    }
    return "?";
}

namespace {

struct Detector {
    PiiCategory category;
    std::regex pattern;
};

const std::vector<Detector>& detectors() {
    static const std::vector<Detector> d = {
        {PiiCategory::email,
         std::regex(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})")},
        // US SSN shape as the default government-ID pattern; must run
        // before the looser phone detector, which would claim the span
        {PiiCategory::government_id,
         std::regex(R"(\b\d{3}-\d{2}-\d{4}\b)")},
        // international numbers with separators, 7+ digits
        {PiiCategory::phone,
         std::regex(R"(\+?\d[\d\s().-]{6,18}\d)")},
        // IBAN-like identifiers
        {PiiCategory::financial_id,
         std::regex(R"(\b[A-Z]{2}\d{2}[A-Z0-9]{11,30}\b)")},
    };
    return d;
}

bool overlaps(const std::vector<PiiFinding>& fs, size_t b, size_t e) {
    for (const auto& f : fs)
        if (b < f.end && f.begin < e) return true;
    return false;
}

}  // namespace

std::vector<PiiFinding> pii_scan(const std::string& text) {
    std::vector<PiiFinding> findings;
    for (const auto& det : detectors()) {
        auto begin = std::sregex_iterator(text.begin(), text.end(), det.pattern);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            size_t b = it->position(), e = b + it->length();
            if (!overlaps(findings, b, e))
                findings.push_back({det.category, b, e});
        }
    }
    return findings;
}

double reliability_score(const AnnotatedPage& page) {
    size_t native = 0, total = 0;
    for (const auto& c : page.components) {
        size_t n = utf8::decode(c.text).size();
        total += n;
        if (c.provenance_confidence >= 0.8) native += n;
    }
    if (total == 0) return 0.0;
    return double(native) / double(total);
}

bool anomalous_blank_page(double blank_area_fraction, double cutoff) {
    return blank_area_fraction > cutoff;
}

PageQuality gate_page(const AnnotatedPage& page, const LanguageModel& model,
                      double tau, double rho,
                      const LanguageIdentifier* lang_id) {
    PageQuality q;
    std::string text;
    for (const auto& c : page.components) {
        if (!text.empty()) text += '\n';
        text += c.text;
    }
    if (lang_id) {
        auto r = lang_id->identify(text);
        q.language = r.language;
        q.lang_confidence = r.confidence;
    } else if (page.language) {
        q.language = *page.language;
        q.lang_confidence = 1.0;
    }

    TokenSeq toks = tokenize_chars(text);
    q.perplexity = toks.empty()
                       ? std::numeric_limits<double>::infinity()
                       : perplexity(model, toks);
    q.reliability = reliability_score(page);
    q.pii_findings = pii_scan(text);

    bool gov_id = false;
    for (const auto& f : q.pii_findings)
        if (f.category == PiiCategory::government_id) gov_id = true;

    if (q.pii_findings.size() >= 3 || gov_id)
        q.verdict = Verdict::drop_pii;
    else if (q.perplexity - tau > 1e-9)  // boundary keeps despite exp/log noise
        q.verdict = Verdict::drop_perplexity;
    else if (q.reliability < rho)
        q.verdict = Verdict::drop_reliability;
    else
        q.verdict = Verdict::keep;
    return q;
}

}  // namespace docpipe
