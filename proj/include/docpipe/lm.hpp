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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace docpipe {

// Character-level tokens keep the model script-agnostic.
using Token = char32_t;
using TokenSeq = std::vector<Token>;

TokenSeq tokenize_chars(const std::string& utf8_text);

class LanguageModel {
public:
    virtual ~LanguageModel() = default;
    // P(token | context), context = up to order-1 preceding tokens.
    virtual double probability(const TokenSeq& context, Token t) const = 0;
    virtual int order() const = 0;
};

// Interpolated Kneser-Ney with absolute discount 0.75 at every level.
// Unknown tokens occupy a dedicated UNK slot at the base distribution.
class KneserNeyModel : public LanguageModel {
public:
    static constexpr double kDiscount = 0.75;
    static constexpr Token kUnk = 0xFFFFFFFF;

    static KneserNeyModel train(const std::vector<TokenSeq>& corpus,
                                int order = 5);

    double probability(const TokenSeq& context, Token t) const override;
    int order() const override { return order_; }
    size_t vocabulary_size() const { return vocab_.size(); }
    const std::set<Token>& vocabulary() const { return vocab_; }

    // Versioned binary serialization, magic header "KNLM1".
    void save(const std::filesystem::path& path) const;
    static KneserNeyModel load(const std::filesystem::path& path);

private:
    int order_ = 5;
    std::set<Token> vocab_;
    // counts_[n]: n-gram -> count (raw at the highest level, continuation
    // counts below); extensions_[n]: context -> distinct following tokens
    std::vector<std::map<TokenSeq, double>> counts_;
    std::vector<std::map<TokenSeq, double>> context_totals_;
    std::vector<std::map<TokenSeq, double>> context_distinct_;

    double prob_level(const TokenSeq& context, Token t, int level) const;
};

// exp(-(1/N) sum ln P(t_i | context)). Throws on empty text.
double perplexity(const LanguageModel& model, const TokenSeq& text);
double perplexity(const LanguageModel& model, const std::string& utf8_text);

}  // namespace docpipe
