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

#include "docpipe/lm.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "docpipe/utf8.hpp"

namespace docpipe {

TokenSeq tokenize_chars(const std::string& utf8_text) {
    TokenSeq out;
    for (char32_t cp : utf8::decode(utf8_text))
        if (cp != U'\r') out.push_back(cp);
    return out;
}

KneserNeyModel KneserNeyModel::train(const std::vector<TokenSeq>& corpus,
                                     int order) {
    if (order < 2) throw std::invalid_argument("kn order must be >= 2");
    bool empty = true;
    for (const auto& seq : corpus)
        if (!seq.empty()) empty = false;
    if (corpus.empty() || empty) throw std::invalid_argument("empty corpus");

    KneserNeyModel m;
    m.order_ = order;

    // raw n-gram counts, n = 1..order
    std::vector<std::map<TokenSeq, double>> raw(order + 1);
    for (const auto& seq : corpus) {
        for (Token t : seq) m.vocab_.insert(t);
        for (int n = 1; n <= order; ++n) {
            if ((int)seq.size() < n) continue;
            for (size_t i = 0; i + n <= seq.size(); ++i)
                raw[n][TokenSeq(seq.begin() + i, seq.begin() + i + n)] += 1;
        }
    }

    m.counts_.resize(order);
    m.context_totals_.resize(order);
    m.context_distinct_.resize(order);

    // highest level uses raw counts
    m.counts_[order - 1] = raw[order];
    // lower levels use continuation counts (distinct left extensions)
    for (int n = order - 1; n >= 1; --n) {
        auto& table = m.counts_[n - 1];
        for (const auto& [gram, c] : raw[n + 1]) {
            (void)c;
            table[TokenSeq(gram.begin() + 1, gram.end())] += 1;
        }
        // short corpora may produce no (n+1)-grams at all
        if (table.empty()) table = raw[n];
    }

    for (int n = 1; n <= order; ++n) {
        for (const auto& [gram, c] : m.counts_[n - 1]) {
            TokenSeq ctx(gram.begin(), gram.end() - 1);
            m.context_totals_[n - 1][ctx] += c;
            m.context_distinct_[n - 1][ctx] += 1;
        }
    }
    return m;
}

double KneserNeyModel::prob_level(const TokenSeq& context, Token t,
                                  int level) const {
    if (level == 0) return 1.0 / (double(vocab_.size()) + 1.0);

    auto tot_it = context_totals_[level - 1].find(context);
    TokenSeq shorter(context.empty() ? context
                                     : TokenSeq(context.begin() + 1,
                                                context.end()));
    if (tot_it == context_totals_[level - 1].end() || tot_it->second <= 0)
        return prob_level(shorter, t, level - 1);

    double tot = tot_it->second;
    TokenSeq gram = context;
    gram.push_back(t);
    auto c_it = counts_[level - 1].find(gram);
    double c = c_it == counts_[level - 1].end() ? 0.0 : c_it->second;
    double distinct = context_distinct_[level - 1].at(context);
    double hi = std::max(c - kDiscount, 0.0) / tot;
    double lambda = kDiscount * distinct / tot;
    return hi + lambda * prob_level(shorter, t, level - 1);
}

double KneserNeyModel::probability(const TokenSeq& context, Token t) const {
    TokenSeq ctx = context;
    if ((int)ctx.size() > order_ - 1)
        ctx = TokenSeq(ctx.end() - (order_ - 1), ctx.end());
    return prob_level(ctx, t, int(ctx.size()) + 1);
}

double perplexity(const LanguageModel& model, const TokenSeq& text) {
    if (text.empty()) throw std::invalid_argument("empty text");
    double log_sum = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        size_t ctx_len = std::min<size_t>(i, model.order() - 1);
        TokenSeq ctx(text.begin() + (i - ctx_len), text.begin() + i);
        double p = model.probability(ctx, text[i]);
        log_sum += std::log(std::max(p, 1e-300));
    }
    return std::exp(-log_sum / double(text.size()));
}

double perplexity(const LanguageModel& model, const std::string& utf8_text) {
    return perplexity(model, tokenize_chars(utf8_text));
}

namespace {

void write_u32(std::ostream& os, uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}
void write_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}
uint32_t read_u32(std::istream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double read_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

void write_table(std::ostream& os, const std::map<TokenSeq, double>& t) {
    write_u32(os, static_cast<uint32_t>(t.size()));
    for (const auto& [gram, c] : t) {
        write_u32(os, static_cast<uint32_t>(gram.size()));
        for (Token tok : gram) write_u32(os, tok);
        write_f64(os, c);
    }
}

std::map<TokenSeq, double> read_table(std::istream& is) {
    std::map<TokenSeq, double> t;
    uint32_t n = read_u32(is);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t len = read_u32(is);
        TokenSeq gram(len);
        for (auto& tok : gram) tok = read_u32(is);
        double c = read_f64(is);
        t.emplace(std::move(gram), c);
    }
    return t;
}

}  // namespace

void KneserNeyModel::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.write("KNLM1", 5);
    write_u32(os, static_cast<uint32_t>(order_));
    write_u32(os, static_cast<uint32_t>(vocab_.size()));
    for (Token t : vocab_) write_u32(os, t);
    for (int n = 0; n < order_; ++n) {
        write_table(os, counts_[n]);
        write_table(os, context_totals_[n]);
        write_table(os, context_distinct_[n]);
    }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

KneserNeyModel KneserNeyModel::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    char magic[5];
    is.read(magic, 5);
    if (!is || std::string_view(magic, 5) != "KNLM1")
        throw std::runtime_error("bad model magic: " + path.string());
    KneserNeyModel m;
    m.order_ = static_cast<int>(read_u32(is));
    uint32_t vs = read_u32(is);
    for (uint32_t i = 0; i < vs; ++i) m.vocab_.insert(read_u32(is));
    m.counts_.resize(m.order_);
    m.context_totals_.resize(m.order_);
    m.context_distinct_.resize(m.order_);
    for (int n = 0; n < m.order_; ++n) {
        m.counts_[n] = read_table(is);
        m.context_totals_[n] = read_table(is);
        m.context_distinct_[n] = read_table(is);
    }
    if (!is) throw std::runtime_error("truncated model: " + path.string());
    return m;
}

}  // namespace docpipe
