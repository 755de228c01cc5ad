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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "docpipe/lm.hpp"
#include "docpipe/quality.hpp"

using namespace docpipe;

namespace {

// Uniform distribution over a fixed alphabet; perplexity must equal its
// size on any text drawn from it.
class UniformModel : public LanguageModel {
public:
    explicit UniformModel(int vocab) : vocab_(vocab) {}
    double probability(const TokenSeq&, Token) const override {
        return 1.0 / vocab_;
    }
    int order() const override { return 1; }

private:
    int vocab_;
};

KneserNeyModel abab_model() {
    std::vector<TokenSeq> corpus;
    for (int i = 0; i < 20; ++i) corpus.push_back(tokenize_chars("abababab"));
    return KneserNeyModel::train(corpus, 5);
}

AnnotatedPage page_with(const std::string& native_text,
                        const std::string& heuristic_text) {
    AnnotatedPage page;
    if (!native_text.empty()) {
        PageComponent c;
        c.text = native_text;
        c.provenance_confidence = 1.0;
        page.components.push_back(c);
    }
    if (!heuristic_text.empty()) {
        PageComponent c;
        c.text = heuristic_text;
        c.provenance_confidence = 0.5;
        page.components.push_back(c);
    }
    return page;
}

}  // namespace

TEST_CASE("uniform model has perplexity equal to vocabulary size") {
    UniformModel m(10);
    CHECK(perplexity(m, "any text at all") == doctest::Approx(10.0));
}

TEST_CASE("training rejects bad inputs") {
    CHECK_THROWS(KneserNeyModel::train({}, 5));
    CHECK_THROWS(KneserNeyModel::train({tokenize_chars("ab")}, 1));
}

TEST_CASE("alternating corpus makes the continuation near-certain") {
    KneserNeyModel m = abab_model();
    // full order-1 context hits the raw-count level
    TokenSeq ctx = tokenize_chars("baba");
    CHECK(m.probability(ctx, U'b') > 0.9);
    CHECK(m.probability(ctx, U'b') > m.probability(ctx, U'a'));
    // shorter contexts interpolate continuation counts and still prefer b
    TokenSeq shorter = tokenize_chars("aba");
    CHECK(m.probability(shorter, U'b') > m.probability(shorter, U'a'));
}

TEST_CASE("single-token corpus degenerates to that token") {
    KneserNeyModel m = KneserNeyModel::train({tokenize_chars("aaaa")}, 5);
    CHECK(m.probability(tokenize_chars("aa"), U'a') > 0.5);
}

TEST_CASE("probabilities normalize at random contexts") {
    std::vector<TokenSeq> corpus;
    std::mt19937 rng(21);
    for (int i = 0; i < 30; ++i) {
        std::string s;
        for (int j = 0; j < 50; ++j) s += char('a' + rng() % 6);
        corpus.push_back(tokenize_chars(s));
    }
    KneserNeyModel m = KneserNeyModel::train(corpus, 5);
    for (int trial = 0; trial < 100; ++trial) {
        TokenSeq ctx;
        int len = rng() % 5;
        for (int j = 0; j < len; ++j) ctx.push_back(U'a' + rng() % 6);
        double total = m.probability(ctx, KneserNeyModel::kUnk);
        for (Token t : m.vocabulary()) total += m.probability(ctx, t);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("in-domain text scores lower perplexity than out-of-domain") {
    KneserNeyModel m = abab_model();
    CHECK(perplexity(m, "abab") < perplexity(m, "zzzz"));
}

TEST_CASE("training text beats its own shuffle") {
    std::vector<TokenSeq> corpus = {
        tokenize_chars("the cat sat on the mat and the cat slept")};
    KneserNeyModel m = KneserNeyModel::train(corpus, 5);
    std::string orig = "the cat sat on the mat and the cat slept";
    std::string shuf = orig;
    std::mt19937 rng(4);
    std::shuffle(shuf.begin(), shuf.end(), rng);
    CHECK(perplexity(m, orig) <= perplexity(m, shuf));
}

TEST_CASE("perplexity of empty text throws") {
    KneserNeyModel m = abab_model();
    CHECK_THROWS(perplexity(m, ""));
}

TEST_CASE("model serialization round-trips probabilities") {
    namespace fs = std::filesystem;
    KneserNeyModel m = abab_model();
    fs::path p = fs::temp_directory_path() / "docpipe_test_model.knlm";
    m.save(p);
    KneserNeyModel back = KneserNeyModel::load(p);
    CHECK(back.order() == m.order());
    TokenSeq ctx = tokenize_chars("ab");
    CHECK(back.probability(ctx, U'a') ==
          doctest::Approx(m.probability(ctx, U'a')));
    CHECK(perplexity(back, "abab") == doctest::Approx(perplexity(m, "abab")));
    fs::remove(p);
}

TEST_CASE("reliability is the native-signal character fraction") {
    CHECK(reliability_score(page_with(std::string(80, 'x'),
                                      std::string(20, 'y'))) ==
          doctest::Approx(0.8));
    CHECK(reliability_score(page_with(std::string(59, 'x'),
                                      std::string(41, 'y'))) ==
          doctest::Approx(0.59));
    CHECK(reliability_score(AnnotatedPage{}) == 0.0);
}

TEST_CASE("pii scan finds the canonical patterns") {
    auto email = pii_scan("contact a@b.com for details");
    REQUIRE(email.size() == 1);
    CHECK(email[0].category == PiiCategory::email);

    auto phone = pii_scan("call +1 (555) 123-4567 today");
    REQUIRE(phone.size() == 1);
    CHECK(phone[0].category == PiiCategory::phone);

    auto ssn = pii_scan("id 123-45-6789 on file");
    REQUIRE(ssn.size() == 1);
    CHECK(ssn[0].category == PiiCategory::government_id);

    CHECK(pii_scan("plain prose with no patterns at all").empty());
}

TEST_CASE("gate drops on three findings or any government id") {
    UniformModel m(10);
    AnnotatedPage three = page_with(
        "write a@b.com or c@d.org or e@f.net for help", "");
    CHECK(gate_page(three, m).verdict == Verdict::drop_pii);

    AnnotatedPage two = page_with("write a@b.com or c@d.org", "");
    CHECK(gate_page(two, m).verdict == Verdict::keep);

    AnnotatedPage gov = page_with("ssn 123-45-6789", "");
    CHECK(gate_page(gov, m).verdict == Verdict::drop_pii);
}

TEST_CASE("perplexity threshold is keep-at-boundary") {
    AnnotatedPage page = page_with("some ordinary page text", "");
    UniformModel at_tau(120);
    CHECK(gate_page(page, at_tau).verdict == Verdict::keep);
    UniformModel above(121);
    CHECK(gate_page(page, above).verdict == Verdict::drop_perplexity);
    UniformModel below(119);
    CHECK(gate_page(page, below).verdict == Verdict::keep);
}

TEST_CASE("reliability threshold is keep-at-boundary") {
    UniformModel m(10);
    AnnotatedPage at_rho =
        page_with(std::string(60, 'x'), std::string(40, 'y'));
    CHECK(gate_page(at_rho, m).verdict == Verdict::keep);
    AnnotatedPage below =
        page_with(std::string(59, 'x'), std::string(41, 'y'));
    CHECK(gate_page(below, m).verdict == Verdict::drop_reliability);
}

TEST_CASE("pii outranks the score gates in the verdict order") {
    UniformModel bad(200);  // would also fail perplexity
    AnnotatedPage page = page_with("a@b.com c@d.org e@f.net", "");
    CHECK(gate_page(page, bad).verdict == Verdict::drop_pii);
}

TEST_CASE("trigram language id picks the closer profile") {
    TrigramLangId id;
    id.add_profile("en", "the quick brown fox jumps over the lazy dog and then "
                         "the dog sleeps through the long afternoon");
    id.add_profile("de", "der schnelle braune fuchs springt ueber den faulen "
                         "hund und dann schlaeft der hund den ganzen tag");
    auto en = id.identify("the fox and the dog");
    CHECK(en.language == "en");
    auto de = id.identify("der fuchs und der hund");
    CHECK(de.language == "de");
}

TEST_CASE("blank page hook fires above the cutoff") {
    CHECK(anomalous_blank_page(0.99));
    CHECK_FALSE(anomalous_blank_page(0.9));
}
