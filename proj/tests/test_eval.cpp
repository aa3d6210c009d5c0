#include <doctest.h>

#include <cmath>
#include <random>

#include "opsumm/errors.hpp"
#include "opsumm/eval.hpp"

using namespace opsumm;

namespace {

// Brute-force clipped n-gram overlap: scan-count every distinct candidate
// n-gram in both sequences, no hash maps shared with the implementation.
double oracle_ngram_overlap(const std::vector<std::string>& cand,
                            const std::vector<std::string>& ref, std::size_t n) {
    auto grams = [n](const std::vector<std::string>& tokens) {
        std::vector<std::vector<std::string>> out;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i)
            out.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                             tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
        return out;
    };
    const auto cand_grams = grams(cand);
    const auto ref_grams = grams(ref);
    double overlap = 0;
    std::vector<bool> counted(cand_grams.size(), false);
    for (std::size_t i = 0; i < cand_grams.size(); ++i) {
        if (counted[i]) continue;
        std::size_t in_cand = 0, in_ref = 0;
        for (std::size_t j = 0; j < cand_grams.size(); ++j)
            if (cand_grams[j] == cand_grams[i]) {
                ++in_cand;
                counted[j] = true;
            }
        for (const auto& gram : ref_grams)
            if (gram == cand_grams[i]) ++in_ref;
        overlap += static_cast<double>(std::min(in_cand, in_ref));
    }
    return overlap;
}

// Quadratic full-matrix LCS.
std::size_t oracle_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::vector<std::size_t>> dp(a.size() + 1,
                                             std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                            : std::max(dp[i - 1][j], dp[i][j - 1]);
    return dp[a.size()][b.size()];
}

double f1_of(double overlap, double cand, double ref) {
    const double p = cand > 0 ? overlap / cand : 0;
    const double r = ref > 0 ? overlap / ref : 0;
    return p + r > 0 ? 2 * p * r / (p + r) : 0;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::vector<std::string> random_tokens(std::mt19937& rng, std::size_t max_len) {
    static const std::vector<std::string> vocab = {"the", "cat", "sat", "ran", "a", "b",
                                                   "c",   "d",   "dog", "mat", "on", "x"};
    std::vector<std::string> tokens(rng() % (max_len + 1));
    for (auto& t : tokens) t = vocab[rng() % vocab.size()];
    return tokens;
}

// Full-enumeration Wilcoxon oracle, straight from the definition.
double oracle_wilcoxon_p(std::vector<double> diffs) {
    const std::size_t m = diffs.size();
    std::vector<double> mags(m);
    for (std::size_t i = 0; i < m; ++i) mags[i] = std::abs(diffs[i]);
    std::vector<double> ranks(m);
    for (std::size_t i = 0; i < m; ++i) {
        double below = 0, equal = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (mags[j] < mags[i]) ++below;
            if (mags[j] == mags[i]) ++equal;
        }
        ranks[i] = below + (equal + 1) / 2.0;
    }
    double total = 0, w_plus = 0;
    for (std::size_t i = 0; i < m; ++i) {
        total += ranks[i];
        if (diffs[i] > 0) w_plus += ranks[i];
    }
    const double w = std::min(w_plus, total - w_plus);
    std::size_t at_most = 0;
    const std::size_t patterns = std::size_t{1} << m;
    for (std::size_t mask = 0; mask < patterns; ++mask) {
        double wp = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::size_t{1} << i)) wp += ranks[i];
        if (std::min(wp, total - wp) <= w + 1e-12) ++at_most;
    }
    return static_cast<double>(at_most) / static_cast<double>(patterns);
}

}  // namespace

TEST_CASE("tokenize_for_rouge lowercases and strips punctuation") {
    CHECK(tokenize_for_rouge("The cat.") == std::vector<std::string>{"the", "cat"});
    CHECK(tokenize_for_rouge("").empty());
    CHECK(tokenize_for_rouge("5G-ready!") == std::vector<std::string>{"5g", "ready"});
}

TEST_CASE("rouge hand cases") {
    CHECK(rouge_n("the cat sat", "the cat sat", 1).f1 == doctest::Approx(1.0));
    CHECK(rouge_n("aa bb", "cc dd", 1).f1 == doctest::Approx(0.0));

    auto r1 = rouge_n("the cat sat", "the cat ran", 1);
    CHECK(r1.precision == doctest::Approx(2.0 / 3.0));
    CHECK(r1.recall == doctest::Approx(2.0 / 3.0));
    CHECK(r1.f1 == doctest::Approx(2.0 / 3.0));

    CHECK(rouge_l("same words here", "same words here").f1 == doctest::Approx(1.0));
    auto rl = rouge_l("a b c d", "a c b d");
    CHECK(rl.f1 == doctest::Approx(3.0 / 4.0));
    CHECK(rouge_l("", "a b").f1 == doctest::Approx(0.0));
    CHECK(rouge_l("a b", "").precision == doctest::Approx(0.0));
}

TEST_CASE("rouge agrees with brute-force oracles on random pairs") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cand = random_tokens(rng, 60);
        const auto ref = random_tokens(rng, 60);
        const std::string cand_text = join(cand), ref_text = join(ref);

        for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
            const double cand_total =
                cand.size() >= n ? static_cast<double>(cand.size() - n + 1) : 0;
            const double ref_total = ref.size() >= n ? static_cast<double>(ref.size() - n + 1) : 0;
            const double expected =
                (cand_total > 0 && ref_total > 0)
                    ? f1_of(oracle_ngram_overlap(cand, ref, n), cand_total, ref_total)
                    : 0.0;
            CHECK(rouge_n(cand_text, ref_text, n).f1 == doctest::Approx(expected).epsilon(1e-9));
        }
        const double expected_l =
            (cand.empty() || ref.empty())
                ? 0.0
                : f1_of(static_cast<double>(oracle_lcs(cand, ref)),
                        static_cast<double>(cand.size()), static_cast<double>(ref.size()));
        CHECK(rouge_l(cand_text, ref_text).f1 == doctest::Approx(expected_l).epsilon(1e-9));
    }
}

TEST_CASE("rouge precision/recall symmetry and recall monotonicity") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::string a = join(random_tokens(rng, 30));
        const std::string b = join(random_tokens(rng, 30));
        CHECK(rouge_n(a, b, 1).precision == doctest::Approx(rouge_n(b, a, 1).recall));
        CHECK(rouge_n(a, b, 2).precision == doctest::Approx(rouge_n(b, a, 2).recall));

        const auto ref_tokens = tokenize_for_rouge(b);
        if (!ref_tokens.empty() && !a.empty()) {
            const double before = rouge_n(a, b, 1).recall;
            CHECK(rouge_n(a + " " + ref_tokens[0], b, 1).recall >= before);
        }
    }
}

TEST_CASE("split_sentences boundaries and guards") {
    CHECK(split_sentences("Good phone. Buy it!") ==
          std::vector<std::string>{"Good phone.", "Buy it!"});
    CHECK(split_sentences("It costs Rs. 500 only.") ==
          std::vector<std::string>{"It costs Rs. 500 only."});
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("e.g. This one. And that?") ==
          std::vector<std::string>{"e.g. This one.", "And that?"});
    CHECK(split_sentences("No trailing punctuation") ==
          std::vector<std::string>{"No trailing punctuation"});
    // lowercase continuation is not a boundary
    CHECK(split_sentences("It broke. again and again").size() == 1);
}

TEST_CASE("judge_dimension parses the score line") {
    ScriptedBackend backend({{"fluency", "The grammar is clean.\nScore: 4"}});
    auto score = judge_dimension(backend, "A fine summary.", JudgeDimension::Fluency);
    CHECK(score.score == 4);
    CHECK(score.dimension == JudgeDimension::Fluency);
    CHECK(score.raw_response.find("Score: 4") != std::string::npos);
    REQUIRE(backend.call_count() == 1);
    CHECK(backend.calls()[0].user_prompt.find("A fine summary.") != std::string::npos);
}

TEST_CASE("judge_dimension rejects unparseable and out-of-range responses") {
    ScriptedBackend no_score({{"coherence", "great summary"}});
    CHECK_THROWS_AS(judge_dimension(no_score, "text", JudgeDimension::Coherence),
                    JudgeParseError);
    ScriptedBackend out_of_range({{"fluency", "Score: 6"}});
    CHECK_THROWS_AS(judge_dimension(out_of_range, "text", JudgeDimension::Fluency),
                    JudgeParseError);
    try {
        ScriptedBackend bad({{"fluency", "no verdict at all"}});
        judge_dimension(bad, "text", JudgeDimension::Fluency);
    } catch (const JudgeParseError& e) {
        CHECK(e.raw_response() == "no verdict at all");
    }
}

TEST_CASE("booook_score_lite counts clean sentences") {
    SUBCASE("all NONE") {
        ScriptedBackend judge({{"sentence:", "NONE"}});
        CHECK(booook_score_lite(judge, "One. Two! Three? Four.") == doctest::Approx(1.0));
        CHECK(judge.call_count() == 4);
    }
    SUBCASE("three of four clean") {
        ScriptedBackend judge({{"Two!", "duplication"}, {"sentence:", "NONE"}});
        CHECK(booook_score_lite(judge, "One. Two! Three? Four.") == doctest::Approx(0.75));
    }
    SUBCASE("single errored sentence scores zero") {
        ScriptedBackend judge({{"sentence:", "duplication"}});
        CHECK(booook_score_lite(judge, "Only one sentence here.") == doctest::Approx(0.0));
    }
    SUBCASE("unparseable verdict counts as errored") {
        ScriptedBackend judge({{"sentence:", "something odd"}});
        CHECK(booook_score_lite(judge, "Only one sentence here.") == doctest::Approx(0.0));
    }
}

TEST_CASE("wilcoxon hand case and degenerate input") {
    auto result = wilcoxon_signed_rank({2, 4, 6}, {1, 2, 3});  // diffs +1 +2 +3
    CHECK(result.statistic == doctest::Approx(0.0));
    CHECK(result.p_value == doctest::Approx(0.25));

    CHECK_THROWS_AS(wilcoxon_signed_rank({1, 2}, {1, 2}), PreconditionError);
    CHECK_THROWS_AS(wilcoxon_signed_rank({1}, {1, 2}), PreconditionError);
}

TEST_CASE("wilcoxon exact p matches the enumeration oracle for m <= 8") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 1 + rng() % 8;
        std::vector<double> a(m), b(m), diffs(m);
        for (std::size_t i = 0; i < m; ++i) {
            b[i] = static_cast<double>(rng() % 100);
            double d = 0;
            while (d == 0) d = static_cast<double>(static_cast<int>(rng() % 21) - 10);
            a[i] = b[i] + d;
            diffs[i] = d;
        }
        auto result = wilcoxon_signed_rank(a, b);
        CHECK(result.p_value == doctest::Approx(oracle_wilcoxon_p(diffs)).epsilon(1e-12));
    }
}

TEST_CASE("wilcoxon every sign pattern with distinct magnitudes") {
    for (std::size_t m = 1; m <= 8; ++m) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            std::vector<double> a(m), b(m), diffs(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double magnitude = static_cast<double>(i + 1);
                diffs[i] = (mask & (std::size_t{1} << i)) ? magnitude : -magnitude;
                b[i] = 10.0 * static_cast<double>(i);
                a[i] = b[i] + diffs[i];
            }
            auto result = wilcoxon_signed_rank(a, b);
            CHECK(result.p_value == doctest::Approx(oracle_wilcoxon_p(diffs)).epsilon(1e-12));
        }
    }
}

TEST_CASE("wilcoxon statistic is invariant under common shifts") {
    std::vector<double> a = {3, 8, 1, 9, 4}, b = {2, 5, 2, 9.5, 1};
    auto base = wilcoxon_signed_rank(a, b);
    for (double shift : {-7.0, 3.25, 100.0}) {
        std::vector<double> a2 = a, b2 = b;
        for (auto& x : a2) x += shift;
        for (auto& x : b2) x += shift;
        auto shifted = wilcoxon_signed_rank(a2, b2);
        CHECK(shifted.statistic == doctest::Approx(base.statistic));
        CHECK(shifted.p_value == doctest::Approx(base.p_value));
    }
}

TEST_CASE("wilcoxon normal approximation is sane for large m") {
    std::vector<double> a, b;
    std::mt19937 rng(13);
    for (int i = 0; i < 40; ++i) {
        b.push_back(static_cast<double>(rng() % 50));
        a.push_back(b.back() + static_cast<double>(rng() % 9) - 4.0 + 0.5);
    }
    auto result = wilcoxon_signed_rank(a, b);
    CHECK(result.p_value > 0.0);
    CHECK(result.p_value <= 1.0);
}

TEST_CASE("evaluate_run identity scores 100 and reports pairwise entries") {
    std::map<std::string, std::string> references;
    for (int i = 0; i < 5; ++i)
        references["p" + std::to_string(i)] =
            "product " + std::to_string(i) + " works well and charges fast";

    std::map<std::string, std::map<std::string, std::string>> outputs;
    outputs["perfect"] = references;
    for (const auto& [product, reference] : references)
        outputs["noisy"][product] = reference + " maybe not";

    auto report = evaluate_run(outputs, references, {{"perfect", "noisy"}});
    CHECK(report.per_system.at("perfect").r1 == doctest::Approx(100.0));
    CHECK(report.per_system.at("perfect").r2 == doctest::Approx(100.0));
    CHECK(report.per_system.at("perfect").rl == doctest::Approx(100.0));
    CHECK(report.per_system.at("noisy").r1 < 100.0);
    CHECK(report.pairwise.size() == 1);
    CHECK_FALSE(report.per_system.at("perfect").fluency.has_value());

    auto round = report_from_json(report_to_json(report));
    CHECK(report_to_json(round) == report_to_json(report));

    auto text = report_to_text(report);
    CHECK(text.find("100.00*") != std::string::npos);
    CHECK(text.find("perfect") != std::string::npos);
}

TEST_CASE("evaluate_run rejects coverage mismatches naming the products") {
    std::map<std::string, std::string> references = {{"p1", "ref one"}, {"p2", "ref two"}};
    std::map<std::string, std::map<std::string, std::string>> outputs;
    outputs["partial"] = {{"p1", "candidate"}};
    try {
        evaluate_run(outputs, references);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("p2") != std::string::npos);
    }
}

TEST_CASE("evaluate_run fills judge columns when a judge is supplied") {
    std::map<std::string, std::string> references = {{"p1", "the phone is fine"}};
    std::map<std::string, std::map<std::string, std::string>> outputs;
    outputs["sys"] = {{"p1", "The phone is fine."}};
    ScriptedBackend judge({{"sentence:", "NONE"}, {"Rate the", "Score: 4"}});
    auto report = evaluate_run(outputs, references, {}, &judge);
    REQUIRE(report.per_system.at("sys").fluency.has_value());
    CHECK(*report.per_system.at("sys").fluency == doctest::Approx(4.0));
    CHECK(*report.per_system.at("sys").coherence == doctest::Approx(4.0));
    CHECK(*report.per_system.at("sys").booook == doctest::Approx(1.0));
}
