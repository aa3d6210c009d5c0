#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opsumm/backends.hpp"

namespace opsumm {

struct RougeScore {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

enum class JudgeDimension { Fluency, Coherence };

struct JudgeScore {
    JudgeDimension dimension = JudgeDimension::Fluency;
    int score = 0;  // 1..5
    std::string raw_response;
};

struct PairwiseResult {
    double statistic = 0;
    double p_value = 1;
};

struct SystemScores {
    double r1 = 0, r2 = 0, rl = 0;  // mean F1 x 100, 2 decimals
    std::optional<double> fluency;
    std::optional<double> coherence;
    std::optional<double> booook;
};

struct EvaluationReport {
    std::vector<std::string> products;  // shared product set, sorted
    std::map<std::string, SystemScores> per_system;
    std::map<std::pair<std::string, std::string>, PairwiseResult> pairwise;
};

// --- text utilities -----------------------------------------------------------

// Lowercase, non-alphanumeric -> space, split on whitespace. No stemming.
std::vector<std::string> tokenize_for_rouge(std::string_view text);

// Split after . ! ? followed by whitespace and an uppercase/digit start,
// guarding a fixed abbreviation list (vs., etc., e.g., i.e., rs., ...).
std::vector<std::string> split_sentences(std::string_view text);

// --- reference-based metrics ----------------------------------------------------

// Clipped n-gram multiset overlap; empty n-gram set on either side scores zero.
RougeScore rouge_n(const std::string& candidate, const std::string& reference, std::size_t n);

// Longest common subsequence over rouge tokens.
RougeScore rouge_l(const std::string& candidate, const std::string& reference);

// --- reference-free metrics -----------------------------------------------------

// One rubric call; the response must end with "Score: <1-5>".
JudgeScore judge_dimension(GenerationBackend& backend, const std::string& summary,
                           JudgeDimension dimension);

// Fraction of sentences the judge labels free of the eight coherence error
// types (one call per sentence, answer NONE or a type label). A sentence
// whose response cannot be parsed counts as errored.
double booook_score_lite(GenerationBackend& backend, const std::string& summary);

// --- significance ---------------------------------------------------------------

// Paired Wilcoxon signed-rank: zeros dropped, average ranks on ties,
// W = min(W+, W-). Two-sided p is exact (full sign enumeration) up to 20
// nonzero pairs, normal approximation with tie and continuity correction
// beyond. Throws when every difference is zero.
PairwiseResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

// --- report ---------------------------------------------------------------------

// outputs: system -> product -> candidate summary. Every system must cover
// the exact product set of `references`. Judge metrics appear only when a
// judge backend is supplied; pairwise tests run over per-product ROUGE-1 F1.
EvaluationReport evaluate_run(
    const std::map<std::string, std::map<std::string, std::string>>& outputs,
    const std::map<std::string, std::string>& references,
    const std::vector<std::pair<std::string, std::string>>& pairs = {},
    GenerationBackend* judge = nullptr);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& json_text);

// Aligned table in Table-2 column order (R1 R2 RL FL CO BooookScore);
// best value per column marked '*', second best '+'.
std::string report_to_text(const EvaluationReport& report);

}  // namespace opsumm
