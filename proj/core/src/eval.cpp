#include "opsumm/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "opsumm/errors.hpp"

namespace opsumm {

namespace {

using nlohmann::json;

const std::set<std::string>& abbreviation_guards() {
    // trailing words (lowercased, incl. the period) that never end a sentence
    static const std::set<std::string> guards = {
        "vs.",  "etc.", "e.g.", "i.e.",  "mr.",  "mrs.",  "ms.", "dr.",
        "rs.",  "no.",  "inc.", "st.",   "approx.", "fig.", "cf.", "al."};
    return guards;
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

RougeScore score_from_counts(double overlap, double cand_total, double ref_total) {
    RougeScore score;
    if (cand_total > 0) score.precision = overlap / cand_total;
    if (ref_total > 0) score.recall = overlap / ref_total;
    if (score.precision + score.recall > 0)
        score.f1 = 2 * score.precision * score.recall / (score.precision + score.recall);
    return score;
}

constexpr const char* kErrorTypes =
    "entity omission, event omission, causal omission, discontinuity, salience, language "
    "issues, inconsistency, duplication";

const char* dimension_name(JudgeDimension d) {
    return d == JudgeDimension::Fluency ? "fluency" : "coherence";
}

std::string rubric_prompt(JudgeDimension dimension, const std::string& summary) {
    std::string rubric;
    if (dimension == JudgeDimension::Fluency) {
        rubric =
            "Rate the fluency of the product-review summary below on a scale of 1 to 5. "
            "Fluency covers grammar, spelling, punctuation, capitalization, word choice, and "
            "sentence structure: 1 means the text is barely readable, 5 means it reads "
            "flawlessly.";
    } else {
        rubric =
            "Rate the coherence of the product-review summary below on a scale of 1 to 5. "
            "Coherence covers how well-structured and well-organized the summary is: 1 means a "
            "disconnected heap of statements, 5 means the summary builds naturally from "
            "sentence to sentence.";
    }
    return rubric +
           "\nRespond with a short justification followed by a final line of the form "
           "'Score: <1-5>'.\n\nsummary: " +
           summary;
}

int parse_score_line(const std::string& response) {
    std::istringstream lines(response);
    std::string line, found;
    while (std::getline(lines, line)) {
        if (trim(line).rfind("Score:", 0) == 0) found = trim(line);
    }
    if (found.empty())
        throw JudgeParseError("judge response has no 'Score:' line", response);
    std::istringstream tail(found.substr(6));
    int score = 0;
    if (!(tail >> score))
        throw JudgeParseError("judge score is not an integer", response);
    if (score < 1 || score > 5)
        throw JudgeParseError("judge score " + std::to_string(score) + " outside 1-5", response);
    return score;
}

// round half away from zero to 2 decimals
double round2(double x) { return std::round(x * 100.0) / 100.0; }

double normal_two_sided_p(double z) {
    // z is the (negative) standardized statistic; two-sided tail mass
    return std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
}

}  // namespace

std::vector<std::string> tokenize_for_rouge(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::string current;
    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        current += text[i];
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // boundary: whitespace then an uppercase letter or digit
        std::size_t j = i + 1;
        if (j >= n || !std::isspace(static_cast<unsigned char>(text[j]))) continue;
        while (j < n && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j >= n) continue;
        if (!std::isupper(static_cast<unsigned char>(text[j])) &&
            !std::isdigit(static_cast<unsigned char>(text[j])))
            continue;
        if (c == '.') {
            auto space = current.find_last_of(" \t\n\r");
            std::string last =
                lowercase(space == std::string::npos ? current : current.substr(space + 1));
            if (abbreviation_guards().count(last)) continue;
        }
        std::string sentence = trim(current);
        if (!sentence.empty()) sentences.push_back(std::move(sentence));
        current.clear();
    }
    std::string tail = trim(current);
    if (!tail.empty()) sentences.push_back(std::move(tail));
    return sentences;
}

RougeScore rouge_n(const std::string& candidate, const std::string& reference, std::size_t n) {
    if (n < 1) throw PreconditionError("rouge_n requires n >= 1");
    const auto cand = tokenize_for_rouge(candidate);
    const auto ref = tokenize_for_rouge(reference);
    if (cand.size() < n || ref.size() < n) return {};

    auto grams = [n](const std::vector<std::string>& tokens) {
        std::map<std::string, std::size_t> counts;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string key = tokens[i];
            for (std::size_t k = 1; k < n; ++k) key += '\x1f' + tokens[i + k];
            ++counts[key];
        }
        return counts;
    };
    const auto cand_grams = grams(cand);
    const auto ref_grams = grams(ref);

    std::size_t overlap = 0, cand_total = 0, ref_total = 0;
    for (const auto& [key, count] : cand_grams) {
        cand_total += count;
        auto it = ref_grams.find(key);
        if (it != ref_grams.end()) overlap += std::min(count, it->second);
    }
    for (const auto& [key, count] : ref_grams) ref_total += count;
    return score_from_counts(static_cast<double>(overlap), static_cast<double>(cand_total),
                             static_cast<double>(ref_total));
}

RougeScore rouge_l(const std::string& candidate, const std::string& reference) {
    const auto cand = tokenize_for_rouge(candidate);
    const auto ref = tokenize_for_rouge(reference);
    if (cand.empty() || ref.empty()) return {};

    // row-rolling LCS
    std::vector<std::size_t> prev(ref.size() + 1, 0), row(ref.size() + 1, 0);
    for (std::size_t i = 1; i <= cand.size(); ++i) {
        for (std::size_t j = 1; j <= ref.size(); ++j) {
            row[j] = cand[i - 1] == ref[j - 1] ? prev[j - 1] + 1
                                               : std::max(prev[j], row[j - 1]);
        }
        std::swap(prev, row);
    }
    return score_from_counts(static_cast<double>(prev[ref.size()]),
                             static_cast<double>(cand.size()), static_cast<double>(ref.size()));
}

JudgeScore judge_dimension(GenerationBackend& backend, const std::string& summary,
                           JudgeDimension dimension) {
    if (summary.empty()) throw PreconditionError("cannot judge an empty summary");
    GenerationRequest request;
    request.system_prompt = "You are a strict evaluator of opinion summaries.";
    request.user_prompt = rubric_prompt(dimension, summary);
    request.temperature = 0.0;
    std::string response = backend.generate(request);
    return JudgeScore{dimension, parse_score_line(response), std::move(response)};
}

double booook_score_lite(GenerationBackend& backend, const std::string& summary) {
    if (summary.empty()) throw PreconditionError("cannot score an empty summary");
    std::vector<std::string> sentences = split_sentences(summary);
    if (sentences.empty()) sentences.push_back(summary);

    static const std::set<std::string> labels = {
        "entity omission", "event omission",  "causal omission", "discontinuity",
        "salience",        "language issues", "inconsistency",   "duplication"};

    std::size_t clean = 0;
    for (const auto& sentence : sentences) {
        GenerationRequest request;
        request.system_prompt = "You are a strict evaluator of opinion summaries.";
        request.user_prompt =
            std::string("Check the following summary sentence for these error types: ") +
            kErrorTypes +
            ". Respond with NONE if the sentence has none of them, otherwise respond with the "
            "single most severe error type label.\n\nsentence: " +
            sentence;
        request.temperature = 0.0;
        std::string response = lowercase(trim(backend.generate(request)));
        if (response.rfind("none", 0) == 0) {
            ++clean;
        } else if (!labels.count(response)) {
            // unparseable verdict counts the sentence as errored
            std::clog << "booook_score_lite: unparseable judge response for sentence: '"
                      << sentence << "'\n";
        }
    }
    return static_cast<double>(clean) / static_cast<double>(sentences.size());
}

PairwiseResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw PreconditionError("wilcoxon requires equal-length non-empty samples");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) throw PreconditionError("wilcoxon: no nonzero pairs");
    const std::size_t m = diffs.size();

    // rank |d| with average ranks for ties
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(diffs[x]) < std::abs(diffs[y]);
    });
    std::vector<double> ranks(m, 0.0);
    std::vector<std::size_t> tie_sizes;
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j < m && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg_rank;
        tie_sizes.push_back(j - i);
        i = j;
    }

    double w_plus = 0, total = 0;
    for (std::size_t k = 0; k < m; ++k) {
        total += ranks[k];
        if (diffs[k] > 0) w_plus += ranks[k];
    }
    const double w = std::min(w_plus, total - w_plus);

    PairwiseResult result;
    result.statistic = w;
    if (m <= 20) {
        // exact: enumerate every sign assignment
        const std::uint64_t patterns = std::uint64_t{1} << m;
        std::uint64_t at_most = 0;
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            double wp = 0;
            for (std::size_t k = 0; k < m; ++k)
                if (mask & (std::uint64_t{1} << k)) wp += ranks[k];
            if (std::min(wp, total - wp) <= w + 1e-12) ++at_most;
        }
        result.p_value = static_cast<double>(at_most) / static_cast<double>(patterns);
    } else {
        const double md = static_cast<double>(m);
        const double mean = md * (md + 1.0) / 4.0;
        double tie_term = 0;
        for (std::size_t t : tie_sizes) {
            const double td = static_cast<double>(t);
            tie_term += td * td * td - td;
        }
        const double var = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0 - tie_term / 48.0;
        if (var <= 0) throw PreconditionError("wilcoxon: zero variance (all magnitudes tied)");
        const double z = (w - mean + 0.5) / std::sqrt(var);  // continuity correction
        result.p_value = std::max(normal_two_sided_p(z), 1e-300);
    }
    return result;
}

EvaluationReport evaluate_run(
    const std::map<std::string, std::map<std::string, std::string>>& outputs,
    const std::map<std::string, std::string>& references,
    const std::vector<std::pair<std::string, std::string>>& pairs, GenerationBackend* judge) {
    if (outputs.empty()) throw PreconditionError("no system outputs supplied");
    if (references.empty()) throw PreconditionError("no references supplied");

    EvaluationReport report;
    for (const auto& [product, reference] : references) report.products.push_back(product);

    for (const auto& [system, summaries] : outputs) {
        std::vector<std::string> missing;
        for (const auto& product : report.products)
            if (!summaries.count(product)) missing.push_back(product);
        for (const auto& [product, summary] : summaries)
            if (!references.count(product)) missing.push_back(product);
        if (!missing.empty()) {
            std::string joined;
            for (const auto& p : missing) joined += (joined.empty() ? "" : ", ") + p;
            throw PreconditionError("system '" + system +
                                    "' does not cover the reference product set: " + joined);
        }
    }

    // per-product R1 F1, kept unrounded for the significance tests
    std::map<std::string, std::vector<double>> r1_by_system;
    for (const auto& [system, summaries] : outputs) {
        double r1 = 0, r2 = 0, rl = 0, fl = 0, co = 0, bk = 0;
        for (const auto& product : report.products) {
            const std::string& candidate = summaries.at(product);
            const std::string& reference = references.at(product);
            const double f1 = rouge_n(candidate, reference, 1).f1;
            r1_by_system[system].push_back(f1);
            r1 += f1;
            r2 += rouge_n(candidate, reference, 2).f1;
            rl += rouge_l(candidate, reference).f1;
            if (judge) {
                fl += judge_dimension(*judge, candidate, JudgeDimension::Fluency).score;
                co += judge_dimension(*judge, candidate, JudgeDimension::Coherence).score;
                bk += booook_score_lite(*judge, candidate);
            }
        }
        const double n = static_cast<double>(report.products.size());
        SystemScores scores;
        scores.r1 = round2(100.0 * r1 / n);
        scores.r2 = round2(100.0 * r2 / n);
        scores.rl = round2(100.0 * rl / n);
        if (judge) {
            scores.fluency = round2(fl / n);
            scores.coherence = round2(co / n);
            scores.booook = round2(bk / n);
        }
        report.per_system[system] = scores;
    }

    for (const auto& [sys_a, sys_b] : pairs) {
        if (!r1_by_system.count(sys_a) || !r1_by_system.count(sys_b))
            throw PreconditionError("pairwise test names unknown system: " + sys_a + ":" + sys_b);
        report.pairwise[{sys_a, sys_b}] =
            wilcoxon_signed_rank(r1_by_system[sys_a], r1_by_system[sys_b]);
    }
    return report;
}

std::string report_to_json(const EvaluationReport& report) {
    json systems = json::object();
    for (const auto& [name, s] : report.per_system) {
        json entry = {{"r1", s.r1}, {"r2", s.r2}, {"rl", s.rl}};
        if (s.fluency) entry["fl"] = *s.fluency;
        if (s.coherence) entry["co"] = *s.coherence;
        if (s.booook) entry["booook"] = *s.booook;
        systems[name] = entry;
    }
    json pairwise = json::array();
    for (const auto& [pair, result] : report.pairwise)
        pairwise.push_back({{"system_a", pair.first},
                            {"system_b", pair.second},
                            {"statistic", result.statistic},
                            {"p_value", result.p_value}});
    json doc = {
        {"products", report.products}, {"per_system", systems}, {"pairwise", pairwise}};
    return doc.dump(2);
}

EvaluationReport report_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid report JSON: ") + e.what());
    }
    EvaluationReport report;
    report.products = doc.value("products", std::vector<std::string>{});
    for (const auto& [name, entry] : doc.at("per_system").items()) {
        SystemScores scores;
        scores.r1 = entry.at("r1").get<double>();
        scores.r2 = entry.at("r2").get<double>();
        scores.rl = entry.at("rl").get<double>();
        if (entry.contains("fl")) scores.fluency = entry["fl"].get<double>();
        if (entry.contains("co")) scores.coherence = entry["co"].get<double>();
        if (entry.contains("booook")) scores.booook = entry["booook"].get<double>();
        report.per_system[name] = scores;
    }
    for (const auto& entry : doc.value("pairwise", json::array()))
        report.pairwise[{entry.at("system_a").get<std::string>(),
                         entry.at("system_b").get<std::string>()}] =
            PairwiseResult{entry.at("statistic").get<double>(),
                           entry.at("p_value").get<double>()};
    return report;
}

std::string report_to_text(const EvaluationReport& report) {
    const std::vector<std::string> columns = {"R1", "R2", "RL", "FL", "CO", "BooookScore"};
    auto value = [](const SystemScores& s, std::size_t col) -> std::optional<double> {
        switch (col) {
            case 0: return s.r1;
            case 1: return s.r2;
            case 2: return s.rl;
            case 3: return s.fluency;
            case 4: return s.coherence;
            default: return s.booook;
        }
    };

    // best / second-best per column; '*' and '+' suffixes
    std::vector<double> best(columns.size(), -1), second(columns.size(), -1);
    for (const auto& [name, scores] : report.per_system) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            auto v = value(scores, c);
            if (!v) continue;
            if (*v > best[c]) {
                second[c] = best[c];
                best[c] = *v;
            } else if (*v > second[c]) {
                second[c] = *v;
            }
        }
    }

    std::size_t name_width = 6;
    for (const auto& [name, scores] : report.per_system)
        name_width = std::max(name_width, name.size());

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width + 2)) << "System";
    for (const auto& column : columns) out << std::right << std::setw(13) << column;
    out << '\n';
    for (const auto& [name, scores] : report.per_system) {
        out << std::left << std::setw(static_cast<int>(name_width + 2)) << name;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            auto v = value(scores, c);
            std::string cell = "-";
            if (v) {
                std::ostringstream num;
                num << std::fixed << std::setprecision(2) << *v;
                cell = num.str();
                if (report.per_system.size() > 1) {
                    if (*v == best[c])
                        cell += '*';
                    else if (*v == second[c])
                        cell += '+';
                }
            }
            out << std::right << std::setw(13) << cell;
        }
        out << '\n';
    }
    if (!report.pairwise.empty()) {
        out << '\n';
        for (const auto& [pair, result] : report.pairwise)
            out << "Wilcoxon " << pair.first << " vs " << pair.second << ": W=" << result.statistic
                << ", p=" << result.p_value << '\n';
    }
    return out.str();
}

}  // namespace opsumm
