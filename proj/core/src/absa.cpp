#include "opsumm/absa.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "opsumm/corpus.hpp"
#include "opsumm/errors.hpp"

namespace opsumm {

namespace {

using nlohmann::json;

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Disjoint-set over 0..n-1.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::string_view to_string(Sentiment s) {
    switch (s) {
        case Sentiment::Positive: return "positive";
        case Sentiment::Negative: return "negative";
        case Sentiment::Neutral: return "neutral";
    }
    return "neutral";
}

std::string_view to_string(MajorityLabel s) {
    switch (s) {
        case MajorityLabel::Positive: return "positive";
        case MajorityLabel::Negative: return "negative";
        case MajorityLabel::Neutral: return "neutral";
        case MajorityLabel::Mixed: return "mixed";
    }
    return "mixed";
}

std::string normalize_aspect(std::string_view raw) {
    std::string out;
    bool pending_space = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

LexiconExtractor::LexiconExtractor(std::vector<std::string> lexicon,
                                   std::map<std::string, Sentiment> polarity, std::size_t window)
    : window_(window) {
    if (lexicon.empty() || polarity.empty())
        throw PreconditionError("lexicon and polarity map must be non-empty");
    if (window_ < 1) throw PreconditionError("window must be >= 1");
    for (const auto& term : lexicon) {
        auto tokens = tokenize(normalize_aspect(term));
        if (!tokens.empty()) lexicon_tokens_.push_back(std::move(tokens));
    }
    // longest match first; lexicographic inside a length class for determinism
    std::sort(lexicon_tokens_.begin(), lexicon_tokens_.end(),
              [](const auto& a, const auto& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a < b;
              });
    lexicon_tokens_.erase(std::unique(lexicon_tokens_.begin(), lexicon_tokens_.end()),
                          lexicon_tokens_.end());
    for (const auto& [word, sentiment] : polarity) polarity_.emplace(lowercase(word), sentiment);
}

LexiconExtractor LexiconExtractor::from_files(const std::string& lexicon_path,
                                              const std::string& polarity_path,
                                              std::size_t window) {
    std::ifstream lex(lexicon_path);
    if (!lex) throw ParseError("cannot open lexicon file: " + lexicon_path);
    std::vector<std::string> terms;
    std::string line;
    while (std::getline(lex, line)) {
        std::string term = normalize_aspect(line);
        if (!term.empty()) terms.push_back(std::move(term));
    }

    std::ifstream pol(polarity_path);
    if (!pol) throw ParseError("cannot open polarity file: " + polarity_path);
    std::map<std::string, Sentiment> polarity;
    std::size_t lineno = 0;
    while (std::getline(pol, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected word<TAB>polarity", lineno);
        std::string word = lowercase(line.substr(0, tab));
        std::string label = lowercase(line.substr(tab + 1));
        while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
        if (label == "positive")
            polarity[word] = Sentiment::Positive;
        else if (label == "negative")
            polarity[word] = Sentiment::Negative;
        else
            throw ParseError("polarity must be positive|negative, got '" + label + "'", lineno);
    }
    return LexiconExtractor(std::move(terms), std::move(polarity), window);
}

std::vector<AspectMention> LexiconExtractor::extract(const std::string& text) {
    std::vector<std::string> tokens;
    for (auto& token : tokenize(text)) tokens.push_back(lowercase(std::move(token)));

    struct Match {
        std::size_t begin, end;  // token span [begin, end)
        std::string aspect;
    };
    std::vector<Match> matches;
    std::vector<bool> consumed(tokens.size(), false);
    for (std::size_t i = 0; i < tokens.size();) {
        const std::vector<std::string>* hit = nullptr;
        for (const auto& term : lexicon_tokens_) {
            if (i + term.size() > tokens.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < term.size() && ok; ++k)
                ok = !consumed[i + k] && tokens[i + k] == term[k];
            if (ok) {
                hit = &term;
                break;
            }
        }
        if (!hit) {
            ++i;
            continue;
        }
        std::string aspect;
        for (const auto& piece : *hit) {
            if (!aspect.empty()) aspect += ' ';
            aspect += piece;
        }
        matches.push_back(Match{i, i + hit->size(), std::move(aspect)});
        for (std::size_t k = i; k < i + hit->size(); ++k) consumed[k] = true;
        i += hit->size();
    }

    std::vector<AspectMention> mentions;
    mentions.reserve(matches.size());
    for (const auto& match : matches) {
        std::size_t pos = 0, neg = 0;
        for (std::size_t j = 0; j < tokens.size(); ++j) {
            if (j >= match.begin && j < match.end) continue;
            // distance to the nearest matched token; the match itself counts
            // as position one, so only distances below `window` qualify
            const std::size_t dist = j < match.begin ? match.begin - j : j - (match.end - 1);
            if (dist >= window_) continue;
            auto it = polarity_.find(tokens[j]);
            if (it == polarity_.end()) continue;
            (it->second == Sentiment::Positive ? pos : neg) += 1;
        }
        Sentiment sentiment = Sentiment::Neutral;
        if (pos > neg)
            sentiment = Sentiment::Positive;
        else if (neg > pos)
            sentiment = Sentiment::Negative;
        mentions.push_back(AspectMention{match.aspect, sentiment});
    }
    return mentions;
}

RemoteExtractor::RemoteExtractor(GenerationBackend& backend, double temperature)
    : backend_(&backend), temperature_(temperature) {}

std::vector<AspectMention> RemoteExtractor::extract(const std::string& text) {
    GenerationRequest request;
    request.system_prompt =
        "You are an aspect-based sentiment analyser for product reviews.";
    request.user_prompt =
        "Identify the aspects of the product mentioned in the review below and the sentiment "
        "expressed towards each. Respond with one line per aspect in the form "
        "aspect<TAB>sentiment where sentiment is positive, negative or neutral. "
        "Respond NONE if the review mentions no aspects.\n\nreview: " +
        text;
    request.temperature = temperature_;
    std::string response = backend_->generate(request);

    std::vector<AspectMention> mentions;
    std::istringstream lines(response);
    std::string line;
    while (std::getline(lines, line)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        std::string aspect = normalize_aspect(line.substr(0, tab));
        std::string label = lowercase(line.substr(tab + 1));
        while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back())))
            label.pop_back();
        if (aspect.empty()) continue;
        Sentiment sentiment;
        if (label == "positive")
            sentiment = Sentiment::Positive;
        else if (label == "negative")
            sentiment = Sentiment::Negative;
        else if (label == "neutral")
            sentiment = Sentiment::Neutral;
        else
            continue;
        mentions.push_back(AspectMention{std::move(aspect), sentiment});
    }
    return mentions;
}

AspectDictionary update_dictionary(AspectDictionary dict,
                                   std::span<const AspectMention> mentions) {
    for (const auto& mention : mentions) {
        SentimentCounts& counts = dict[mention.aspect];
        switch (mention.sentiment) {
            case Sentiment::Positive: ++counts.positive; break;
            case Sentiment::Negative: ++counts.negative; break;
            case Sentiment::Neutral: ++counts.neutral; break;
        }
    }
    return dict;
}

AspectDictionary cluster_aspects(const AspectDictionary& dict, EmbeddingBackend& embedder,
                                 double threshold) {
    if (threshold <= 0.0 || threshold > 1.0)
        throw PreconditionError("cluster threshold must be in (0, 1]");
    if (dict.size() < 2) return dict;

    std::vector<std::string> keys;
    keys.reserve(dict.size());
    for (const auto& [key, counts] : dict) keys.push_back(key);

    std::vector<std::vector<double>> vectors;
    try {
        vectors = embedder.embed(keys);
    } catch (const Error& e) {
        std::string batch;
        for (const auto& key : keys) {
            if (!batch.empty()) batch += ", ";
            batch += key;
        }
        throw BackendError("embedding failed for aspect batch [" + batch + "]: " + e.what());
    }
    if (vectors.size() != keys.size())
        throw BackendError("embedder returned " + std::to_string(vectors.size()) +
                           " vectors for " + std::to_string(keys.size()) + " aspects");

    UnionFind components(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j)
            if (cosine(vectors[i], vectors[j]) >= threshold) components.unite(i, j);

    // root -> (representative index, summed counts)
    std::map<std::size_t, std::pair<std::size_t, SentimentCounts>> clusters;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const SentimentCounts& counts = dict.at(keys[i]);
        auto [it, fresh] = clusters.try_emplace(components.find(i), std::make_pair(i, counts));
        if (fresh) continue;
        auto& [rep, sum] = it->second;
        sum.positive += counts.positive;
        sum.negative += counts.negative;
        sum.neutral += counts.neutral;
        const auto rep_total = dict.at(keys[rep]).total();
        const auto cand_total = counts.total();
        if (cand_total > rep_total || (cand_total == rep_total && keys[i] < keys[rep])) rep = i;
    }

    AspectDictionary merged;
    for (const auto& [root, cluster] : clusters) merged[keys[cluster.first]] = cluster.second;
    return merged;
}

MajorityLabel majority_sentiment(const SentimentCounts& counts) {
    if (counts.total() == 0) throw PreconditionError("majority_sentiment: all counts are zero");
    const std::uint64_t top = std::max({counts.positive, counts.negative, counts.neutral});
    const int winners = (counts.positive == top) + (counts.negative == top) +
                        (counts.neutral == top);
    if (winners > 1) return MajorityLabel::Mixed;
    if (counts.positive == top) return MajorityLabel::Positive;
    if (counts.negative == top) return MajorityLabel::Negative;
    return MajorityLabel::Neutral;
}

std::string serialize_dictionary(const AspectDictionary& dict, std::size_t top_k) {
    if (top_k < 1) throw PreconditionError("top_k must be >= 1");
    std::vector<std::pair<std::string, SentimentCounts>> entries(dict.begin(), dict.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second.total() != b.second.total()) return a.second.total() > b.second.total();
        return a.first < b.first;
    });
    if (entries.size() > top_k) entries.resize(top_k);

    std::string out;
    for (const auto& [aspect, counts] : entries) {
        if (!out.empty()) out += '\n';
        out += "- " + aspect + ": positive=" + std::to_string(counts.positive) +
               ", negative=" + std::to_string(counts.negative) +
               ", neutral=" + std::to_string(counts.neutral) +
               ", majority=" + std::string(to_string(majority_sentiment(counts)));
    }
    return out;
}

std::string dictionary_to_json(const AspectDictionary& dict) {
    json doc = json::object();
    for (const auto& [aspect, counts] : dict)
        doc[aspect] = {{"positive", counts.positive},
                       {"negative", counts.negative},
                       {"neutral", counts.neutral}};
    return doc.dump();
}

AspectDictionary dictionary_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid dictionary JSON: ") + e.what());
    }
    AspectDictionary dict;
    for (const auto& [aspect, counts] : doc.items())
        dict[aspect] = SentimentCounts{counts.value("positive", std::uint64_t{0}),
                                       counts.value("negative", std::uint64_t{0}),
                                       counts.value("neutral", std::uint64_t{0})};
    return dict;
}

}  // namespace opsumm
