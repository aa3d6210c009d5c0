#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opsumm/backends.hpp"

namespace opsumm {

enum class Sentiment { Positive, Negative, Neutral };
enum class MajorityLabel { Positive, Negative, Neutral, Mixed };

std::string_view to_string(Sentiment s);
std::string_view to_string(MajorityLabel s);

struct AspectMention {
    std::string aspect;  // normalized: lowercased, trimmed, inner whitespace collapsed
    Sentiment sentiment = Sentiment::Neutral;
};

struct SentimentCounts {
    std::uint64_t positive = 0;
    std::uint64_t negative = 0;
    std::uint64_t neutral = 0;

    std::uint64_t total() const { return positive + negative + neutral; }
    friend bool operator==(const SentimentCounts&, const SentimentCounts&) = default;
};

// Cross-chunk memory: normalized aspect -> sentiment counts. std::map keeps
// iteration and serialization order deterministic.
using AspectDictionary = std::map<std::string, SentimentCounts>;

std::string normalize_aspect(std::string_view raw);

class AspectExtractor {
public:
    virtual ~AspectExtractor() = default;
    virtual std::vector<AspectMention> extract(const std::string& text) = 0;
};

// Deterministic stand-in for a hosted ABSA model. Matches lexicon terms in
// the tokenized text (longest match first, matched tokens consumed) and
// assigns the majority polarity of opinion words within `window` tokens of
// the match (counting the match itself as position one, so a word qualifies
// when fewer than `window` tokens away). No opinion word in range, or a
// tie, yields neutral.
class LexiconExtractor : public AspectExtractor {
public:
    LexiconExtractor(std::vector<std::string> lexicon,
                     std::map<std::string, Sentiment> polarity, std::size_t window = 3);
    static LexiconExtractor from_files(const std::string& lexicon_path,
                                       const std::string& polarity_path,
                                       std::size_t window = 3);

    std::vector<AspectMention> extract(const std::string& text) override;

private:
    std::vector<std::vector<std::string>> lexicon_tokens_;  // sorted longest first
    std::map<std::string, Sentiment> polarity_;
    std::size_t window_;
};

// Remote ABSA behind the chat-completions protocol: one structured prompt
// per review, one "aspect<TAB>sentiment" pair per response line.
class RemoteExtractor : public AspectExtractor {
public:
    RemoteExtractor(GenerationBackend& backend, double temperature = 0.0);
    std::vector<AspectMention> extract(const std::string& text) override;

private:
    GenerationBackend* backend_;
    double temperature_;
};

// --- dictionary operations ----------------------------------------------------

// Value semantics: returns a new dictionary, each mention bumping exactly
// one counter (entries created on demand).
AspectDictionary update_dictionary(AspectDictionary dict, std::span<const AspectMention> mentions);

// Threshold-graph clustering: embed every key, connect pairs with cosine
// similarity >= threshold, collapse each connected component into one entry
// with component-wise count sums. Representative name: member with the
// largest total, ties to the lexicographically smallest. Conserves the
// total mention count exactly.
AspectDictionary cluster_aspects(const AspectDictionary& dict, EmbeddingBackend& embedder,
                                 double threshold);

// Strict plurality of the three counters; any tie for the maximum is Mixed.
// Throws PreconditionError when all counts are zero.
MajorityLabel majority_sentiment(const SentimentCounts& counts);

// Top-k entries by total count (ties lexicographic), one line each:
// "- <aspect>: positive=<p>, negative=<n>, neutral=<u>, majority=<label>"
std::string serialize_dictionary(const AspectDictionary& dict, std::size_t top_k);

// JSON snapshot: { "aspect": {"positive": p, "negative": n, "neutral": u} }
std::string dictionary_to_json(const AspectDictionary& dict);
AspectDictionary dictionary_from_json(const std::string& json_text);

}  // namespace opsumm
