#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opsumm {

struct Review {
    std::string id;
    std::string product_id;
    std::string text;
    std::optional<double> rating;      // 1..5 when present
    std::optional<std::string> timestamp;  // ISO-8601 when present
};

struct ProductCorpus {
    std::string product_id;
    std::vector<Review> reviews;  // ingestion order, preserved end to end
    std::optional<std::string> reference_summary;
};

// A non-overlapping, order-preserving slice of a corpus bounded by the
// token budget tau. Holds review ids only; texts live in the corpus.
struct Chunk {
    std::size_t index = 0;
    std::vector<std::string> review_ids;
    std::size_t token_count = 0;
    bool truncated = false;  // single review exceeded tau and was cut to tau tokens
};

enum class CorpusFormat { Jsonl, Amasum };

// --- tokenization -----------------------------------------------------------
//
// Model-independent counting rule: split on whitespace, then split each
// maximal run of letters/digits from each maximal run of other characters.
// "good, fast!" -> good , fast !

struct TokenSpan {
    std::size_t begin = 0;  // byte offsets into the source text
    std::size_t end = 0;
};

std::vector<TokenSpan> token_spans(std::string_view text);
std::size_t count_tokens(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

// Prefix of `text` covering its first `max_tokens` tokens (whole text when
// it is already short enough).
std::string truncate_to_tokens(std::string_view text, std::size_t max_tokens);

// --- ingestion --------------------------------------------------------------

// jsonl: one review object per line. amasum: one product object per line
// (or a top-level array) with reviews and a verdict/pros/cons reference.
// Throws ParseError with the offending line number.
std::vector<ProductCorpus> load_reviews(const std::string& path, CorpusFormat format);

CorpusFormat parse_corpus_format(std::string_view name);

// "<verdict> Pros: <p1> <p2> ... Cons: <c1> <c2> ..."; items gain a
// terminal "." when they lack terminal punctuation; empty blocks are omitted.
std::string merge_amasum_reference(const std::string& verdict,
                                   const std::vector<std::string>& pros,
                                   const std::vector<std::string>& cons);

// --- chunking ---------------------------------------------------------------

// Greedy packing in corpus order. A single review over tau gets its own
// chunk, cut to its first tau tokens and flagged truncated.
std::vector<Chunk> chunk_reviews(const ProductCorpus& corpus, std::size_t tau);

// Review texts of one chunk, in order, with the truncation rule applied.
std::vector<std::string> chunk_texts(const ProductCorpus& corpus, const Chunk& chunk,
                                     std::size_t tau);

// --- statistics -------------------------------------------------------------

struct CorpusStats {
    double avg_reviews_per_entity = 0;
    double avg_sentences_per_review = 0;
    double avg_words_per_sentence = 0;
};

// Requires at least one corpus with at least one review.
CorpusStats corpus_stats(const std::vector<ProductCorpus>& corpora);

}  // namespace opsumm
