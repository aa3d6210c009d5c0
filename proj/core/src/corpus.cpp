#include "opsumm/corpus.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "opsumm/errors.hpp"
#include "opsumm/eval.hpp"

namespace opsumm {

namespace {

using nlohmann::json;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

Review review_from_json(const json& obj, std::size_t line) {
    if (!obj.is_object()) throw ParseError("expected a JSON object", line);
    Review r;
    try {
        r.id = obj.at("id").get<std::string>();
        r.product_id = obj.at("product_id").get<std::string>();
        r.text = obj.at("text").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad review record: ") + e.what(), line);
    }
    if (trim(r.text).empty()) throw ParseError("review text is empty", line);
    if (obj.contains("rating") && !obj["rating"].is_null()) {
        double rating = obj["rating"].get<double>();
        if (rating < 1.0 || rating > 5.0) throw ParseError("rating out of range 1-5", line);
        r.rating = rating;
    }
    if (obj.contains("timestamp") && !obj["timestamp"].is_null())
        r.timestamp = obj["timestamp"].get<std::string>();
    return r;
}

std::vector<ProductCorpus> load_jsonl(std::istream& in) {
    // product_id -> slot; insertion order preserved in the result
    std::vector<ProductCorpus> corpora;
    std::map<std::string, std::size_t> slots;
    std::map<std::string, std::set<std::string>> seen_ids;

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty()) continue;
        json obj;
        try {
            obj = json::parse(raw);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line);
        }
        Review r = review_from_json(obj, line);
        auto [it, fresh] = slots.try_emplace(r.product_id, corpora.size());
        if (fresh) corpora.push_back(ProductCorpus{r.product_id, {}, std::nullopt});
        if (!seen_ids[r.product_id].insert(r.id).second)
            throw ParseError("duplicate review id '" + r.id + "' in product '" + r.product_id + "'",
                             line);
        corpora[it->second].reviews.push_back(std::move(r));
    }
    return corpora;
}

ProductCorpus product_from_amasum(const json& obj, std::size_t line) {
    if (!obj.is_object()) throw ParseError("expected a product object", line);
    ProductCorpus corpus;
    try {
        corpus.product_id = obj.at("product_id").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad product record: ") + e.what(), line);
    }
    std::set<std::string> ids;
    for (const auto& rec : obj.value("reviews", json::array())) {
        Review r;
        try {
            r.id = rec.at("id").get<std::string>();
            r.text = rec.at("text").get<std::string>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad review record: ") + e.what(), line);
        }
        r.product_id = corpus.product_id;
        if (trim(r.text).empty()) throw ParseError("review text is empty", line);
        if (!ids.insert(r.id).second)
            throw ParseError(
                "duplicate review id '" + r.id + "' in product '" + corpus.product_id + "'", line);
        corpus.reviews.push_back(std::move(r));
    }
    if (obj.contains("reference") && !obj["reference"].is_null()) {
        const auto& ref = obj["reference"];
        std::string verdict;
        std::vector<std::string> pros, cons;
        try {
            verdict = ref.at("verdict").get<std::string>();
            pros = ref.value("pros", std::vector<std::string>{});
            cons = ref.value("cons", std::vector<std::string>{});
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad reference record: ") + e.what(), line);
        }
        try {
            corpus.reference_summary = merge_amasum_reference(verdict, pros, cons);
        } catch (const PreconditionError& e) {
            throw ParseError(e.what(), line);
        }
    }
    return corpus;
}

std::vector<ProductCorpus> load_amasum(std::istream& in) {
    // One product object per line, or a single top-level JSON array.
    std::string first;
    std::streampos start = in.tellg();
    while (std::getline(in, first)) {
        if (!trim(first).empty()) break;
    }
    if (trim(first).empty()) return {};
    if (trim(first).front() == '[') {
        in.clear();
        in.seekg(start);
        json arr;
        try {
            arr = json::parse(in);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what());
        }
        std::vector<ProductCorpus> corpora;
        corpora.reserve(arr.size());
        for (const auto& obj : arr) corpora.push_back(product_from_amasum(obj, 0));
        return corpora;
    }
    in.clear();
    in.seekg(start);
    std::vector<ProductCorpus> corpora;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty()) continue;
        json obj;
        try {
            obj = json::parse(raw);
        } catch (const json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line);
        }
        corpora.push_back(product_from_amasum(obj, line));
    }
    return corpora;
}

}  // namespace

std::vector<TokenSpan> token_spans(std::string_view text) {
    std::vector<TokenSpan> spans;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (is_space(text[i])) {
            ++i;
            continue;
        }
        const bool alnum = is_alnum(text[i]);
        std::size_t j = i + 1;
        while (j < n && !is_space(text[j]) && is_alnum(text[j]) == alnum) ++j;
        spans.push_back(TokenSpan{i, j});
        i = j;
    }
    return spans;
}

std::size_t count_tokens(std::string_view text) { return token_spans(text).size(); }

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& span : token_spans(text))
        out.emplace_back(text.substr(span.begin, span.end - span.begin));
    return out;
}

std::string truncate_to_tokens(std::string_view text, std::size_t max_tokens) {
    auto spans = token_spans(text);
    if (spans.size() <= max_tokens) return std::string(text);
    if (max_tokens == 0) return "";
    return std::string(text.substr(0, spans[max_tokens - 1].end));
}

std::vector<ProductCorpus> load_reviews(const std::string& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return format == CorpusFormat::Jsonl ? load_jsonl(in) : load_amasum(in);
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "jsonl") return CorpusFormat::Jsonl;
    if (name == "amasum") return CorpusFormat::Amasum;
    throw PreconditionError("unknown corpus format: " + std::string(name));
}

std::string merge_amasum_reference(const std::string& verdict,
                                   const std::vector<std::string>& pros,
                                   const std::vector<std::string>& cons) {
    std::string v = trim(verdict);
    if (v.empty()) throw PreconditionError("amasum verdict is empty");

    auto terminate = [](std::string item) {
        if (item.empty()) return item;
        char last = item.back();
        if (last != '.' && last != '!' && last != '?') item += '.';
        return item;
    };

    std::string out = terminate(v);
    auto append_block = [&](const char* label, const std::vector<std::string>& items) {
        std::vector<std::string> kept;
        for (const auto& item : items) {
            std::string t = trim(item);
            if (!t.empty()) kept.push_back(terminate(std::move(t)));
        }
        if (kept.empty()) return;
        out += ' ';
        out += label;
        for (auto& item : kept) {
            out += ' ';
            out += item;
        }
    };
    append_block("Pros:", pros);
    append_block("Cons:", cons);
    return out;
}

std::vector<Chunk> chunk_reviews(const ProductCorpus& corpus, std::size_t tau) {
    if (tau < 1) throw PreconditionError("tau must be >= 1");
    std::vector<Chunk> chunks;
    Chunk current;
    auto flush = [&] {
        if (current.review_ids.empty()) return;
        current.index = chunks.size();
        chunks.push_back(std::move(current));
        current = Chunk{};
    };
    for (const auto& review : corpus.reviews) {
        const std::size_t tokens = count_tokens(review.text);
        if (tokens > tau) {
            flush();
            current.review_ids.push_back(review.id);
            current.token_count = tau;
            current.truncated = true;
            flush();
            continue;
        }
        if (current.token_count + tokens > tau) flush();
        current.review_ids.push_back(review.id);
        current.token_count += tokens;
    }
    flush();
    return chunks;
}

std::vector<std::string> chunk_texts(const ProductCorpus& corpus, const Chunk& chunk,
                                     std::size_t tau) {
    std::map<std::string_view, const Review*> by_id;
    for (const auto& review : corpus.reviews) by_id.emplace(review.id, &review);
    std::vector<std::string> texts;
    texts.reserve(chunk.review_ids.size());
    for (const auto& id : chunk.review_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw PreconditionError("chunk references unknown review id: " + id);
        texts.push_back(chunk.truncated ? truncate_to_tokens(it->second->text, tau)
                                        : it->second->text);
    }
    return texts;
}

CorpusStats corpus_stats(const std::vector<ProductCorpus>& corpora) {
    std::size_t total_reviews = 0, total_sentences = 0, total_words = 0;
    for (const auto& corpus : corpora) {
        total_reviews += corpus.reviews.size();
        for (const auto& review : corpus.reviews) {
            for (const auto& sentence : split_sentences(review.text)) {
                ++total_sentences;
                std::istringstream words(sentence);
                std::string word;
                while (words >> word) ++total_words;
            }
        }
    }
    if (corpora.empty() || total_reviews == 0)
        throw PreconditionError("corpus_stats requires at least one review");
    CorpusStats stats;
    stats.avg_reviews_per_entity =
        static_cast<double>(total_reviews) / static_cast<double>(corpora.size());
    stats.avg_sentences_per_review =
        total_reviews ? static_cast<double>(total_sentences) / static_cast<double>(total_reviews)
                      : 0.0;
    stats.avg_words_per_sentence =
        total_sentences ? static_cast<double>(total_words) / static_cast<double>(total_sentences)
                        : 0.0;
    return stats;
}

}  // namespace opsumm
