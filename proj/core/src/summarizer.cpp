#include "opsumm/summarizer.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opsumm/errors.hpp"
#include "opsumm/hash.hpp"

namespace opsumm {

namespace {

using nlohmann::json;

// Compiled-in copies of the prompts/ fixtures.
constexpr const char* kLocalSummaryTemplate =
    "Following are the reviews for a product. Generate a summary of the opinions as a review "
    "itself with a word limit of under {word_limit} words. Use information from the given "
    "reviews only to generate the summary.\n"
    "reviews:\n"
    "{reviews}\n";

constexpr const char* kUpdateRulesTemplate =
    "You maintain a running GLOBAL SUMMARY of the reviews of one product. Update it using the "
    "LOCAL SUMMARY of the newest reviews and the ASPECT DICTIONARY, which records the positive, "
    "negative and neutral sentiment counts of every aspect seen so far together with its "
    "majority sentiment.\n"
    "Apply these rules:\n"
    "a. New aspects in the LOCAL SUMMARY: check the ASPECT DICTIONARY for the majority "
    "sentiment of that aspect. We only update Global Summary with new aspect information if the "
    "sentiment of that aspect in the Local Summary and the Aspect Dictionary matches.\n"
    "b. Conflicting opinions about an aspect between the GLOBAL and LOCAL summaries: refer to "
    "the aspect's majority sentiment in the ASPECT DICTIONARY. If it matches the sentiment in "
    "the LOCAL SUMMARY, update the GLOBAL SUMMARY with the corresponding information from the "
    "LOCAL SUMMARY, else we leave the Global Summary as it is.\n"
    "If an aspect's majority sentiment is mixed, leave the GLOBAL SUMMARY unchanged for that "
    "aspect.\n"
    "Respond with the updated global summary only, as a review itself, within {word_limit} "
    "words.\n"
    "\n"
    "Example:\n"
    "{one_shot}\n"
    "\n"
    "ASPECT DICTIONARY:\n"
    "{dictionary}\n"
    "\n"
    "GLOBAL SUMMARY:\n"
    "{global}\n"
    "\n"
    "LOCAL SUMMARY:\n"
    "{local}\n";

constexpr const char* kOneShotExample =
    "ASPECT DICTIONARY:\n"
    "- battery: positive=4, negative=1, neutral=0, majority=positive\n"
    "- camera: positive=1, negative=3, neutral=0, majority=negative\n"
    "GLOBAL SUMMARY:\n"
    "Users like the phone overall and praise the camera quality.\n"
    "LOCAL SUMMARY:\n"
    "The battery lasts all day. Several users complain that the camera is blurry in low light.\n"
    "UPDATED GLOBAL SUMMARY:\n"
    "Users like the phone overall. The battery lasts all day, though many find the camera "
    "blurry in low light.\n";

std::string replace_all(std::string text, std::string_view key, std::string_view value) {
    const std::string needle = "{" + std::string(key) + "}";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), value);
        pos += value.size();
    }
    return text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open prompt file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void check_context(const std::string& prompt, const PipelineConfig& config) {
    const std::size_t tokens = count_tokens(prompt);
    if (tokens > config.context_limit_tokens)
        throw PreconditionError("assembled prompt of " + std::to_string(tokens) +
                                " tokens exceeds context limit of " +
                                std::to_string(config.context_limit_tokens));
}

GenerationRequest make_request(std::string prompt, const PipelineConfig& config) {
    GenerationRequest request;
    request.user_prompt = std::move(prompt);
    request.temperature = config.temperature;
    request.max_tokens = config.max_tokens;
    request.model = config.model;
    return request;
}

json record_to_json(const ChunkRecord& record) {
    json dict = json::object();
    for (const auto& [aspect, counts] : record.dictionary_snapshot)
        dict[aspect] = {{"positive", counts.positive},
                        {"negative", counts.negative},
                        {"neutral", counts.neutral}};
    return {{"chunk_index", record.chunk_index},
            {"local_summary", record.local_summary},
            {"dictionary_snapshot", dict},
            {"global_summary_after", record.global_summary_after},
            {"generation_calls", record.generation_calls}};
}

AspectDictionary dictionary_from(const json& doc) {
    AspectDictionary dict;
    for (const auto& [aspect, counts] : doc.items())
        dict[aspect] = SentimentCounts{counts.value("positive", std::uint64_t{0}),
                                       counts.value("negative", std::uint64_t{0}),
                                       counts.value("neutral", std::uint64_t{0})};
    return dict;
}

}  // namespace

std::size_t default_tau_for_context(std::size_t context_limit_tokens) {
    return context_limit_tokens >= 8000 ? 4000 : 2700;
}

const PromptTemplates& PromptTemplates::defaults() {
    static const PromptTemplates templates{kLocalSummaryTemplate, kUpdateRulesTemplate,
                                           kOneShotExample};
    return templates;
}

PromptTemplates PromptTemplates::load(const std::string& dir) {
    PromptTemplates templates;
    templates.local_summary = read_file(dir + "/local_summary.txt");
    templates.update_rules = read_file(dir + "/update_rules.txt");
    templates.one_shot_example = read_file(dir + "/one_shot_example.txt");
    return templates;
}

std::string chunk_checksum(const ProductCorpus& corpus, const Chunk& chunk) {
    std::map<std::string_view, const Review*> by_id;
    for (const auto& review : corpus.reviews) by_id.emplace(review.id, &review);
    std::uint64_t h = fnv1a64(chunk.truncated ? "t" : "f");
    for (const auto& id : chunk.review_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw PreconditionError("chunk references unknown review id: " + id);
        h = fnv1a64(id, h);
        h = fnv1a64("\x1f", h);
        h = fnv1a64(it->second->text, h);
        h = fnv1a64("\x1e", h);
    }
    return hex64(h);
}

std::string state_to_json(const SummaryState& state) {
    json trace = json::array();
    for (const auto& record : state.trace) trace.push_back(record_to_json(record));
    json dict = json::object();
    for (const auto& [aspect, counts] : state.dictionary)
        dict[aspect] = {{"positive", counts.positive},
                        {"negative", counts.negative},
                        {"neutral", counts.neutral}};
    json doc = {{"product_id", state.product_id},
                {"global_summary", state.global_summary},
                {"dictionary", dict},
                {"next_chunk_index", state.next_chunk_index},
                {"trace", trace},
                {"chunk_checksums", state.chunk_checksums}};
    return doc.dump(2);
}

SummaryState state_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid state JSON: ") + e.what());
    }
    SummaryState state;
    try {
        state.product_id = doc.at("product_id").get<std::string>();
        state.global_summary = doc.at("global_summary").get<std::string>();
        state.dictionary = dictionary_from(doc.at("dictionary"));
        state.next_chunk_index = doc.at("next_chunk_index").get<std::size_t>();
        state.chunk_checksums = doc.at("chunk_checksums").get<std::vector<std::string>>();
        for (const auto& rec : doc.at("trace")) {
            ChunkRecord record;
            record.chunk_index = rec.at("chunk_index").get<std::size_t>();
            record.local_summary = rec.at("local_summary").get<std::string>();
            record.dictionary_snapshot = dictionary_from(rec.at("dictionary_snapshot"));
            record.global_summary_after = rec.at("global_summary_after").get<std::string>();
            record.generation_calls = rec.at("generation_calls").get<int>();
            state.trace.push_back(std::move(record));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad state record: ") + e.what());
    }
    if (state.next_chunk_index != state.trace.size() ||
        state.next_chunk_index != state.chunk_checksums.size())
        throw ParseError("inconsistent state: trace/checksum length != next_chunk_index");
    return state;
}

std::string build_local_prompt(const std::vector<std::string>& review_texts,
                               const PipelineConfig& config, const PromptTemplates& prompts) {
    std::string reviews;
    for (std::size_t i = 0; i < review_texts.size(); ++i) {
        if (!reviews.empty()) reviews += '\n';
        reviews += std::to_string(i + 1) + ". " + review_texts[i];
    }
    std::string prompt = replace_all(prompts.local_summary, "word_limit",
                                     std::to_string(config.word_limit));
    return replace_all(std::move(prompt), "reviews", reviews);
}

std::string build_update_prompt(const std::string& prev_global, const std::string& local,
                                const std::string& dict_block, const PipelineConfig& config,
                                const PromptTemplates& prompts) {
    if (prev_global.empty()) throw PreconditionError("previous global summary is empty");
    if (local.empty()) throw PreconditionError("local summary is empty");
    std::string prompt = replace_all(prompts.update_rules, "word_limit",
                                     std::to_string(config.word_limit));
    prompt = replace_all(std::move(prompt), "one_shot", prompts.one_shot_example);
    prompt = replace_all(std::move(prompt), "dictionary", dict_block);
    prompt = replace_all(std::move(prompt), "global", prev_global);
    return replace_all(std::move(prompt), "local", local);
}

std::string generate_local_summary(GenerationBackend& backend,
                                   const std::vector<std::string>& review_texts,
                                   const PipelineConfig& config, const PromptTemplates& prompts) {
    if (review_texts.empty()) throw PreconditionError("cannot summarize an empty review list");
    std::string prompt = build_local_prompt(review_texts, config, prompts);
    check_context(prompt, config);
    std::string summary = backend.generate(make_request(std::move(prompt), config));
    if (summary.empty()) throw BackendError("backend returned an empty local summary");
    return summary;
}

std::string update_global_summary(GenerationBackend& backend, const SummaryState& state,
                                  const std::string& local, const PipelineConfig& config,
                                  const PromptTemplates& prompts) {
    std::string dict_block = serialize_dictionary(state.dictionary, config.dict_top_k);
    std::string prompt =
        build_update_prompt(state.global_summary, local, dict_block, config, prompts);
    check_context(prompt, config);
    std::string summary = backend.generate(make_request(std::move(prompt), config));
    if (summary.empty()) throw BackendError("backend returned an empty global summary");
    return summary;
}

namespace {

SummaryState process_chunks(SummaryState state, const ProductCorpus& corpus,
                            const std::vector<Chunk>& chunks, const PipelineConfig& config,
                            GenerationBackend& gen, EmbeddingBackend& embed,
                            AspectExtractor& extractor, const StateCheckpoint& checkpoint,
                            const PromptTemplates& prompts) {
    for (std::size_t i = state.next_chunk_index; i < chunks.size(); ++i) {
        const Chunk& chunk = chunks[i];
        const std::vector<std::string> texts = chunk_texts(corpus, chunk, config.tau);

        // mentions merged in review order keeps the run deterministic
        std::vector<AspectMention> mentions;
        for (const auto& text : texts)
            for (auto& mention : extractor.extract(text)) mentions.push_back(std::move(mention));
        AspectDictionary dict = update_dictionary(state.dictionary, mentions);
        dict = cluster_aspects(dict, embed, config.cluster_threshold);

        const std::string local = generate_local_summary(gen, texts, config, prompts);
        std::string global;
        int calls = 0;
        if (i == 0) {
            global = local;  // chunk 0 initializes the global summary directly
            calls = 1;
        } else {
            SummaryState working = state;
            working.dictionary = dict;
            global = update_global_summary(gen, working, local, config, prompts);
            calls = 2;
        }

        // commit only after every step of the chunk succeeded
        state.dictionary = std::move(dict);
        state.global_summary = global;
        state.trace.push_back(
            ChunkRecord{chunk.index, local, state.dictionary, std::move(global), calls});
        state.chunk_checksums.push_back(chunk_checksum(corpus, chunk));
        state.next_chunk_index = i + 1;
        if (checkpoint) checkpoint(state);
    }
    return state;
}

}  // namespace

SummaryState run_pipeline(const ProductCorpus& corpus, const PipelineConfig& config,
                          GenerationBackend& gen, EmbeddingBackend& embed,
                          AspectExtractor& extractor, const StateCheckpoint& checkpoint,
                          const PromptTemplates& prompts) {
    if (corpus.reviews.empty()) throw PreconditionError("corpus has no reviews");
    SummaryState state;
    state.product_id = corpus.product_id;
    return process_chunks(std::move(state), corpus, chunk_reviews(corpus, config.tau), config,
                          gen, embed, extractor, checkpoint, prompts);
}

SummaryState resume_pipeline(SummaryState state, const ProductCorpus& corpus,
                             const PipelineConfig& config, GenerationBackend& gen,
                             EmbeddingBackend& embed, AspectExtractor& extractor,
                             const StateCheckpoint& checkpoint, const PromptTemplates& prompts) {
    const std::vector<Chunk> chunks = chunk_reviews(corpus, config.tau);
    if (state.next_chunk_index > chunks.size())
        throw ChecksumError("state has " + std::to_string(state.next_chunk_index) +
                            " processed chunks but the corpus yields only " +
                            std::to_string(chunks.size()) + "; run afresh");
    if (state.chunk_checksums.size() != state.next_chunk_index)
        throw ChecksumError("state checksum list is inconsistent; run afresh");
    for (std::size_t i = 0; i < state.next_chunk_index; ++i)
        if (chunk_checksum(corpus, chunks[i]) != state.chunk_checksums[i])
            throw ChecksumError("chunk " + std::to_string(i) +
                                " no longer matches its checksum; run afresh");
    return process_chunks(std::move(state), corpus, chunks, config, gen, embed, extractor,
                          checkpoint, prompts);
}

}  // namespace opsumm
