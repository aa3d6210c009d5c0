#include "opsumm/baselines.hpp"

#include <string>

#include "opsumm/errors.hpp"

namespace opsumm {

namespace {

constexpr const char* kIncrementalTemplate =
    "Update the following summary using these new reviews. Keep the result as a review itself "
    "with a word limit of under {word_limit} words, using information from the summary and the "
    "reviews only.\n"
    "SUMMARY:\n"
    "{summary}\n"
    "reviews:\n"
    "{reviews}\n";

constexpr const char* kMergeTemplate =
    "Following are several summaries of the reviews of one product. Merge them into a single "
    "summary of the opinions as a review itself with a word limit of under {word_limit} words. "
    "Use information from the given summaries only.\n"
    "summaries:\n"
    "{summaries}\n";

std::string replace_all(std::string text, std::string_view key, std::string_view value) {
    const std::string needle = "{" + std::string(key) + "}";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), value);
        pos += value.size();
    }
    return text;
}

std::string numbered_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!out.empty()) out += '\n';
        out += std::to_string(i + 1) + ". " + items[i];
    }
    return out;
}

GenerationRequest make_request(std::string prompt, const PipelineConfig& config) {
    GenerationRequest request;
    request.user_prompt = std::move(prompt);
    request.temperature = config.temperature;
    request.max_tokens = config.max_tokens;
    request.model = config.model;
    return request;
}

std::string checked_generate(GenerationBackend& backend, std::string prompt,
                             const PipelineConfig& config) {
    const std::size_t tokens = count_tokens(prompt);
    if (tokens > config.context_limit_tokens)
        throw PreconditionError("assembled prompt of " + std::to_string(tokens) +
                                " tokens exceeds context limit of " +
                                std::to_string(config.context_limit_tokens));
    std::string out = backend.generate(make_request(std::move(prompt), config));
    if (out.empty()) throw BackendError("backend returned an empty completion");
    return out;
}

}  // namespace

std::string incremental_baseline(const ProductCorpus& corpus, const PipelineConfig& config,
                                 GenerationBackend& backend) {
    if (corpus.reviews.empty()) throw PreconditionError("corpus has no reviews");
    const auto chunks = chunk_reviews(corpus, config.tau);
    std::string running;
    for (const auto& chunk : chunks) {
        const auto texts = chunk_texts(corpus, chunk, config.tau);
        if (chunk.index == 0) {
            running = generate_local_summary(backend, texts, config);
            continue;
        }
        std::string prompt = replace_all(kIncrementalTemplate, "word_limit",
                                         std::to_string(config.word_limit));
        prompt = replace_all(std::move(prompt), "summary", running);
        prompt = replace_all(std::move(prompt), "reviews", numbered_list(texts));
        running = checked_generate(backend, std::move(prompt), config);
    }
    return running;
}

std::string hierarchical_baseline(const ProductCorpus& corpus, const PipelineConfig& config,
                                  GenerationBackend& backend, std::vector<MergeNode>* tree) {
    if (corpus.reviews.empty()) throw PreconditionError("corpus has no reviews");
    const auto chunks = chunk_reviews(corpus, config.tau);

    std::vector<MergeNode> nodes;
    std::vector<std::size_t> level;  // node indices of the current level, left to right
    for (const auto& chunk : chunks) {
        const auto texts = chunk_texts(corpus, chunk, config.tau);
        nodes.push_back(MergeNode{0, {chunk.index}, generate_local_summary(backend, texts, config)});
        level.push_back(nodes.size() - 1);
    }

    std::size_t depth = 0;
    while (level.size() > 1) {
        ++depth;
        std::vector<std::size_t> next;
        std::size_t i = 0;
        bool merged_any = false;
        while (i < level.size()) {
            // greedy group: consecutive summaries while their combined token
            // count stays within tau
            std::vector<std::size_t> group{level[i]};
            std::size_t group_tokens = count_tokens(nodes[level[i]].summary);
            std::size_t j = i + 1;
            while (j < level.size()) {
                const std::size_t t = count_tokens(nodes[level[j]].summary);
                if (group_tokens + t > config.tau) break;
                group.push_back(level[j]);
                group_tokens += t;
                ++j;
            }
            if (group.size() == 1) {
                // a lone summary carries up unchanged; no merge call
                next.push_back(level[i]);
                i = j;
                continue;
            }
            std::vector<std::string> summaries;
            summaries.reserve(group.size());
            for (std::size_t idx : group) summaries.push_back(nodes[idx].summary);
            std::string prompt =
                replace_all(kMergeTemplate, "word_limit", std::to_string(config.word_limit));
            prompt = replace_all(std::move(prompt), "summaries", numbered_list(summaries));
            nodes.push_back(MergeNode{depth, group, checked_generate(backend, std::move(prompt),
                                                                     config)});
            next.push_back(nodes.size() - 1);
            merged_any = true;
            i = j;
        }
        if (!merged_any)
            throw Error("hierarchical merge cannot fit two summaries under tau=" +
                        std::to_string(config.tau) + "; increase tau");
        level = std::move(next);
    }

    if (tree) *tree = nodes;
    return nodes[level.front()].summary;
}

std::string full_context_baseline(const ProductCorpus& corpus, const PipelineConfig& config,
                                  GenerationBackend& backend) {
    if (corpus.reviews.empty()) throw PreconditionError("corpus has no reviews");
    std::string joined;
    for (const auto& review : corpus.reviews) {
        if (!joined.empty()) joined += '\n';
        joined += review.text;
    }
    const std::string scaffold =
        replace_all(replace_all(PromptTemplates::defaults().local_summary, "word_limit",
                                std::to_string(config.word_limit)),
                    "reviews", "");
    const std::size_t scaffold_tokens = count_tokens(scaffold);
    if (scaffold_tokens >= config.context_limit_tokens)
        throw PreconditionError("context limit smaller than the prompt scaffold");
    joined = truncate_to_tokens(joined, config.context_limit_tokens - scaffold_tokens);

    std::string prompt = replace_all(PromptTemplates::defaults().local_summary, "word_limit",
                                     std::to_string(config.word_limit));
    prompt = replace_all(std::move(prompt), "reviews", joined);
    return checked_generate(backend, std::move(prompt), config);
}

}  // namespace opsumm
