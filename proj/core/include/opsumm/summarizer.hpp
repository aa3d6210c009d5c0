#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "opsumm/absa.hpp"
#include "opsumm/backends.hpp"
#include "opsumm/corpus.hpp"

namespace opsumm {

struct PipelineConfig {
    std::size_t tau = 4000;          // chunk token budget
    double temperature = 0.8;
    int word_limit = 100;
    double cluster_threshold = 0.75;
    std::size_t dict_top_k = 30;     // dictionary lines embedded in the update prompt
    std::size_t context_limit_tokens = 8192;
    int max_tokens = 512;
    std::string model;
};

// tau defaults follow the backend's context window: 4000 at >= 8k context,
// 2700 below.
std::size_t default_tau_for_context(std::size_t context_limit_tokens);

// Prompt templates with {placeholders}. Defaults are compiled in and mirror
// the files under prompts/; load() overrides from such a directory.
struct PromptTemplates {
    std::string local_summary;    // {word_limit} {reviews}
    std::string update_rules;     // {word_limit} {one_shot} {dictionary} {global} {local}
    std::string one_shot_example;

    static const PromptTemplates& defaults();
    static PromptTemplates load(const std::string& dir);
};

struct ChunkRecord {
    std::size_t chunk_index = 0;
    std::string local_summary;
    AspectDictionary dictionary_snapshot;
    std::string global_summary_after;
    int generation_calls = 0;  // 1 for the initialization chunk, 2 thereafter
};

// Resumable per-product pipeline state. chunk_checksums[i] fingerprints the
// ids+texts of chunk i so a resume can prove the corpus prefix is unchanged.
struct SummaryState {
    std::string product_id;
    std::string global_summary;
    AspectDictionary dictionary;
    std::size_t next_chunk_index = 0;
    std::vector<ChunkRecord> trace;
    std::vector<std::string> chunk_checksums;
};

std::string state_to_json(const SummaryState& state);
SummaryState state_from_json(const std::string& json_text);

std::string chunk_checksum(const ProductCorpus& corpus, const Chunk& chunk);

// --- prompt builders ----------------------------------------------------------

std::string build_local_prompt(const std::vector<std::string>& review_texts,
                               const PipelineConfig& config,
                               const PromptTemplates& prompts = PromptTemplates::defaults());

// Update prompt per the global-updation protocol: instruction header, the
// new-aspect rule, the conflict rule, the one-shot example, the serialized
// dictionary block, then the previous global and current local summaries.
std::string build_update_prompt(const std::string& prev_global, const std::string& local,
                                const std::string& dict_block,
                                const PipelineConfig& config = {},
                                const PromptTemplates& prompts = PromptTemplates::defaults());

// --- pipeline -----------------------------------------------------------------

// One generation call over the chunk's reviews rendered as a numbered list.
std::string generate_local_summary(GenerationBackend& backend,
                                   const std::vector<std::string>& review_texts,
                                   const PipelineConfig& config,
                                   const PromptTemplates& prompts = PromptTemplates::defaults());

// One generation call with the update prompt; returns the new global summary.
std::string update_global_summary(GenerationBackend& backend, const SummaryState& state,
                                  const std::string& local, const PipelineConfig& config,
                                  const PromptTemplates& prompts = PromptTemplates::defaults());

using StateCheckpoint = std::function<void(const SummaryState&)>;

// Full run: chunk 0 initializes the global summary from its local summary
// (one call); every later chunk adds one local call plus one update call,
// 2n-1 calls total. The dictionary is updated and re-clustered before each
// chunk's generation. `checkpoint`, when set, fires after every committed
// chunk; a failure mid-chunk leaves the state at the previous chunk.
SummaryState run_pipeline(const ProductCorpus& corpus, const PipelineConfig& config,
                          GenerationBackend& gen, EmbeddingBackend& embed,
                          AspectExtractor& extractor, const StateCheckpoint& checkpoint = {},
                          const PromptTemplates& prompts = PromptTemplates::defaults());

// Continues a persisted state at next_chunk_index after validating the
// chunk checksums of the already-processed prefix. Appending reviews only
// appends chunks, so prior work is reused verbatim.
SummaryState resume_pipeline(SummaryState state, const ProductCorpus& corpus,
                             const PipelineConfig& config, GenerationBackend& gen,
                             EmbeddingBackend& embed, AspectExtractor& extractor,
                             const StateCheckpoint& checkpoint = {},
                             const PromptTemplates& prompts = PromptTemplates::defaults());

}  // namespace opsumm
