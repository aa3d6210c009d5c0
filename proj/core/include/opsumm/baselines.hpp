#pragma once

#include <string>
#include <vector>

#include "opsumm/backends.hpp"
#include "opsumm/corpus.hpp"
#include "opsumm/summarizer.hpp"

namespace opsumm {

// One node of the hierarchical merge tree. Level 0 nodes summarize single
// chunks; higher levels merge consecutive child summaries only.
struct MergeNode {
    std::size_t level = 0;
    std::vector<std::size_t> children;  // chunk indices at level 0, node indices above
    std::string summary;
};

// Running-summary updates without an aspect dictionary: chunk 0 seeds the
// summary, each later chunk issues one update call. Exactly n calls.
std::string incremental_baseline(const ProductCorpus& corpus, const PipelineConfig& config,
                                 GenerationBackend& backend);

// Summarize every chunk (n calls), then repeatedly pack consecutive
// summaries into merge groups whose combined token count fits tau and merge
// each group with one call, until a single summary remains. A trailing
// summary that cannot join a group is carried up unchanged; a level that
// cannot merge anything throws (tau too small).
std::string hierarchical_baseline(const ProductCorpus& corpus, const PipelineConfig& config,
                                  GenerationBackend& backend,
                                  std::vector<MergeNode>* tree = nullptr);

// All reviews concatenated in order, truncated to the context limit minus
// the prompt scaffold; exactly one call.
std::string full_context_baseline(const ProductCorpus& corpus, const PipelineConfig& config,
                                  GenerationBackend& backend);

}  // namespace opsumm
