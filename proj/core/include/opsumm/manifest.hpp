#pragma once

#include <string>

#include "opsumm/summarizer.hpp"

namespace opsumm {

enum class SystemKind { XlOpsumm, Incremental, Hierarchical, Full };

std::string_view to_string(SystemKind s);
SystemKind parse_system_kind(std::string_view name);

// Provenance record written next to every summarize run's outputs.
struct RunManifest {
    std::string run_id;
    SystemKind system = SystemKind::XlOpsumm;
    PipelineConfig config;
    std::string generation_backend;
    std::string embedding_backend;
    std::string corpus_path;
    std::string started_at;   // ISO-8601 UTC
    std::string finished_at;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& json_text);

std::string iso8601_now();

}  // namespace opsumm
